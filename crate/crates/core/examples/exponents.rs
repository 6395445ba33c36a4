//! Exponent estimates and the two identities for a few numbers.

use cusp_excursion::analytics::{verify_axiomatic, Budget};
use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::lattice::{LatticeProvider, LatticeSpec};

fn main() -> cusp_excursion::Result<()> {
    let cases = [
        ("golden", 256, 1e6),
        ("sqrt:2/1", 256, 1e6),
        ("liouville:b=2,nu=3,b1=2,k=7", 4096, 2f64.powi(200)),
        ("liouville:b=2,nu=2.5,b1=2,k=8", 4096, 2f64.powi(200)),
    ];
    println!("{:<32} {:>8} {:>8} {:>8} {:>10} {:>10}", "alpha", "mu", "beta", "gamma", "|b-1/2-g|", "|b-1+1/mu|");
    for (spec, bits, radius) in cases {
        let alpha = scalar_from_spec(&spec.parse::<NumberSpec>()?, bits)?;
        let provider = LatticeProvider::new(LatticeSpec::planar(alpha))?;
        let r = verify_axiomatic(&provider, Budget { r_max: radius, tolerance: 0.05 })?;
        println!(
            "{spec:<32} {:>8.4} {:>8.4} {:>8.4} {:>10.2e} {:>10.2e}",
            r.mu_hat, r.beta_hat, r.gamma_hat, r.residuals.beta_gamma, r.residuals.beta_mu
        );
    }
    Ok(())
}
