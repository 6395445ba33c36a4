//! Excursion rates of the saddle and cylinder sets of the L under the golden shear.

use cusp_excursion::analytics::Budget;
use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::origami::{qd_excursion, Origami};

fn main() -> cusp_excursion::Result<()> {
    let alpha = scalar_from_spec(&"golden".parse::<NumberSpec>()?, 256)?;
    let ex = qd_excursion(&Origami::l_shape(), &alpha, Budget { r_max: 1e4, tolerance: 0.05 })?;
    for (name, r, n) in [("saddles", &ex.saddle, ex.saddle_candidates), ("cylinders", &ex.cylinder, ex.cylinder_candidates)] {
        println!(
            "{name:<10} {n:>6} candidates  mu = {:.4}  beta = {:.4}  gamma = {:.4}",
            r.mu_hat, r.beta_hat, r.gamma_hat
        );
    }
    Ok(())
}
