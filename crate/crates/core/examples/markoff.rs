//! Markoff constant and sigma, with the one-sided exponents.

use cusp_excursion::analytics::{markoff_sigma, one_sided, Side};
use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::lattice::{records, LatticeProvider, LatticeSpec};

fn main() -> cusp_excursion::Result<()> {
    for spec in ["golden", "sqrt:2/1", "sqrt:3/1"] {
        let alpha = scalar_from_spec(&spec.parse::<NumberSpec>()?, 256)?;
        let table = records(&LatticeProvider::new(LatticeSpec::planar(alpha))?, 1e6)?;
        let ms = markoff_sigma(&table)?;
        let plus = one_sided(&table, Side::Plus)?;
        let minus = one_sided(&table, Side::Minus)?;
        println!(
            "{spec:<10} c~ = {:.6}  sigma = {:.6}  c~^(-1/2) = {:.6}  mu+ = {:.4}  mu- = {:.4}",
            ms.c_tilde,
            ms.sigma.unwrap_or(f64::INFINITY),
            ms.c_tilde.powf(-0.5),
            plus.mu.unwrap_or(f64::NAN),
            minus.mu.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
