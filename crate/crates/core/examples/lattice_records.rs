//! Record tables of planar and higher-dimensional lattices.

use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::lattice::{records, LatticeProvider, LatticeSpec};
use cusp_excursion::splitspace::SplitShape;

fn main() -> cusp_excursion::Result<()> {
    let golden = scalar_from_spec(&"golden".parse::<NumberSpec>()?, 256)?;
    let table = records(&LatticeProvider::new(LatticeSpec::planar(golden))?, 1e4)?;
    println!("golden ratio, ||p2|| <= 1e4: {} records (certified: {})", table.len(), table.is_certified());
    for r in table.iter() {
        println!("  ||p2|| = {:>6.0}   ||p1|| = {:.6e}   ||p1|| ||p2|| = {:.6}", r.y(), r.x(), r.markoff_product());
    }

    // one linear form in two variables: records come from a geodesic sweep
    let shape = SplitShape::new(1, 2)?;
    let a = ["sqrt:2/1", "sqrt:3/1"]
        .iter()
        .map(|s| scalar_from_spec(&s.parse::<NumberSpec>()?, 128))
        .collect::<cusp_excursion::Result<Vec<_>>>()?;
    let table = records(&LatticeProvider::new(LatticeSpec::homogeneous(shape, a))?, 1e3)?;
    println!("\n(sqrt 2, sqrt 3) as a 1x2 form, ||p2|| <= 1e3:");
    print!("{}", table.to_csv());
    Ok(())
}
