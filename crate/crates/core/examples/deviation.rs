//! Horocycle deviation at the located time s_0 for a Liouville point.

use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::hyperbolic::{cusp_volume_constant, deviation_experiment, DeviationParams, FuchsianContext};

fn main() -> cusp_excursion::Result<()> {
    let ctx = FuchsianContext::sl2z();
    let c = cusp_volume_constant(&ctx, 200_000, 7);
    println!("cusp volume constant c = {:.4} ({} samples)", c.c, c.samples);

    let alpha = scalar_from_spec(&"liouville:b=2,nu=3,b1=2,k=7".parse::<NumberSpec>()?, 4096)?;
    let rec = deviation_experiment(&ctx, &alpha, &DeviationParams::default())?;
    println!("gamma = {:.4}, epsilon = {:.4}, delta = {}", rec.gamma, rec.epsilon, rec.delta);
    println!("s_0 = {:.4e}, depth at s_0 = {:.3}", rec.s_0, rec.depth_at_s0);
    println!("measured {:.4e}, expected {:.4e}", rec.integral, rec.expected);
    println!("deviation {:.4e} against bound {:.4e}: {}", rec.deviation, rec.bound, if rec.pass { "exceeds" } else { "below" });
    Ok(())
}
