//! Cusp depth along a geodesic ray, and horocycle against geodesic excursion rates.

use cusp_excursion::arithmetic::{scalar_from_spec, NumberSpec};
use cusp_excursion::hyperbolic::{geodesic_trajectory, horocycle_excursion, quantitative_mahler_check, FuchsianContext};

fn main() -> cusp_excursion::Result<()> {
    for ctx in [FuchsianContext::sl2z(), FuchsianContext::gamma2()] {
        let times: Vec<f64> = (1..=6).map(|k| 5.0 * k as f64).collect();
        let traj = geodesic_trajectory(ctx.base(), &times);
        println!("{:?}: depth / (2 log alpha_1) along g_(-t) x0", ctx.group());
        for s in quantitative_mahler_check(&ctx, &traj, &ctx.all_cusps())? {
            println!("  t = {:>4.1}  depth = {:>8.4}  ratio = {:?}", s.parameter, s.depth, s.ratio);
        }
    }

    let ctx = FuchsianContext::sl2z();
    for spec in ["golden", "liouville:b=2,nu=3,b1=2,k=7"] {
        let alpha = scalar_from_spec(&spec.parse::<NumberSpec>()?, 4096)?;
        let ex = horocycle_excursion(&ctx, &alpha, 1e6)?;
        println!(
            "{spec}: beta_dist = {:.4}, gamma_dist = {:.4}, beta_dist - 1 - gamma_dist = {:+.4}",
            ex.beta_dist, ex.gamma_dist, ex.residual
        );
    }
    Ok(())
}
