use num_rational::BigRational;
use num_traits::One;

use super::linalg::Transform;
use super::provider::{DiscreteSetProvider, LatticeProvider};
use crate::arithmetic::rat_from_f64;
use crate::error::{Error, Result};
use crate::splitspace::{SplitShape, SplitVector};

/// Volume of the Euclidean unit ball in `R^k`.
pub fn unit_ball_volume(k: usize) -> f64 {
    match k {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(k - 2) * 2.0 * std::f64::consts::PI / k as f64,
    }
}

/// `D = (2^d / (a_m a_n))^{1/m}`: the box `||p_1|| <= D/j`, `||p_2|| <= j^{m/n}`
/// has volume `2^d` for every `j`.
pub fn dirichlet_constant(shape: SplitShape) -> f64 {
    let d = shape.d() as i32;
    (2f64.powi(d) / (unit_ball_volume(shape.m) * unit_ball_volume(shape.n))).powf(1.0 / shape.m as f64)
}

/// A vector in the Minkowski box `K_j`, the one with the smallest `||p_1||`.
pub fn dirichlet_witness(provider: &LatticeProvider, j: u64) -> Result<SplitVector> {
    if j == 0 {
        return Err(Error::InvalidArgument("j must be positive".into()));
    }
    let shape = provider.shape();
    let (m, n, d) = (shape.m as f64, shape.n as f64, shape.d() as f64);
    let big_d = dirichlet_constant(shape);
    let jf = j as f64;
    let xb = big_d / jf;
    let yb = jf.powf(m / n);
    // balance the box: a^n xb = a^{-m} yb
    let a = (yb / xb).powf(1.0 / d);
    let rho = a.powf(-m) * yb;
    let ar = rat_from_f64(a);
    let g = Transform::diagonal(shape, &ar);
    let ginv = Transform::diagonal(shape, &ar.recip());
    let exact_box = shape == SplitShape::planar();
    let x2 = BigRational::one() / rat_from_f64(jf * jf);
    let y2 = rat_from_f64(jf * jf);
    let mut best: Option<SplitVector> = None;
    for (v, _) in provider.enumerate_with_multiplicity(Some(&g), rho * 1.01)? {
        let v = ginv.apply(&v);
        let inside = if exact_box {
            v.p1_norm_sq() <= x2 && v.p2_norm_sq() <= y2
        } else {
            v.p1_norm() <= xb * (1.0 + 1e-12) && v.p2_norm() <= yb * (1.0 + 1e-12)
        };
        if !inside {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (v.p1_norm_sq(), v.p2_norm_sq()) < (b.p1_norm_sq(), b.p2_norm_sq()),
        };
        if better {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptySet)
}
