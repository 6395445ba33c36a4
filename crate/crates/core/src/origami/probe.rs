use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::surface::Origami;
use super::trace::cylinders_in_direction;

/// Largest singular value drawn by the probe.
pub const MAX_SINGULAR_VALUE: f64 = 1e3;

/// Hermite's constant for the plane, `sqrt(2/√3)`: the largest possible shortest vector of a
/// unimodular planar lattice.
pub fn hermite_planar() -> f64 {
    (2.0 / 3f64.sqrt()).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub g: [[f64; 2]; 2],
    /// Shortest `‖g·w‖` over cylinder core holonomies `w`.
    pub shortest: Option<f64>,
    /// Primitive direction `(p, q)` realising the minimum and the cylinder multiple.
    pub witness: Option<(i64, i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    /// Largest shortest length seen.
    pub empirical_max: f64,
    /// `radius` if given, otherwise the empirical maximum.
    pub bound: f64,
    /// Samples where the enumeration found no cylinder.
    pub failures: usize,
    pub pass: bool,
}

fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

fn matmul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn apply(g: [[f64; 2]; 2], (p, q): (i64, i64)) -> f64 {
    let (a, b) = (p as f64, q as f64);
    (g[0][0] * a + g[0][1] * b).hypot(g[1][0] * a + g[1][1] * b)
}

/// `k_θ · diag(σ, 1/σ) · k_φ` with `ln σ` uniform on `[0, ln MAX_SINGULAR_VALUE]`.
pub fn random_element(rng: &mut impl Rng) -> [[f64; 2]; 2] {
    let sigma = (rng.gen::<f64>() * MAX_SINGULAR_VALUE.ln()).exp();
    let theta = rng.gen::<f64>() * std::f64::consts::TAU;
    let phi = rng.gen::<f64>() * std::f64::consts::TAU;
    matmul(matmul(rotation(theta), [[sigma, 0.0], [0.0, 1.0 / sigma]]), rotation(phi))
}

fn image_dot(g: [[f64; 2]; 2], a: (i64, i64), b: (i64, i64)) -> f64 {
    let image = |u: (i64, i64)| {
        [g[0][0] * u.0 as f64 + g[0][1] * u.1 as f64, g[1][0] * u.0 as f64 + g[1][1] * u.1 as f64]
    };
    let (va, vb) = (image(a), image(b));
    va[0] * vb[0] + va[1] * vb[1]
}

/// Integer coordinates of a Gauss-reduced basis of `g·Z²`, shortest first.
fn gauss_reduce(g: [[f64; 2]; 2]) -> [(i64, i64); 2] {
    let mut u = [(1i64, 0i64), (0i64, 1i64)];
    let len = |u: (i64, i64)| apply(g, u);
    loop {
        if len(u[1]) < len(u[0]) {
            u.swap(0, 1);
        }
        let mu = (image_dot(g, u[0], u[1]) / image_dot(g, u[0], u[0])).round() as i64;
        if mu == 0 {
            break;
        }
        u[1] = (u[1].0 - mu * u[0].0, u[1].1 - mu * u[0].1);
        if len(u[1]) >= len(u[0]) {
            break;
        }
    }
    u
}

/// Integer vectors `u ≠ 0` with `‖g u‖ ≤ bound`, one of each `±` pair, sorted by length.
pub(crate) fn short_integer_vectors(g: [[f64; 2]; 2], bound: f64) -> Vec<((i64, i64), f64)> {
    let u = gauss_reduce(g);
    let len = |u: (i64, i64)| apply(g, u);
    let dot = |a: (i64, i64), b: (i64, i64)| image_dot(g, a, b);
    let b1 = len(u[0]);
    let mu = dot(u[0], u[1]) / (b1 * b1);
    let b2_star = (len(u[1]).powi(2) - mu * mu * b1 * b1).max(0.0).sqrt();
    let c2_max = (bound / b2_star).floor() as i64;
    let mut out = Vec::new();
    for c2 in 0..=c2_max {
        let rest = (bound * bound - (c2 as f64 * b2_star).powi(2)).max(0.0).sqrt() / b1;
        let centre = -mu * c2 as f64;
        let lo = (centre - rest).floor() as i64 - 1;
        let hi = (centre + rest).ceil() as i64 + 1;
        for c1 in lo..=hi {
            if c2 == 0 && c1 <= 0 {
                continue;
            }
            let w = (c1 * u[0].0 + c2 * u[1].0, c1 * u[0].1 + c2 * u[1].1);
            let l = len(w);
            if l <= bound {
                out.push((w, l));
            }
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Shortest image of a cylinder core under `g`, with its witness.
pub fn shortest_cylinder(surface: &Origami, g: [[f64; 2]; 2]) -> Option<(f64, (i64, i64, i64))> {
    // every direction carries a cylinder of core multiple at most n
    let shortest_lattice = apply(g, gauss_reduce(g)[0]);
    let bound = surface.n() as f64 * shortest_lattice * (1.0 + 1e-12);
    let mut best: Option<(f64, (i64, i64, i64))> = None;
    for ((p, q), l) in short_integer_vectors(g, bound) {
        if gcd(p, q) != 1 {
            continue;
        }
        if best.is_some_and(|b| l >= b.0) {
            break;
        }
        if let Some(&m) = cylinders_in_direction(surface, p, q).iter().min() {
            let len = m as f64 * l;
            if best.is_none_or(|b| len < b.0) {
                best = Some((len, (p, q, m)));
            }
        }
    }
    best
}

/// Shortest cylinder holonomy under `samples` seeded random elements of `SL(2, R)`.
///
/// With `radius` given, the probe passes when every sample finds a cylinder of length at
/// most `radius`; otherwise the empirical maximum is reported as the bound.
pub fn minkowski_probe(surface: &Origami, samples: usize, radius: Option<f64>, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<[[f64; 2]; 2]> = (0..samples).map(|_| random_element(&mut rng)).collect();
    let samples: Vec<ProbeSample> = gs
        .into_iter()
        .map(|g| {
            let found = shortest_cylinder(surface, g);
            ProbeSample { g, shortest: found.map(|f| f.0), witness: found.map(|f| f.1) }
        })
        .collect();
    let failures = samples.iter().filter(|s| s.shortest.is_none()).count();
    let empirical_max = samples.iter().filter_map(|s| s.shortest).fold(0.0, f64::max);
    let bound = radius.unwrap_or(empirical_max);
    let pass = failures == 0 && samples.iter().all(|s| s.shortest.is_some_and(|l| l <= bound));
    ProbeReport { samples, empirical_max, bound, failures, pass }
}
