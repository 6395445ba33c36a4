mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{primitive_vectors, renormalised_spectrum, spectrum_counts, unfolded_saddles};
use cusp_excursion::analytics::{
    markoff_sigma, mu_hat, one_sided, running_estimates, verify_axiomatic, Budget, Side,
};
use cusp_excursion::arithmetic::{scalar_from_spec, ExactScalar, NumberSpec};
use cusp_excursion::hyperbolic::{
    deviation_experiment, geodesic_trajectory, horocycle_excursion, quantitative_mahler_check, DeviationParams,
    FuchsianContext,
};
use cusp_excursion::lattice::{records, LatticeProvider, LatticeSpec, RecordTable};
use cusp_excursion::origami::{cylinders, minkowski_probe, saddle_connections, Origami};
use cusp_excursion::splitspace::{
    apply_diagonal, apply_shear, optimal_time, split_norm, ShearMatrix, SplitShape, SplitVector,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn scalar(spec: &str, bits: u32) -> ExactScalar {
    scalar_from_spec(&spec.parse::<NumberSpec>().unwrap(), bits).unwrap()
}

fn planar(spec: &str, bits: u32) -> LatticeProvider {
    LatticeProvider::new(LatticeSpec::planar(scalar(spec, bits))).unwrap()
}

fn within(name: &str, value: f64, target: f64, tol: f64) -> Result<String, String> {
    let line = format!("{name} = {value:.6} (want {target} ± {tol})");
    if (value - target).abs() <= tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn all(parts: Vec<Result<String, String>>) -> Check {
    let ok = parts.iter().all(|p| p.is_ok());
    let text = parts.into_iter().map(|p| p.unwrap_or_else(|e| format!("{e} FAILED"))).collect::<Vec<_>>().join(", ");
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn timed(limit: Duration, elapsed: Duration) -> Result<String, String> {
    let line = format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs());
    if elapsed <= limit {
        Ok(line)
    } else {
        Err(line)
    }
}

fn golden_lattice() -> Check {
    let start = Instant::now();
    let r = verify_axiomatic(&planar("golden", 256), Budget { r_max: 1e6, tolerance: 0.05 }).map_err(|e| e.to_string())?;
    all(vec![
        within("mu", r.mu_hat, 2.0, 0.02),
        within("beta", r.beta_hat, 0.5, 0.03),
        within("gamma", r.gamma_hat, 0.0, 0.02),
        timed(Duration::from_secs(5), start.elapsed()),
    ])
}

fn liouville_lattice() -> Check {
    let start = Instant::now();
    let p = planar("liouville:b=2,nu=3,b1=2,k=7", 4096);
    let table = records(&p, 2f64.powi(200)).map_err(|e| e.to_string())?;
    let exact = if table.is_certified() { Ok("certified records".into()) } else { Err("records not certified".into()) };
    let r = cusp_excursion::analytics::ExcursionReport::from_table(&table, 0.05).map_err(|e| e.to_string())?;
    all(vec![
        within("mu", r.mu_hat, 3.0, 0.05),
        within("beta", r.beta_hat, 0.667, 0.03),
        within("gamma", r.gamma_hat, 0.167, 0.03),
        within("|beta - 1/2 - gamma|", (r.beta_hat - 0.5 - r.gamma_hat).abs(), 0.0, 0.05),
        within("|beta - (1 - 1/mu)|", (r.beta_hat - (1.0 - 1.0 / r.mu_hat)).abs(), 0.0, 0.05),
        exact,
        timed(Duration::from_secs(30), start.elapsed()),
    ])
}

/// `min q ||q φ||` over continued-fraction denominators `q ∈ [10^{5/2}, 10^5]`, from an
/// `f64` expansion of `φ`.
fn golden_markoff_oracle() -> f64 {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let (mut x, mut q_prev, mut q) = (phi, 0f64, 1f64);
    let mut best = f64::INFINITY;
    while q <= 1e5 {
        let a = x.floor();
        (q_prev, q) = (q, a * q + q_prev);
        x = 1.0 / (x - a);
        if q >= 1e5f64.sqrt() && q <= 1e5 {
            let t = q * phi;
            best = best.min(q * (t - t.round()).abs());
        }
    }
    best
}

fn markoff_identity() -> Check {
    let table = records(&planar("golden", 256), 1e6).map_err(|e| e.to_string())?;
    let ms = markoff_sigma(&table).map_err(|e| e.to_string())?;
    let sigma = ms.sigma.ok_or("sigma is infinite")?;
    let oracle = golden_markoff_oracle();
    all(vec![
        within("c_tilde", ms.c_tilde, 0.4472, 0.4472 * 0.005),
        within("c_tilde - oracle", ms.c_tilde - oracle, 0.0, oracle * 0.005),
        within("sigma", sigma, 1.4953, 1.4953 * 0.005),
        within("|sigma - c_tilde^-1/2|", (sigma - ms.c_tilde.powf(-0.5)).abs(), 0.0, 1e-3),
    ])
}

/// `sqrt(a/b)` for random non-square `a/b` in `(0, 1)`: irrational, so no vertical vectors.
fn random_irrational(rng: &mut ChaCha8Rng) -> ExactScalar {
    let square = |x: u64| (x as f64).sqrt().round().powi(2) as u64 == x;
    loop {
        let b = rng.gen_range(1_000u64..1_000_000);
        let a = rng.gen_range(1..b);
        if !(square(a) && square(b)) && !square(a * b) {
            return scalar(&format!("sqrt:{a}/{b}"), 256);
        }
    }
}

fn dirichlet_bound() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut failures = Vec::new();
    for (m, n) in [(1, 1), (1, 2), (2, 1)] {
        let shape = SplitShape::new(m, n).unwrap();
        let target = shape.d() as f64 / m as f64 - 0.05;
        for i in 0..100 {
            let a: Vec<ExactScalar> = (0..m * n).map(|_| random_irrational(&mut rng)).collect();
            let label = format!("({m},{n}) #{i} A = {:?}", a.iter().map(|x| x.to_f64()).collect::<Vec<_>>());
            let p = LatticeProvider::new(LatticeSpec::homogeneous(shape, a)).map_err(|e| e.to_string())?;
            let table = records(&p, 1e4).map_err(|e| format!("{label}: {e}"))?;
            let (mu, _) = mu_hat(&table, 1e4).map_err(|e| format!("{label}: {e}"))?;
            let w = worst.entry((m, n)).or_insert(f64::INFINITY);
            *w = w.min(mu - target - 0.05);
            if mu < target {
                failures.push(format!("{label}: mu = {mu:.4}"));
            }
        }
    }
    let margins = worst.iter().map(|((m, n), w)| format!("({m},{n}) min mu - d/m = {w:+.4}")).collect::<Vec<_>>().join(", ");
    all(vec![
        if failures.is_empty() { Ok(margins) } else { Err(format!("{margins}; {}", failures.join("; "))) },
        timed(Duration::from_secs(120), start.elapsed()),
    ])
}

fn affine_identities() -> Check {
    let half = BigRational::new(1.into(), 2.into());
    let spec = LatticeSpec::planar(scalar("liouville:b=2,nu=3,b1=1,k=7", 4096)).with_offset(vec![half.clone(), half]);
    let p = LatticeProvider::new(spec).map_err(|e| e.to_string())?;
    let r = verify_axiomatic(&p, Budget { r_max: 2f64.powi(120), tolerance: 0.1 }).map_err(|e| e.to_string())?;
    all(vec![
        within("|beta - 1/2 - gamma|", r.residuals.beta_gamma, 0.0, 0.1),
        within("|beta - (1 - 1/mu)|", r.residuals.beta_mu, 0.0, 0.1),
    ])
}

fn one_sided_sqrt2() -> Check {
    let table = records(&planar("sqrt:2/1", 256), 1e6).map_err(|e| e.to_string())?;
    let (mu, _) = mu_hat(&table, table.radius_reached).map_err(|e| e.to_string())?;
    let plus = one_sided(&table, Side::Plus).map_err(|e| e.to_string())?.mu.ok_or("no + records")?;
    let minus = one_sided(&table, Side::Minus).map_err(|e| e.to_string())?.mu.ok_or("no - records")?;
    let max = plus.max(minus);
    all(vec![
        within("mu+", plus, 2.0, 0.05),
        within("mu-", minus, 2.0, 0.05),
        if max == mu { Ok(format!("max(mu+, mu-) = mu = {mu:.6}")) } else { Err(format!("max {max} != mu {mu}")) },
    ])
}

fn quantitative_mahler() -> Check {
    let ctx = FuchsianContext::sl2z();
    let times: Vec<f64> = (1..=30).map(|k| k as f64).collect();
    let traj = geodesic_trajectory(ctx.base(), &times);
    let samples = quantitative_mahler_check(&ctx, &traj, &ctx.all_cusps()).map_err(|e| e.to_string())?;
    let last = samples.last().unwrap();
    let defect = samples.iter().map(|s| (s.log_alpha1 - s.parameter / 2.0).abs()).fold(0.0, f64::max);
    all(vec![
        within("d / (2 log alpha_1) at t = 30", last.ratio.unwrap_or(f64::NAN), 1.0, 0.05),
        within("max |log alpha_1 - t/2|", defect, 0.0, 1e-9),
    ])
}

fn hyperbolic_identity() -> Check {
    let ex = horocycle_excursion(&FuchsianContext::sl2z(), &scalar("liouville:b=2,nu=3,b1=2,k=7", 4096), 1e6)
        .map_err(|e| e.to_string())?;
    all(vec![within(
        &format!("beta_dist - gamma_dist - 1 (beta_dist {:.4}, gamma_dist {:.4})", ex.beta_dist, ex.gamma_dist),
        ex.beta_dist - ex.gamma_dist - 1.0,
        0.0,
        0.1,
    )])
}

fn deviation() -> Check {
    let start = Instant::now();
    let params = DeviationParams::default();
    let rec = deviation_experiment(&FuchsianContext::sl2z(), &scalar("liouville:b=2,nu=3,b1=2,k=7", 4096), &params)
        .map_err(|e| e.to_string())?;
    let settings = (rec.epsilon - rec.gamma / 2.0).abs() < 1e-12 && rec.delta == 0.5 && params.s_min == 1e3;
    let line = format!("s_0 = {:.3e}, deviation {:.4e} >= bound {:.4e}", rec.s_0, rec.deviation, rec.bound);
    all(vec![
        if rec.pass && settings { Ok(line) } else { Err(line) },
        timed(Duration::from_secs(300), start.elapsed()),
    ])
}

fn origami_oracles() -> Check {
    let start = Instant::now();
    let torus = Origami::torus();
    let prim: BTreeMap<(i64, i64), usize> = primitive_vectors(50).into_iter().map(|v| (v, 1)).collect();
    let mut parts = Vec::new();
    let mut same = |name: &str, got: BTreeMap<(i64, i64), usize>, want: &BTreeMap<(i64, i64), usize>| {
        parts.push(if &got == want {
            Ok(format!("{name}: {} vectors", got.len()))
        } else {
            Err(format!("{name}: {} vectors vs oracle {}", got.len(), want.len()))
        });
    };
    same("torus saddles", spectrum_counts(&saddle_connections(&torus, 50.0)), &prim);
    same("torus cylinders", spectrum_counts(&cylinders(&torus, 50.0)), &prim);
    let l = Origami::l_shape();
    same("L saddles", spectrum_counts(&saddle_connections(&l, 30.0)), &unfolded_saddles(&l, 30));
    same("L cylinders", spectrum_counts(&cylinders(&l, 30.0)), &renormalised_spectrum(&l, 30));
    parts.push(timed(Duration::from_secs(60), start.elapsed()));
    all(parts)
}

fn probe() -> Check {
    let mut parts = Vec::new();
    for (name, o) in [("torus", Origami::torus()), ("L", Origami::l_shape())] {
        let r = minkowski_probe(&o, 1000, None, 12);
        let all_found = r.samples.len() == 1000 && r.samples.iter().all(|s| s.shortest.is_some_and(|l| l <= r.bound));
        let line = format!("{name}: bound {:.4}, {} failures", r.bound, r.failures);
        parts.push(if r.pass && all_found && r.failures == 0 { Ok(line) } else { Err(line) });
    }
    all(parts)
}

fn random_vector(rng: &mut ChaCha8Rng, shape: SplitShape) -> SplitVector {
    let coords = (0..shape.d())
        .map(|_| {
            let num = rng.gen_range(1i64..1_000_000) * if rng.gen_bool(0.5) { 1 } else { -1 };
            BigRational::new(num.into(), rng.gen_range(1i64..10_000).into())
        })
        .collect();
    SplitVector::new(shape, coords).unwrap()
}

fn conjugation_identity(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shapes = [(1, 1), (1, 2), (2, 1), (2, 2)];
    for i in 0..1000 {
        let (m, n) = shapes[i % shapes.len()];
        let shape = SplitShape::new(m, n).unwrap();
        let v = random_vector(rng, shape);
        let b = ShearMatrix::new(shape, (0..m * n).map(|_| BigRational::new(rng.gen_range(-500i64..500).into(), rng.gen_range(1i64..50).into())).collect())
            .unwrap();
        // e^{t/d} = a, so e^{-t} = a^{-d}
        let a = BigRational::new(rng.gen_range(1i64..40).into(), rng.gen_range(1i64..40).into());
        let a_inv = a.recip();
        let lhs = apply_diagonal(&apply_shear(&apply_diagonal(&v, &a_inv), &b).unwrap(), &a);
        let mut e_neg_t = BigRational::from_integer(1.into());
        for _ in 0..shape.d() {
            e_neg_t *= &a_inv;
        }
        let rhs = apply_shear(&v, &b.scaled(&e_neg_t)).unwrap();
        if lhs != rhs {
            return Err(format!("conjugation fails on triple {i}"));
        }
    }
    Ok("conjugation exact on 1000 triples".into())
}

fn optimal_time_minimal(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let shapes = [(1, 1), (1, 2), (2, 1), (2, 3)];
    let mut worst = 0f64;
    for i in 0..1000 {
        let shape = {
            let (m, n) = shapes[i % shapes.len()];
            SplitShape::new(m, n).unwrap()
        };
        let v = random_vector(rng, shape);
        let (t_star, min) = optimal_time(&v).map_err(|e| e.to_string())?;
        let d = shape.d() as f64;
        // split norm of g_t v from the block norms
        let at = |t: f64| {
            let (x, y) = (v.p1_norm(), v.p2_norm());
            (x * (shape.n as f64 * t / d).exp()).max(y * (-(shape.m as f64) * t / d).exp())
        };
        let at_star = at(t_star);
        worst = worst.max((at_star - min).abs() / min);
        for k in 1..=20 {
            let dt = 10f64.powf(-(k as f64) / 4.0) * 5.0;
            if at(t_star + dt) < at_star * (1.0 - 1e-12) || at(t_star - dt) < at_star * (1.0 - 1e-12) {
                return Err(format!("vector {i}: t* not minimal at offset {dt}"));
            }
        }
        let t_exact = rng.gen_range(-5.0..5.0);
        let moved = apply_diagonal(&v, &cusp_excursion::arithmetic::rat_from_f64((t_exact / d).exp()));
        if split_norm(&moved).map_err(|e| e.to_string())? < min * (1.0 - 1e-9) {
            return Err(format!("vector {i}: g_t v beats the reported minimum"));
        }
    }
    if worst > 1e-9 {
        return Err(format!("reported minimum off by {worst:e}"));
    }
    Ok("optimal_time minimal on 1000 vectors".into())
}

fn monotone_instances(rng: &mut ChaCha8Rng) -> Vec<(String, LatticeProvider, f64)> {
    let mut out = Vec::new();
    for spec in [
        "golden",
        "sqrt:2/1",
        "sqrt:3/1",
        "sqrt:5/3",
        "sqrt:7/1",
        "sqrt:11/2",
        "liouville:b=2,nu=3,b1=1,k=6",
        "liouville:b=2,nu=2.5,b1=2,k=6",
        "liouville:b=3,nu=2,b1=1,k=7",
        "liouville:b=10,nu=3,b1=1,k=5",
    ] {
        out.push((spec.to_string(), planar(spec, 1024), 1e8));
    }
    for (m, n) in [(1, 2), (2, 1), (1, 2), (2, 1), (1, 2), (2, 1), (1, 1), (1, 1), (1, 2), (2, 1)] {
        let shape = SplitShape::new(m, n).unwrap();
        let a = (0..m * n).map(|_| random_irrational(rng)).collect();
        let p = LatticeProvider::new(LatticeSpec::homogeneous(shape, a)).unwrap();
        out.push((format!("random ({m},{n})"), p, 1e3));
    }
    out
}

fn same_records(a: &RecordTable, b: &RecordTable) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.vector == y.vector)
}

fn monotone_refinement(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let instances = monotone_instances(rng);
    for (name, p, r_max) in &instances {
        let full = records(p, *r_max).map_err(|e| format!("{name}: {e}"))?;
        let mut prev: Option<cusp_excursion::analytics::RunningEstimates> = None;
        for k in 1..=8 {
            let r = r_max.powf(k as f64 / 8.0);
            let cut = full.truncated(r);
            if k % 4 == 0 {
                let direct = records(p, r).map_err(|e| format!("{name}: {e}"))?;
                if !same_records(&cut, &direct) {
                    return Err(format!("{name}: records at {r:e} are not a prefix"));
                }
            }
            let Some(e) = running_estimates(&cut) else { continue };
            if let Some(q) = prev {
                if e.mu < q.mu || e.beta < q.beta || e.gamma < q.gamma || e.c_tilde > q.c_tilde {
                    return Err(format!("{name}: estimates not monotone at {r:e}"));
                }
            }
            prev = Some(e);
        }
    }
    Ok(format!("monotone on {} instances", instances.len()))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    all(vec![conjugation_identity(&mut rng), optimal_time_minimal(&mut rng), monotone_refinement(&mut rng)])
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("golden-ratio lattice exponents", golden_lattice),
        ("Liouville nu = 3 exponents and identities", liouville_lattice),
        ("Markoff constant and sigma", markoff_identity),
        ("Dirichlet bound on random forms", dirichlet_bound),
        ("inhomogeneous Liouville identities", affine_identities),
        ("one-sided exponents of sqrt 2", one_sided_sqrt2),
        ("quantitative Mahler on SL(2,Z)", quantitative_mahler),
        ("hyperbolic excursion identity", hyperbolic_identity),
        ("deviation inequality", deviation),
        ("origami oracle equivalence", origami_oracles),
        ("Minkowski probe", probe),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:.2}s] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{secs:.2}s] {name}: {detail}", i + 1);
            }
        }
    }
    println!("\n{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
