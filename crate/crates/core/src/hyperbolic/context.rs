use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use super::group::{
    hyperbolic_distance_f64, mobius_f64, reduce_fundamental_domain, GroupElement, HalfPlanePoint, ModularWord,
};
use crate::arithmetic::rational_to_f64;

/// Height of the cusp neighbourhood in the reduced picture.
pub const CUSP_HEIGHT: f64 = 1.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    SL2Z,
    Gamma2,
}

/// A cusp class: parabolic generator, its fixed covector, and the parity class
/// of that covector's orbit.
#[derive(Clone, Debug)]
pub struct Cusp {
    pub name: &'static str,
    pub parabolic: ModularWord,
    pub covector: (i64, i64),
    parity: Option<(u8, u8)>,
}

#[derive(Clone, Debug)]
pub struct FuchsianContext {
    group: Group,
    cusps: Vec<Cusp>,
    base: GroupElement,
    neighbours: Vec<([f64; 4], [u8; 4])>,
}

/// Where a coset sits: its reduced representative and the reducing word.
#[derive(Clone, Debug)]
pub struct Location {
    pub reduced: HalfPlanePoint,
    pub word: ModularWord,
    pub x: f64,
    pub ln_y: f64,
}

impl Location {
    pub fn of(x: &GroupElement) -> Location {
        Self::of_point(&x.point())
    }

    pub fn of_point(z: &HalfPlanePoint) -> Location {
        let (reduced, word) = reduce_fundamental_domain(z);
        let x = rational_to_f64(&reduced.re);
        let ln_y = reduced.ln_im();
        Location { reduced, word, x, ln_y }
    }

    /// Bottom row of the reducing word, mod 2.
    fn cusp_parity(&self) -> (u8, u8) {
        let p = self.word.mod2();
        (p[2], p[3])
    }
}

impl FuchsianContext {
    pub fn new(group: Group) -> Self {
        let cusps = match group {
            Group::SL2Z => vec![Cusp {
                name: "inf",
                parabolic: ModularWord::from_i64(1, 1, 0, 1),
                covector: (0, 1),
                parity: None,
            }],
            Group::Gamma2 => vec![
                Cusp {
                    name: "inf",
                    parabolic: ModularWord::from_i64(1, 2, 0, 1),
                    covector: (0, 1),
                    parity: Some((0, 1)),
                },
                Cusp {
                    name: "0",
                    parabolic: ModularWord::from_i64(1, 0, 2, 1),
                    covector: (1, 0),
                    parity: Some((1, 0)),
                },
                Cusp {
                    name: "1",
                    parabolic: ModularWord::from_i64(-1, 2, -2, 3),
                    covector: (1, -1),
                    parity: Some((1, 1)),
                },
            ],
        };
        let depth = match group {
            Group::SL2Z => 4,
            Group::Gamma2 => 5,
        };
        let neighbours = short_words(depth)
            .iter()
            .map(|w| {
                let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
                ([f(&w.a), f(&w.b), f(&w.c), f(&w.d)], w.mod2())
            })
            .collect();
        FuchsianContext { group, cusps, base: GroupElement::identity(), neighbours }
    }

    pub fn sl2z() -> Self {
        Self::new(Group::SL2Z)
    }

    pub fn gamma2() -> Self {
        Self::new(Group::Gamma2)
    }

    pub fn with_base(mut self, x0: GroupElement) -> Self {
        self.base = x0;
        self
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    pub fn all_cusps(&self) -> Vec<usize> {
        (0..self.cusps.len()).collect()
    }

    pub fn base(&self) -> &GroupElement {
        &self.base
    }

    pub fn contains(&self, w: &ModularWord) -> bool {
        match self.group {
            Group::SL2Z => true,
            Group::Gamma2 => w.mod2() == [1, 0, 0, 1],
        }
    }

    /// Index of the cusp whose neighbourhood contains the location, if any.
    pub fn cusp_of(&self, loc: &Location) -> Option<usize> {
        if loc.ln_y < CUSP_HEIGHT.ln() {
            return None;
        }
        let par = loc.cusp_parity();
        self.cusps.iter().position(|c| c.parity.is_none_or(|p| p == par))
    }

    /// Distance in the quotient between the projections of `x` and `x0`.
    pub fn distance(&self, x: &GroupElement, x0: &GroupElement) -> f64 {
        self.distance_located(&Location::of(x), &Location::of(x0))
    }

    pub fn distance_located(&self, loc: &Location, base: &Location) -> f64 {
        let coset = loc.word.compose(&base.word.inverse()).mod2();
        let z0 = (rational_to_f64(&base.reduced.re), base.ln_y.exp());
        self.distance_reduced((loc.x, loc.ln_y), coset, z0)
    }

    /// Distance from the reduced point `(x, ln y)` to the orbit of the reduced base point `z0`,
    /// restricted to neighbours in the coset `coset` (mod 2) when the group is `Γ(2)`.
    pub(crate) fn distance_reduced(&self, (x, ln_y): (f64, f64), coset: [u8; 4], z0: (f64, f64)) -> f64 {
        let mut best = f64::INFINITY;
        for (m, parity) in &self.neighbours {
            if self.group == Group::Gamma2 && *parity != coset {
                continue;
            }
            let w = mobius_f64(m[0], m[1], m[2], m[3], z0);
            let d = if ln_y < 600.0 {
                hyperbolic_distance_f64((x, ln_y.exp()), w)
            } else {
                // cosh d ~ y / (2 w_y) once y dwarfs every other scale
                ln_y - w.1.ln()
            };
            best = best.min(d);
        }
        best
    }

    /// `d_Δ(x, x0)`: the quotient distance when `x` lies in cusp `cusp`, else 0.
    pub fn cusp_depth(&self, x: &GroupElement, cusp: usize, x0: &GroupElement) -> f64 {
        let loc = Location::of(x);
        if self.cusp_of(&loc) == Some(cusp) {
            self.distance_located(&loc, &Location::of(x0))
        } else {
            0.0
        }
    }

    /// `d_I(x, x0) = max over I of d_Δ`.
    pub fn depth(&self, x: &GroupElement, cusps: &[usize], x0: &GroupElement) -> f64 {
        let loc = Location::of(x);
        self.depth_located(&loc, cusps, &Location::of(x0))
    }

    pub fn depth_located(&self, loc: &Location, cusps: &[usize], base: &Location) -> f64 {
        match self.cusp_of(loc) {
            Some(c) if cusps.contains(&c) => self.distance_located(loc, base),
            _ => 0.0,
        }
    }

    /// `log α_1(Λ_{x,I})`: minus the log of the shortest orbit vector over the cusps in `I`.
    pub fn log_alpha1(&self, x: &GroupElement, cusps: &[usize]) -> f64 {
        self.log_alpha1_located(&Location::of(x), cusps)
    }

    pub fn log_alpha1_located(&self, loc: &Location, cusps: &[usize]) -> f64 {
        let mut best = f64::INFINITY;
        let w = &loc.word;
        for v1 in -3i64..=3 {
            for v2 in -4i64..=4 {
                if (v1, v2) == (0, 0) || v1.gcd(&v2) != 1 {
                    continue;
                }
                if !self.class_allowed(w, v1, v2, cusps) {
                    continue;
                }
                // ln(|v1 z + v2|^2 / y)
                let val = if v1 == 0 {
                    2.0 * (v2.abs() as f64).ln() - loc.ln_y
                } else if loc.ln_y > 300.0 {
                    continue;
                } else {
                    let y = loc.ln_y.exp();
                    let re = v1 as f64 * loc.x + v2 as f64;
                    (re * re + (v1 * v1) as f64 * y * y).ln() - loc.ln_y
                };
                best = best.min(val);
            }
        }
        -0.5 * best
    }

    /// Is the reduced-frame covector `v` (with `u = w^T v`) in one of the classes `I`?
    fn class_allowed(&self, w: &ModularWord, v1: i64, v2: i64, cusps: &[usize]) -> bool {
        let p = w.mod2();
        let (a, b, c, d) = (p[0] as i64, p[1] as i64, p[2] as i64, p[3] as i64);
        let u = (((a * v1 + c * v2) % 2 + 2) % 2, ((b * v1 + d * v2) % 2 + 2) % 2);
        cusps.iter().any(|&i| match self.cusps[i].parity {
            None => true,
            Some(par) => par == (u.0 as u8, u.1 as u8),
        })
    }

    /// The orbit vectors `ρ(gγ)v_i` of cusps in `I` with Euclidean norm at most `radius`,
    /// as `(covector u, (g^{-1})^T u)`.
    pub fn orbit_vectors(
        &self,
        x: &GroupElement,
        cusps: &[usize],
        radius: f64,
    ) -> Vec<((BigInt, BigInt), (f64, f64))> {
        let loc = Location::of(x);
        let y = loc.ln_y.exp();
        let r2y = radius * radius * y;
        let v1_max = (r2y.sqrt() / y).floor() as i64;
        let w = &loc.word;
        let mut out = Vec::new();
        for v1 in -v1_max..=v1_max {
            let rest = r2y - (v1 * v1) as f64 * y * y;
            if rest < 0.0 {
                continue;
            }
            let c = -(v1 as f64) * loc.x;
            let lo = (c - rest.sqrt()).ceil() as i64 - 1;
            let hi = (c + rest.sqrt()).floor() as i64 + 1;
            for v2 in lo..=hi {
                if (v1, v2) == (0, 0) || v1.gcd(&v2) != 1 {
                    continue;
                }
                if !self.class_allowed(w, v1, v2, cusps) {
                    continue;
                }
                let (bv1, bv2) = (BigInt::from(v1), BigInt::from(v2));
                let u1 = &w.a * &bv1 + &w.c * &bv2;
                let u2 = &w.b * &bv1 + &w.d * &bv2;
                let img = x.contragredient((&u1, &u2));
                let img = (rational_to_f64(&img.0), rational_to_f64(&img.1));
                if img.0.hypot(img.1) <= radius * (1.0 + 1e-12) {
                    out.push(((u1, u2), img));
                }
            }
        }
        out.sort_by_key(|a| (a.0 .0.clone(), a.0 .1.clone()));
        out
    }
}

/// All products of at most `depth` generators among `T, T^{-1}, S`, up to sign.
fn short_words(depth: usize) -> Vec<ModularWord> {
    let gens = [
        ModularWord::from_i64(1, 1, 0, 1),
        ModularWord::from_i64(1, -1, 0, 1),
        ModularWord::inversion(),
    ];
    let canon = |w: &ModularWord| {
        let neg = w.a.is_negative() || (w.a == BigInt::from(0) && w.c.is_negative());
        let w = if neg {
            ModularWord { a: -&w.a, b: -&w.b, c: -&w.c, d: -&w.d }
        } else {
            w.clone()
        };
        [&w.a, &w.b, &w.c, &w.d].map(|x| x.to_i64().unwrap_or(0))
    };
    let mut seen = HashSet::new();
    let mut layer = vec![ModularWord::identity()];
    seen.insert(canon(&layer[0]));
    let mut all = layer.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &layer {
            for g in &gens {
                let n = g.compose(w);
                if seen.insert(canon(&n)) {
                    next.push(n);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// `d_Δ(x, x0)` for cusp index `cusp`.
pub fn cusp_depth(ctx: &FuchsianContext, x: &GroupElement, cusp: usize, x0: &GroupElement) -> f64 {
    ctx.cusp_depth(x, cusp, x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn base_point_has_zero_depth() {
        let ctx = FuchsianContext::sl2z();
        let e = GroupElement::identity();
        assert_eq!(ctx.cusp_depth(&e, 0, &e), 0.0);
        assert!(ctx.distance(&e, &e).abs() < 1e-12);
    }

    #[test]
    fn geodesic_into_the_cusp() {
        for ctx in [FuchsianContext::sl2z(), FuchsianContext::gamma2()] {
            let e = GroupElement::identity();
            let x = GroupElement::geodesic(-10.0);
            let d = ctx.cusp_depth(&x, 0, &e);
            assert!((d - 10.0).abs() < 0.2, "{d}");
            assert!((ctx.log_alpha1(&x, &ctx.all_cusps()) - 5.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gamma2_cusp_outside_the_set_has_zero_depth() {
        let ctx = FuchsianContext::gamma2();
        let e = GroupElement::identity();
        // deep at cusp 0: g^{-1}·i = i e^{-12}
        let x = GroupElement::geodesic(12.0);
        assert!(ctx.depth(&x, &[1], &e) > 11.0);
        assert_eq!(ctx.depth(&x, &[0, 2], &e), 0.0);
        // the proper subset {inf} sees only long orbit vectors
        assert!(ctx.log_alpha1(&x, &[0]) < -5.0);
    }

    #[test]
    fn cusp_one_of_gamma2() {
        let ctx = FuchsianContext::gamma2();
        let e = GroupElement::identity();
        // near the cusp 1: z = 1 + i e^{-10}, i.e. g^{-1} = T·diag(e^{-5}, e^{5})
        let t = GroupElement::from_word(&ModularWord::from_i64(1, 1, 0, 1));
        let g = t.mul(&GroupElement::geodesic(-10.0)).inverse();
        assert!(ctx.depth(&g, &[2], &e) > 9.0);
        assert_eq!(ctx.depth(&g, &[0, 1], &e), 0.0);
    }

    #[test]
    fn parabolics_fix_covectors() {
        for ctx in [FuchsianContext::sl2z(), FuchsianContext::gamma2()] {
            for c in ctx.cusps() {
                let p = GroupElement::from_word(&c.parabolic);
                let u = (BigInt::from(c.covector.0), BigInt::from(c.covector.1));
                let img = p.contragredient((&u.0, &u.1));
                assert_eq!(img.0, BigInt::from(c.covector.0).into());
                assert_eq!(img.1, BigInt::from(c.covector.1).into());
                assert!(ctx.contains(&c.parabolic));
            }
        }
    }

    fn random_element(rng: &mut ChaCha8Rng) -> GroupElement {
        let t: f64 = rng.gen_range(-2.0..2.0);
        let s: f64 = rng.gen_range(-1.0..1.0);
        let r: f64 = rng.gen_range(-1.0..1.0);
        GroupElement::geodesic(t)
            .mul(&GroupElement::horocycle(crate::arithmetic::rat_from_f64(s)))
            .mul(&GroupElement::embedding(crate::arithmetic::rat_from_f64(r)))
    }

    #[test]
    fn orbit_matches_transformed_primitive_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ctx in [FuchsianContext::sl2z(), FuchsianContext::gamma2()] {
            for _ in 0..100 {
                let g = random_element(&mut rng);
                let cusps = ctx.all_cusps();
                let radius = rng.gen_range(1.0..10.0);
                let fast: Vec<_> =
                    ctx.orbit_vectors(&g, &cusps, radius).into_iter().map(|(u, _)| u).collect();
                let mut brute = Vec::new();
                let m = g.inverse().to_f64();
                for u1 in -150i64..=150 {
                    for u2 in -150i64..=150 {
                        if u1.gcd(&u2) != 1 {
                            continue;
                        }
                        let (u1f, u2f) = (u1 as f64, u2 as f64);
                        let x = m[0][0] * u1f + m[1][0] * u2f;
                        let y = m[0][1] * u1f + m[1][1] * u2f;
                        if x.hypot(y) <= radius * (1.0 + 1e-12) {
                            brute.push((BigInt::from(u1), BigInt::from(u2)));
                        }
                    }
                }
                brute.sort();
                assert_eq!(fast, brute);
            }
        }
    }

    #[test]
    fn displacement_bounds() {
        let ctx = FuchsianContext::sl2z();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let y = random_element(&mut rng);
            let s: f64 = rng.gen_range(-1e4..1e4);
            let t: f64 = rng.gen_range(0.0..20.0);
            let hs = GroupElement::horocycle(crate::arithmetic::rat_from_f64(s)).mul(&y);
            let gt = GroupElement::geodesic(t).mul(&y);
            let bound = 2.0 * (s.abs() / 2.0).asinh();
            assert!(ctx.distance(&hs, &y) <= bound + 1e-9);
            assert!(ctx.distance(&gt, &y) <= t + 1e-9);
            if s.abs() > 1.0 {
                // 2 asinh(s/2) - 2 ln s decreases from 2 ln φ at s = 1
                assert!(bound <= 2.0 * s.abs().ln() + 0.963);
            }
        }
    }
}
