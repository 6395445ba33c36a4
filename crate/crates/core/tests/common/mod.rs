//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeMap;

use cusp_excursion::origami::Origami;

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive vectors with `max(|p|, |q|) ≤ r`.
pub fn primitive_vectors(r: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -r..=r {
        for q in -r..=r {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn singular(o: &Origami, s: usize, corner: usize) -> bool {
    o.vertices()[o.corner_vertex(s, corner)].singular
}

/// A rational time `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Time(i64, i64);

impl Time {
    fn cmp(&self, other: &Time) -> Ordering {
        (self.0 as i128 * other.1 as i128).cmp(&(other.0 as i128 * self.1 as i128))
    }
}

/// Saddle-connection holonomies found by unfolding each ray into the plane and walking
/// the sorted list of grid-line crossings.
pub fn unfolded_saddles(o: &Origami, r: i64) -> BTreeMap<(i64, i64), usize> {
    let (h, v) = (o.h().to_vec(), o.v().to_vec());
    let (hi, vi) = (inverse(&h), inverse(&v));
    let n = o.n();
    let (bl, br, tl, tr) = (0, 1, 2, 3);
    let mut out = BTreeMap::new();
    for (p, q) in primitive_vectors(r) {
        let periods = r / p.abs().max(q.abs());
        let total_x = periods * p.abs();
        let total_y = periods * q.abs();
        // start corner, corner met at a lattice point, and the moves across lines
        let start = match (p.signum(), q.signum()) {
            (1, 0) | (1, 1) | (0, 1) => bl,
            (-1, 0) | (-1, 1) => br,
            (-1, -1) => tr,
            _ => tl,
        };
        for s0 in (0..n).filter(|&s| singular(o, s, start)) {
            let mut s = s0;
            if q == 0 || p == 0 {
                for k in 1..=periods {
                    let (corner, next) = match (p, q) {
                        (1, 0) => (br, h[s]),
                        (-1, 0) => (bl, hi[s]),
                        (0, 1) => (tl, v[s]),
                        _ => (bl, vi[s]),
                    };
                    if singular(o, s, corner) {
                        *out.entry((k * p, k * q)).or_default() += 1;
                        break;
                    }
                    s = next;
                }
                continue;
            }
            let mut events: Vec<(Time, u8)> = Vec::new();
            for j in 1..=total_x {
                events.push((Time(j, p.abs()), 1));
            }
            for i in 1..=total_y {
                events.push((Time(i, q.abs()), 2));
            }
            events.sort_by(|a, b| a.0.cmp(&b.0));
            let mut idx = 0;
            while idx < events.len() {
                let same = idx + 1 < events.len() && events[idx].0.cmp(&events[idx + 1].0) == Ordering::Equal;
                let step_x = |s: usize| if p > 0 { h[s] } else { hi[s] };
                let step_y = |s: usize| if q > 0 { v[s] } else { vi[s] };
                if same {
                    let corner = match (p > 0, q > 0) {
                        (true, true) => tr,
                        (false, true) => tl,
                        (false, false) => bl,
                        (true, false) => br,
                    };
                    if singular(o, s, corner) {
                        let k = events[idx].0 .0 / events[idx].0 .1;
                        *out.entry((k * p, k * q)).or_default() += 1;
                        break;
                    }
                    s = step_y(step_x(s));
                    idx += 2;
                } else {
                    s = if events[idx].1 == 1 { step_x(s) } else { step_y(s) };
                    idx += 1;
                }
            }
        }
    }
    out
}

/// Monodromy of the straight loop `(a, b)` based just above the lower-left corner of each
/// square, with the base point offset `(ε₁, ε₂)`, `0 < ε₂ ≪ ε₁ ≪ 1`.
fn loop_monodromy(o: &Origami, a: i64, b: i64) -> Vec<usize> {
    let (h, v) = (o.h().to_vec(), o.v().to_vec());
    let (hi, vi) = (inverse(&h), inverse(&v));
    // crossing time as (main part, ε₁ coefficient, ε₂ coefficient), each a fraction over |a| or |b|
    let mut events: Vec<((f64, f64, f64), bool)> = Vec::new();
    let xs: Vec<i64> = if a > 0 { (1..=a).collect() } else { (a + 1..=0).collect() };
    for x in xs {
        events.push(((x as f64 / a as f64, -1.0 / a as f64, 0.0), true));
    }
    let ys: Vec<i64> = if b > 0 { (1..=b).collect() } else { (b + 1..=0).collect() };
    for y in ys {
        events.push(((y as f64 / b as f64, 0.0, -1.0 / b as f64), false));
    }
    events.sort_by(|x, y| {
        let (p, q) = (x.0, y.0);
        let main = (p.0 - q.0).abs();
        if main > 1e-12 {
            p.0.total_cmp(&q.0)
        } else if (p.1 - q.1).abs() > 1e-12 {
            p.1.total_cmp(&q.1)
        } else {
            p.2.total_cmp(&q.2)
        }
    });
    (0..o.n())
        .map(|mut s| {
            for (_, vertical) in &events {
                s = match (*vertical, a > 0, b > 0) {
                    (true, true, _) => h[s],
                    (true, false, _) => hi[s],
                    (false, _, true) => v[s],
                    (false, _, false) => vi[s],
                };
            }
            s
        })
        .collect()
}

fn bezout(p: i64, q: i64) -> (i64, i64) {
    // r, s with p s - q r = 1
    for s in -200..=200i64 {
        if (p * s - 1) % q == 0 {
            return ((p * s - 1) / q, s);
        }
    }
    unreachable!()
}

/// Cylinder core multiples in direction `(p, q)` (`q > 0`, or `(1, 0)`), read from the
/// horizontal rows of the surface renormalised so that `(p, q)` becomes horizontal.
pub fn renormalised_cylinders(o: &Origami, p: i64, q: i64) -> Vec<i64> {
    let (r, s) = if q == 0 { (0, 1) } else { bezout(p, q) };
    let h2 = loop_monodromy(o, p, q);
    let v2 = loop_monodromy(o, r, s);
    let m = Origami::new(h2.clone(), v2.clone()).expect("renormalised surface");
    let n = m.n();
    let mut row = vec![usize::MAX; n];
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if row[start] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        let mut x = start;
        while row[x] == usize::MAX {
            row[x] = rows.len();
            members.push(x);
            x = h2[x];
        }
        rows.push(members);
    }
    let mut parent: Vec<usize> = (0..rows.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            x = parent[x];
        }
        x
    }
    for (id, members) in rows.iter().enumerate() {
        let regular_top = members.iter().all(|&x| !m.vertices()[m.corner_vertex(x, 2)].singular);
        if regular_top {
            for &x in members {
                let (a, b) = (root(&mut parent, id), root(&mut parent, row[v2[x]]));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (id, row) in rows.iter().enumerate() {
        if seen.insert(root(&mut parent, id)) {
            out.push(row.len() as i64);
        }
    }
    out
}

/// All cylinder core holonomies `±m(p, q)` with sup norm at most `r`.
pub fn renormalised_spectrum(o: &Origami, r: i64) -> BTreeMap<(i64, i64), usize> {
    let mut out = BTreeMap::new();
    for (p, q) in primitive_vectors(r) {
        if !(q > 0 || (q == 0 && p == 1)) {
            continue;
        }
        for m in renormalised_cylinders(o, p, q) {
            if m * p.abs().max(q) <= r {
                *out.entry((m * p, m * q)).or_default() += 1;
                *out.entry((-m * p, -m * q)).or_default() += 1;
            }
        }
    }
    out
}

pub fn spectrum_counts(s: &cusp_excursion::origami::HolonomySpectrum) -> BTreeMap<(i64, i64), usize> {
    s.entries.iter().map(|e| ((e.a, e.b), e.multiplicity)).collect()
}
