use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::surface::Origami;
use super::trace::{
    cylinder_multiples, saddle_multiples, to_frame, Direction, IDENTITY, MIRROR_X, TRANSPOSE,
};
use crate::analytics::{Budget, ExcursionReport};
use crate::arithmetic::ExactScalar;
use crate::lattice::RecordTable;
use crate::splitspace::{SplitShape, SplitVector};
use crate::Result;

/// Excursion reports of the saddle and cylinder holonomy sets of a sheared surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QdExcursion {
    pub saddle: ExcursionReport,
    pub cylinder: ExcursionReport,
    /// Holonomy vectors examined before pruning stopped the search.
    pub saddle_candidates: usize,
    pub cylinder_candidates: usize,
}

/// Pareto staircase of `(|y|, |x|)` pairs seen so far.
#[derive(Default)]
struct Staircase(BTreeMap<i64, f64>);

impl Staircase {
    /// Smallest `|x|` among points with `|y| ≤ y`.
    fn best_below(&self, y: i64) -> f64 {
        self.0.range(..=y).next_back().map_or(f64::INFINITY, |(_, &x)| x)
    }

    fn insert(&mut self, y: i64, x: f64) {
        if self.best_below(y) <= x {
            return;
        }
        let dominated: Vec<i64> = self.0.range(y..).filter(|(_, &xx)| xx >= x).map(|(&k, _)| k).collect();
        for k in dominated {
            self.0.remove(&k);
        }
        self.0.insert(y, x);
    }
}

struct Search<'a> {
    surface: &'a Origami,
    alpha: f64,
    radius: i64,
    stairs: [Staircase; 2],
    found: [BTreeSet<(i64, i64)>; 2],
}

impl Search<'_> {
    fn add(&mut self, kind: usize, frame: usize, (p, q): (i64, i64), multiples: Vec<i64>) {
        for m in multiples {
            let (a, b) = to_frame(frame, (m * p, m * q));
            if b > self.radius {
                continue;
            }
            self.stairs[kind].insert(b, (a as f64 - self.alpha * b as f64).abs());
            self.found[kind].insert((a, b));
        }
    }

    fn visit(&mut self, frame: usize, d: &Direction) {
        let f = &self.surface.frames[frame];
        let saddles = saddle_multiples(f, d, self.surface.n() as i64);
        self.add(0, frame, (d.p, d.q), saddles);
        let cyl = if d.q == 0 {
            cylinder_multiples(&self.surface.frames[TRANSPOSE], 0, 1)
        } else {
            cylinder_multiples(f, d.p, d.q)
        };
        self.add(1, frame, (d.p, d.q), cyl);
    }

    /// Descendants of `(a, b)` have `|y| ≥ a.q + b.q` and, when both defects share a sign,
    /// `|x| ≥ |D(a)| + |D(b)|`; prune when both staircases already beat that.
    fn worth(&self, frame: usize, a: &Direction, b: &Direction) -> bool {
        let y = a.q + b.q;
        if y > self.radius {
            return false;
        }
        let slope = if frame == MIRROR_X { -self.alpha } else { self.alpha };
        let (da, db) = (a.p as f64 - slope * a.q as f64, b.p as f64 - slope * b.q as f64);
        if da.signum() != db.signum() {
            return true;
        }
        let lower = (da.abs() + db.abs()) * (1.0 - 1e-12);
        self.stairs.iter().any(|s| s.best_below(y) > lower)
    }
}

fn table(found: &BTreeSet<(i64, i64)>, alpha: &BigRational, radius: f64) -> Result<RecordTable> {
    let shape = SplitShape::new(1, 1)?;
    let vectors = found.iter().map(|&(a, b)| {
        let b = BigRational::from_integer(b.into());
        let x = BigRational::from_integer(a.into()) - alpha * &b;
        SplitVector::new(shape, vec![x, b]).expect("planar")
    });
    RecordTable::from_vectors(shape, vectors, radius)
}

/// Saddle and cylinder excursion reports of the surface sheared by `[[1, -α], [0, 1]]`.
///
/// The shear tilts the direction of slope `1/α` to vertical; holonomies are searched in
/// Stern–Brocot order of increasing height and subtrees are cut once they cannot produce a
/// record.
pub fn qd_excursion(surface: &Origami, alpha: &ExactScalar, budget: Budget) -> Result<QdExcursion> {
    if !(budget.r_max >= 1.0 && budget.r_max < 1e15) {
        return Err(crate::Error::InvalidArgument("radius must lie in [1, 1e15)".into()));
    }
    let n = surface.n();
    let mut search = Search {
        surface,
        alpha: alpha.to_f64(),
        radius: budget.r_max.floor() as i64,
        stairs: [Staircase::default(), Staircase::default()],
        found: [BTreeSet::new(), BTreeSet::new()],
    };
    search.visit(IDENTITY, &Direction::horizontal(n));
    search.visit(IDENTITY, &Direction::vertical(n));
    let mut heap = BinaryHeap::new();
    let mut pending: Vec<(usize, Direction, Direction)> = Vec::new();
    for frame in [IDENTITY, MIRROR_X] {
        heap.push((Reverse(1i64), pending.len()));
        pending.push((frame, Direction::horizontal(n), Direction::vertical(n)));
    }
    while let Some((_, idx)) = heap.pop() {
        let (frame, a, b) = std::mem::replace(&mut pending[idx], (0, Direction::horizontal(0), Direction::horizontal(0)));
        if !search.worth(frame, &a, &b) {
            continue;
        }
        let c = Direction::mediant(&surface.frames[frame], &a, &b);
        search.visit(frame, &c);
        for (l, r) in [(a, c.clone()), (c, b)] {
            if search.worth(frame, &l, &r) {
                heap.push((Reverse(l.q + r.q), pending.len()));
                pending.push((frame, l, r));
            }
        }
    }
    let value = alpha.value();
    let saddle_table = table(&search.found[0], value, budget.r_max)?;
    let cylinder_table = table(&search.found[1], value, budget.r_max)?;
    Ok(QdExcursion {
        saddle: ExcursionReport::from_table(&saddle_table, budget.tolerance)?,
        cylinder: ExcursionReport::from_table(&cylinder_table, budget.tolerance)?,
        saddle_candidates: search.found[0].len(),
        cylinder_candidates: search.found[1].len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{scalar_from_spec, NumberSpec};

    fn scalar(spec: &str) -> ExactScalar {
        scalar_from_spec(&spec.parse::<NumberSpec>().unwrap(), 512).unwrap()
    }

    #[test]
    fn staircase_keeps_frontier() {
        let mut s = Staircase::default();
        s.insert(5, 1.0);
        s.insert(3, 2.0);
        s.insert(7, 1.5);
        s.insert(8, 0.5);
        assert_eq!(s.best_below(4), 2.0);
        assert_eq!(s.best_below(7), 1.0);
        assert_eq!(s.best_below(100), 0.5);
        assert_eq!(s.0.len(), 3);
    }

    #[test]
    fn torus_golden_exponent() {
        let budget = Budget { r_max: 1e4, tolerance: 0.1 };
        let qd = qd_excursion(&Origami::torus(), &scalar("golden"), budget).unwrap();
        assert!((qd.saddle.mu_hat - 2.0).abs() < 0.1, "{}", qd.saddle.mu_hat);
        assert!((qd.cylinder.mu_hat - 2.0).abs() < 0.1, "{}", qd.cylinder.mu_hat);
    }

    #[test]
    fn torus_matches_planar_lattice() {
        use crate::analytics::verify_axiomatic;
        use crate::lattice::{LatticeProvider, LatticeSpec};
        let budget = Budget { r_max: 1e5, tolerance: 0.1 };
        for spec in ["golden", "liouville:b=2,nu=3,b1=1,k=6", "sqrt:2/1"] {
            let alpha = scalar(spec);
            let qd = qd_excursion(&Origami::torus(), &alpha, budget).unwrap();
            let lattice = LatticeProvider::new(LatticeSpec::planar(alpha)).unwrap();
            let report = verify_axiomatic(&lattice, budget).unwrap();
            for r in [&qd.saddle, &qd.cylinder] {
                assert_eq!(r.record_count, report.record_count, "{spec}");
                assert!((r.mu_hat - report.mu_hat).abs() < 1e-9, "{spec}");
                assert!((r.beta_hat - report.beta_hat).abs() < 1e-9, "{spec}");
                assert!((r.gamma_hat - report.gamma_hat).abs() < 1e-9, "{spec}");
            }
        }
    }

    #[test]
    fn l_shape_golden_identity() {
        let budget = Budget { r_max: 1e3, tolerance: 0.1 };
        let qd = qd_excursion(&Origami::l_shape(), &scalar("golden"), budget).unwrap();
        assert!(qd.saddle.residuals.beta_gamma <= 0.1, "{:?}", qd.saddle.residuals);
        assert!(qd.cylinder.residuals.beta_gamma <= 0.1, "{:?}", qd.cylinder.residuals);
    }
}
