use std::collections::BTreeMap;
use std::fmt::Write;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::surface::Origami;
use super::trace::{
    cylinder_multiples, for_each_direction, saddle_multiples, to_frame, Direction, IDENTITY, MIRROR_X,
    MIRROR_XY, MIRROR_Y, TRANSPOSE,
};
use crate::splitspace::{SplitShape, SplitVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HolonomyKind {
    Saddle,
    Cylinder,
}

impl std::fmt::Display for HolonomyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HolonomyKind::Saddle => "saddle",
            HolonomyKind::Cylinder => "cylinder",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolonomyEntry {
    pub a: i64,
    pub b: i64,
    pub multiplicity: usize,
    pub kind: HolonomyKind,
}

/// Holonomy vectors of one kind with `max(|a|, |b|) ≤ radius`, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomySpectrum {
    pub entries: Vec<HolonomyEntry>,
    pub radius: f64,
}

impl HolonomySpectrum {
    pub(crate) fn from_counts(counts: BTreeMap<(i64, i64), usize>, kind: HolonomyKind, radius: f64) -> Self {
        let entries = counts
            .into_iter()
            .map(|((a, b), multiplicity)| HolonomyEntry { a, b, multiplicity, kind })
            .collect();
        HolonomySpectrum { entries, radius }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, a: i64, b: i64) -> usize {
        self.entries.iter().find(|e| e.a == a && e.b == b).map_or(0, |e| e.multiplicity)
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.multiplicity(a, b) > 0
    }

    /// Distinct vectors, sorted.
    pub fn vectors(&self) -> Vec<(i64, i64)> {
        self.entries.iter().map(|e| (e.a, e.b)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|e| self.multiplicity(-e.a, -e.b) == e.multiplicity)
    }

    /// The distinct vectors as planar split vectors `(a, b)`.
    pub fn split_vectors(&self) -> Vec<SplitVector> {
        let shape = SplitShape::new(1, 1).expect("planar");
        self.entries
            .iter()
            .map(|e| {
                SplitVector::new(shape, vec![BigRational::from_integer(e.a.into()), BigRational::from_integer(e.b.into())])
                    .expect("planar")
            })
            .collect()
    }

    /// Shortest Euclidean length of `g·w` over the spectrum.
    pub fn shortest_under(&self, g: [[f64; 2]; 2]) -> Option<f64> {
        self.entries
            .iter()
            .map(|e| {
                let (a, b) = (e.a as f64, e.b as f64);
                (g[0][0] * a + g[0][1] * b).hypot(g[1][0] * a + g[1][1] * b)
            })
            .min_by(f64::total_cmp)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,multiplicity,kind\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", e.a, e.b, e.multiplicity, e.kind);
        }
        out
    }
}

fn limit(radius: f64) -> i64 {
    assert!((0.0..1e12).contains(&radius), "radius out of range");
    radius.floor() as i64
}

/// Saddle connections with holonomy in the sup-norm ball of `radius`.
pub fn saddle_connections(surface: &Origami, radius: f64) -> HolonomySpectrum {
    let r = limit(radius);
    let n = surface.n();
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut record = |frame: usize, d: &Direction| {
        let f = &surface.frames[frame];
        let size = d.p.max(d.q);
        for k in saddle_multiples(f, d, r / size) {
            *counts.entry(to_frame(frame, (k * d.p, k * d.q))).or_default() += 1;
        }
    };
    if r >= 1 {
        record(IDENTITY, &Direction::horizontal(n));
        record(IDENTITY, &Direction::vertical(n));
        record(MIRROR_X, &Direction::horizontal(n));
        record(MIRROR_Y, &Direction::vertical(n));
    }
    for frame in [IDENTITY, MIRROR_X, MIRROR_Y, MIRROR_XY] {
        for_each_direction(&surface.frames[frame], r, |d| record(frame, d));
    }
    HolonomySpectrum::from_counts(counts, HolonomyKind::Saddle, radius)
}

/// Core holonomies `±w` of maximal cylinders with `max(|a|, |b|) ≤ radius`; each cylinder
/// appears once with each sign.
pub fn cylinders(surface: &Origami, radius: f64) -> HolonomySpectrum {
    let r = limit(radius);
    let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut record = |frame: usize, p: i64, q: i64| {
        let size = p.max(q);
        for m in cylinder_multiples(&surface.frames[frame], p, q) {
            if m * size <= r {
                let (a, b) = to_frame(frame, (m * p, m * q));
                *counts.entry((a, b)).or_default() += 1;
                *counts.entry((-a, -b)).or_default() += 1;
            }
        }
    };
    if r >= 1 {
        record(TRANSPOSE, 0, 1);
        record(IDENTITY, 0, 1);
    }
    for frame in [IDENTITY, MIRROR_X] {
        let mut dirs = Vec::new();
        for_each_direction(&surface.frames[frame], r, |d| dirs.push((d.p, d.q)));
        for (p, q) in dirs {
            record(frame, p, q);
        }
    }
    HolonomySpectrum::from_counts(counts, HolonomyKind::Cylinder, radius)
}
