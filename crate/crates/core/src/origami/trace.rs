//! Straight-line flow on a square-tiled surface in rational directions.
//!
//! Directions with `p, q ≥ 0` are handled in the frame where they point into the
//! first quadrant; the other quadrants use mirrored copies of the gluing.

use super::surface::{Frame, Origami, UnionFind};

pub(crate) type Perm = Vec<usize>;

/// Frame indices into `Origami::frames`.
pub(crate) const IDENTITY: usize = 0;
pub(crate) const MIRROR_X: usize = 1;
pub(crate) const MIRROR_Y: usize = 2;
pub(crate) const MIRROR_XY: usize = 3;
pub(crate) const TRANSPOSE: usize = 4;

pub(crate) fn to_frame(frame: usize, (a, b): (i64, i64)) -> (i64, i64) {
    match frame {
        MIRROR_X => (-a, b),
        MIRROR_Y => (a, -b),
        MIRROR_XY => (-a, -b),
        TRANSPOSE => (b, a),
        _ => (a, b),
    }
}

fn then(first: &[usize], second: &[usize]) -> Perm {
    first.iter().map(|&s| second[s]).collect()
}

fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// A node of the Stern–Brocot traversal: a direction and the permutation carried by
/// the grid lines crossed strictly inside the segment from a corner to the next corner.
#[derive(Clone)]
pub(crate) struct Direction {
    pub p: i64,
    pub q: i64,
    pub crossing: Perm,
}

impl Direction {
    pub fn horizontal(n: usize) -> Self {
        Direction { p: 1, q: 0, crossing: identity(n) }
    }

    pub fn vertical(n: usize) -> Self {
        Direction { p: 0, q: 1, crossing: identity(n) }
    }

    /// Mediant of `a` (smaller slope) and its Farey neighbour `b`.
    pub fn mediant(frame: &Frame, a: &Direction, b: &Direction) -> Self {
        // the segment to a + b passes just above the corner at a
        let mut crossing = a.crossing.clone();
        if a.q >= 1 {
            crossing = then(&crossing, &frame.v);
        }
        if !(b.p == 0 && b.q == 1) {
            crossing = then(&then(&crossing, &frame.h), &b.crossing);
        }
        Direction { p: a.p + b.p, q: a.q + b.q, crossing }
    }

    /// Square entered after passing one full period `(p, q)` from the lower-left corner of `s`.
    pub fn monodromy(&self, frame: &Frame) -> Perm {
        match (self.p, self.q) {
            (1, 0) => frame.h.clone(),
            (0, 1) => frame.v.clone(),
            _ => self.crossing.iter().map(|&s| frame.v[frame.h[s]]).collect(),
        }
    }
}

/// Depth-first Stern–Brocot walk over directions `p, q ≥ 1` with `max(p, q) ≤ limit`.
pub(crate) fn for_each_direction(frame: &Frame, limit: i64, mut visit: impl FnMut(&Direction)) {
    let n = frame.h.len();
    let mut stack = vec![(Direction::horizontal(n), Direction::vertical(n))];
    while let Some((a, b)) = stack.pop() {
        if (a.p + b.p).max(a.q + b.q) > limit {
            continue;
        }
        let c = Direction::mediant(frame, &a, &b);
        visit(&c);
        stack.push((c.clone(), b));
        stack.push((a, c));
    }
}

/// Saddle connections leaving singular corners in direction `dir`, as multiples of `(p, q)`.
pub(crate) fn saddle_multiples(frame: &Frame, dir: &Direction, max_multiple: i64) -> Vec<i64> {
    let step = dir.monodromy(frame);
    let n = step.len();
    let mut out = Vec::new();
    for start in (0..n).filter(|&s| frame.singular_bl[s]) {
        let mut s = start;
        for k in 1..=(n as i64).min(max_multiple) {
            s = step[s];
            if frame.singular_bl[s] {
                out.push(k);
                break;
            }
        }
    }
    out
}

/// Core multiples of the maximal cylinders in direction `(p, q)`, `p ≥ 0`, `q ≥ 1`.
///
/// The bottom edge of every square is cut into `q` pieces at multiples of `1/q`;
/// the flow maps pieces to pieces, and the cut points follow the same map.
/// Two pieces lie in one cylinder when joined through a cut point whose leaf
/// never meets a singular corner.
pub(crate) fn cylinder_multiples(frame: &Frame, p: i64, q: i64) -> Vec<i64> {
    assert!(p >= 0 && q >= 1);
    let n = frame.h.len();
    let (pu, qu) = (p as usize, q as usize);
    let size = n * qu;
    let max_shift = pu.div_ceil(qu);
    // h^j for j ≤ max_shift
    let mut powers: Vec<Perm> = vec![identity(n)];
    for j in 1..=max_shift {
        powers.push(then(&powers[j - 1], &frame.h));
    }
    let next: Vec<usize> = (0..size)
        .map(|i| {
            let (s, k) = (i / qu, i % qu);
            let t = k + pu;
            frame.v[powers[t / qu][s]] * qu + t % qu
        })
        .collect();

    let mut cycle_of = vec![usize::MAX; size];
    let mut cycle_len = Vec::new();
    let mut cycle_singular = Vec::new();
    for i in 0..size {
        if cycle_of[i] != usize::MAX {
            continue;
        }
        let id = cycle_len.len();
        let (mut j, mut len, mut singular) = (i, 0usize, false);
        while cycle_of[j] == usize::MAX {
            cycle_of[j] = id;
            singular |= j % qu == 0 && frame.singular_bl[j / qu];
            len += 1;
            j = next[j];
        }
        cycle_len.push(len);
        cycle_singular.push(singular);
    }

    let mut uf = UnionFind::new(cycle_len.len());
    for cut in 0..size {
        if cycle_singular[cycle_of[cut]] {
            continue;
        }
        let (s, j) = (cut / qu, cut % qu);
        let left = if j > 0 { cut - 1 } else { frame.h_inv[s] * qu + qu - 1 };
        uf.union(cycle_of[left], cycle_of[cut]);
    }
    let mut seen = vec![false; cycle_len.len()];
    let mut out = Vec::new();
    for c in 0..cycle_len.len() {
        let r = uf.find(c);
        if !std::mem::replace(&mut seen[r], true) {
            out.push((cycle_len[c] / qu) as i64);
        }
    }
    out
}

/// Cylinder core multiples in an arbitrary primitive direction.
pub(crate) fn cylinders_in_direction(surface: &Origami, p: i64, q: i64) -> Vec<i64> {
    let (p, q) = if q < 0 || (q == 0 && p < 0) { (-p, -q) } else { (p, q) };
    if q == 0 {
        cylinder_multiples(&surface.frames[TRANSPOSE], 0, 1)
    } else if p < 0 {
        cylinder_multiples(&surface.frames[MIRROR_X], -p, q)
    } else {
        cylinder_multiples(&surface.frames[IDENTITY], p, q)
    }
}
