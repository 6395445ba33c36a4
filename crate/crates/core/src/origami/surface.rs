use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::{Error, Result};

/// Corner slots of a square.
pub(crate) const BL: usize = 0;
pub(crate) const BR: usize = 1;
pub(crate) const TL: usize = 2;
pub(crate) const TR: usize = 3;

/// A vertex of the square tiling: its cone angle is `2π·angle_multiple`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub angle_multiple: usize,
    /// Cone points, and every vertex of a genus-one surface (marked points).
    pub singular: bool,
}

/// Gluing data and derived vertex classes, seen in one orientation of the plane.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    pub h: Vec<usize>,
    pub v: Vec<usize>,
    pub h_inv: Vec<usize>,
    pub singular_bl: Vec<bool>,
}

/// A square-tiled surface: `h(i)` is the right neighbour of square `i`, `v(i)` the top one.
#[derive(Clone, Debug)]
pub struct Origami {
    h: Vec<usize>,
    v: Vec<usize>,
    corner_vertex: Vec<[usize; 4]>,
    vertices: Vec<Vertex>,
    genus: usize,
    /// Frames: identity, x-mirror, y-mirror, both mirrors, diagonal transpose.
    pub(crate) frames: Vec<Frame>,
}

/// Origami file contents: one-line permutations on `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrigamiFile {
    pub n: usize,
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

pub(crate) fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&j| j < p.len() && !std::mem::replace(&mut seen[j], true))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub fn find(&mut self, x: usize) -> usize {
        find(&mut self.0, x)
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Vertex label of every corner, and the number of corners per vertex.
fn corner_classes(h: &[usize], v: &[usize]) -> (Vec<[usize; 4]>, Vec<usize>) {
    let n = h.len();
    let mut uf = UnionFind::new(4 * n);
    for i in 0..n {
        uf.union(4 * i + BR, 4 * h[i] + BL);
        uf.union(4 * i + TR, 4 * h[i] + TL);
        uf.union(4 * i + TL, 4 * v[i] + BL);
        uf.union(4 * i + TR, 4 * v[i] + BR);
    }
    let mut label = vec![usize::MAX; 4 * n];
    let mut sizes = Vec::new();
    let mut corners = vec![[0; 4]; n];
    for i in 0..n {
        for c in 0..4 {
            let r = uf.find(4 * i + c);
            if label[r] == usize::MAX {
                label[r] = sizes.len();
                sizes.push(0);
            }
            corners[i][c] = label[r];
            sizes[label[r]] += 1;
        }
    }
    (corners, sizes)
}

impl Origami {
    /// Builds a surface from 0-based permutations.
    pub fn new(h: Vec<usize>, v: Vec<usize>) -> Result<Self> {
        if h.len() != v.len() || h.is_empty() {
            return Err(Error::InvalidArgument("permutations must have equal positive size".into()));
        }
        if !is_permutation(&h) || !is_permutation(&v) {
            return Err(Error::InvalidArgument("h and v must be permutations".into()));
        }
        let n = h.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let (hi, vi) = (invert(&h), invert(&v));
        while let Some(i) = queue.pop_front() {
            for j in [h[i], v[i], hi[i], vi[i]] {
                if !std::mem::replace(&mut seen[j], true) {
                    queue.push_back(j);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }
        let (corner_vertex, sizes) = corner_classes(&h, &v);
        let genus = (2 + n - sizes.len()) / 2;
        let vertices = sizes
            .iter()
            .map(|&c| Vertex { angle_multiple: c / 4, singular: c > 4 || genus == 1 })
            .collect();
        let mut o = Origami { h, v, corner_vertex, vertices, genus, frames: Vec::new() };
        let (h, v) = (o.h.clone(), o.v.clone());
        let (hi, vi) = (invert(&h), invert(&v));
        o.frames = vec![
            o.frame(h.clone(), v.clone()),
            o.frame(hi.clone(), v.clone()),
            o.frame(h.clone(), vi.clone()),
            o.frame(hi, vi),
            o.frame(v, h),
        ];
        Ok(o)
    }

    /// Builds a surface from 1-based one-line permutations.
    pub fn from_one_line(h: &[usize], v: &[usize]) -> Result<Self> {
        let shift = |p: &[usize]| -> Result<Vec<usize>> {
            p.iter()
                .map(|&x| x.checked_sub(1).ok_or_else(|| Error::InvalidArgument("entries start at 1".into())))
                .collect()
        };
        Self::new(shift(h)?, shift(v)?)
    }

    pub fn from_file(file: &OrigamiFile) -> Result<Self> {
        if file.h.len() != file.n || file.v.len() != file.n {
            return Err(Error::InvalidArgument("permutation length differs from n".into()));
        }
        Self::from_one_line(&file.h, &file.v)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_file(&self) -> OrigamiFile {
        OrigamiFile {
            n: self.n(),
            h: self.h.iter().map(|x| x + 1).collect(),
            v: self.v.iter().map(|x| x + 1).collect(),
        }
    }

    /// The single-square torus with its corner as marked point.
    pub fn torus() -> Self {
        Self::new(vec![0], vec![0]).expect("valid")
    }

    /// The three-square L: squares 1, 2 in a row, square 3 on top of square 1.
    pub fn l_shape() -> Self {
        Self::from_one_line(&[2, 1, 3], &[3, 2, 1]).expect("valid")
    }

    fn frame(&self, h: Vec<usize>, v: Vec<usize>) -> Frame {
        // vertex classes are intrinsic; recompute them in the new orientation and
        // read singularity off the corner count
        let (corners, sizes) = corner_classes(&h, &v);
        let singular_bl =
            corners.iter().map(|c| sizes[c[BL]] > 4 || self.genus == 1).collect();
        let h_inv = invert(&h);
        Frame { h, v, h_inv, singular_bl }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn is_marked_torus(&self) -> bool {
        self.n() == 1
    }

    /// Vertex label of corner `corner` (0 = BL, 1 = BR, 2 = TL, 3 = TR) of square `square`.
    pub fn corner_vertex(&self, square: usize, corner: usize) -> usize {
        self.corner_vertex[square][corner]
    }

    /// Cone angles as multiples of `2π`, one per singular vertex, sorted.
    pub fn cone_angles(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.vertices.iter().filter(|v| v.singular).map(|v| v.angle_multiple).collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marked_torus() {
        let t = Origami::torus();
        assert!(t.is_marked_torus());
        assert_eq!(t.genus(), 1);
        assert_eq!(t.vertices(), &[Vertex { angle_multiple: 1, singular: true }]);
    }

    /// Cycle type of the commutator `v^{-1} h^{-1} v h` gives the cone angles.
    fn commutator_angles(o: &Origami) -> Vec<usize> {
        let (h, v) = (o.h(), o.v());
        let (hi, vi) = (invert(h), invert(v));
        let n = h.len();
        let c: Vec<usize> = (0..n).map(|i| vi[hi[v[h[i]]]]).collect();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let mut len = 0;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = c[j];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn l_shape_has_one_cone_point() {
        let l = Origami::l_shape();
        assert_eq!(l.genus(), 2);
        assert_eq!(l.cone_angles(), vec![3]);
        assert_eq!(commutator_angles(&l), vec![3]);
    }

    #[test]
    fn angles_match_commutator_and_gauss_bonnet() {
        let cases: Vec<(Vec<usize>, Vec<usize>)> = vec![
            (vec![2, 3, 1, 4], vec![4, 2, 3, 1]),
            (vec![2, 1, 4, 3], vec![3, 4, 2, 1]),
            (vec![2, 3, 4, 5, 1], vec![1, 3, 2, 5, 4]),
            (vec![2, 1, 3, 4], vec![3, 4, 1, 2]),
        ];
        for (h, v) in cases {
            let o = Origami::from_one_line(&h, &v).unwrap();
            let mut all: Vec<usize> = o.vertices().iter().map(|v| v.angle_multiple).collect();
            all.sort_unstable();
            assert_eq!(all, commutator_angles(&o));
            let excess: usize = all.iter().map(|a| a - 1).sum();
            assert_eq!(excess, 2 * o.genus() - 2);
        }
    }

    #[test]
    fn two_square_cylinder() {
        let o = Origami::from_one_line(&[2, 1], &[1, 2]).unwrap();
        assert_eq!(o.genus(), 1);
        assert_eq!(o.vertices().len(), 2);
        assert!(!o.is_marked_torus());
    }

    #[test]
    fn disconnected_rejected() {
        assert!(matches!(Origami::from_one_line(&[1, 2], &[1, 2]), Err(Error::Disconnected)));
        assert!(Origami::from_one_line(&[1, 1], &[1, 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let l = Origami::l_shape();
        let text = serde_json::to_string(&l.to_file()).unwrap();
        let back = Origami::from_json(&text).unwrap();
        assert_eq!(back.h(), l.h());
        assert_eq!(back.v(), l.v());
    }
}
