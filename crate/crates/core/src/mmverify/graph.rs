//! Collinearity graph of an MMSet: dense bit rows for small sets, probes otherwise.

use rayon::prelude::*;

use crate::gfq::Elem;
use crate::linproj::{self, normalize, pack, Subspace};
use crate::mmset::MMSet;

pub struct Collinearity<'a> {
    set: &'a MMSet,
    words: usize,
    dense: Option<Vec<u64>>,
}

impl<'a> Collinearity<'a> {
    /// Dense rows are built when |X| is at most `dense_limit`.
    pub fn new(set: &'a MMSet, dense_limit: usize) -> Collinearity<'a> {
        let n = set.len();
        let words = n.div_ceil(64);
        let dense = (n <= dense_limit).then(|| {
            let rows: Vec<Vec<u64>> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut row = vec![0u64; words];
                    for j in 0..n {
                        if set.collinear(i, j) {
                            row[j / 64] |= 1 << (j % 64);
                        }
                    }
                    row
                })
                .collect();
            rows.concat()
        });
        Collinearity { set, words, dense }
    }

    pub fn set(&self) -> &'a MMSet {
        self.set
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    fn row(&self, i: usize) -> Option<&[u64]> {
        self.dense.as_ref().map(|d| &d[i * self.words..(i + 1) * self.words])
    }

    pub fn collinear(&self, i: usize, j: usize) -> bool {
        match self.row(i) {
            Some(r) => r[j / 64] >> (j % 64) & 1 == 1,
            None => self.set.collinear(i, j),
        }
    }

    pub fn neighbours(&self, i: usize) -> Vec<u32> {
        match self.row(i) {
            Some(r) => bits_to_ids(r),
            None => (0..self.set.len()).filter(|&j| self.set.collinear(i, j)).map(|j| j as u32).collect(),
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        match self.row(i) {
            Some(r) => r.iter().map(|w| w.count_ones() as usize).sum(),
            None => self.neighbours(i).len(),
        }
    }

    /// Points collinear with both; `nbrs_i` may pass a precomputed neighbour list of `i`.
    pub fn common_neighbours(&self, i: usize, j: usize, nbrs_i: Option<&[u32]>) -> Vec<u32> {
        if let (Some(a), Some(b)) = (self.row(i), self.row(j)) {
            let both: Vec<u64> = a.iter().zip(b).map(|(x, y)| x & y).collect();
            return bits_to_ids(&both);
        }
        let owned;
        let ni = match nbrs_i {
            Some(n) => n,
            None => {
                owned = self.neighbours(i);
                &owned
            }
        };
        ni.iter().copied().filter(|&z| self.set.collinear(z as usize, j)).collect()
    }

    /// Points collinear with every listed point.
    pub fn common_to_all(&self, pts: &[u32]) -> Vec<u32> {
        let Some((&first, rest)) = pts.split_first() else {
            return (0..self.set.len() as u32).collect();
        };
        if let Some(r) = self.row(first as usize) {
            let mut acc = r.to_vec();
            for &p in rest {
                for (a, b) in acc.iter_mut().zip(self.row(p as usize).unwrap()) {
                    *a &= b;
                }
            }
            return bits_to_ids(&acc);
        }
        self.neighbours(first as usize)
            .into_iter()
            .filter(|&z| rest.iter().all(|&p| self.set.collinear(z as usize, p as usize)))
            .collect()
    }

    /// Every singular line once, as the sorted indices of its points.
    pub fn lines(&self) -> Vec<Vec<u32>> {
        let set = self.set;
        let mut out = Vec::new();
        for i in 0..set.len() {
            for j in self.neighbours(i) {
                let j = j as usize;
                if j <= i {
                    continue;
                }
                let pts = line_points(set, i, j);
                // emit each line from its two smallest points only
                if pts[0] as usize == i && pts[1] as usize == j {
                    out.push(pts);
                }
            }
        }
        out
    }

    /// Number of singular lines: sum of degrees over q(q+1).
    pub fn line_count(&self) -> u64 {
        let q = self.set.field().q() as u64;
        let total: u64 = (0..self.set.len()).into_par_iter().map(|i| self.degree(i) as u64).sum();
        total / (q * (q + 1))
    }
}

/// Indices of the points of the (singular) line through points i and j, sorted.
pub fn line_points(set: &MMSet, i: usize, j: usize) -> Vec<u32> {
    let field = set.field();
    let (x, y) = (set.point(i), set.point(j));
    let mut pts = vec![i as u32, j as u32];
    let mut v: Vec<Elem> = vec![0; set.n()];
    for t in field.nonzero() {
        v.copy_from_slice(x);
        linproj::axpy(field, t, y, &mut v);
        normalize(field, &mut v);
        if let Some(k) = set.index_of_key(pack(&v, field.q())) {
            if k as usize != i {
                pts.push(k);
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// The subspace spanned by a list of X points.
pub fn span_of(set: &MMSet, pts: &[u32]) -> Subspace {
    Subspace::from_vectors(set.field(), set.n(), pts.iter().map(|&p| set.point(p as usize))).unwrap()
}

pub(crate) fn bits_to_ids(words: &[u64]) -> Vec<u32> {
    let mut out = Vec::new();
    for (w, &word) in words.iter().enumerate() {
        let mut b = word;
        while b != 0 {
            let t = b.trailing_zeros();
            out.push((w * 64) as u32 + t);
            b &= b - 1;
        }
    }
    out
}
