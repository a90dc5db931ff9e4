//! Packed linear algebra over GF(2) for vectors of length at most 64.
//!
//! A vector is a `u64` whose bit `n-1-i` holds coordinate `i`, so the packed
//! word equals the point key of [`crate::linproj::pack`] and sorting rows by
//! leading bit reproduces the RREF pivot order.

use crate::gfq::{Elem, Field};
use crate::linproj::{PointKey, Subspace};

pub fn pack(v: &[Elem]) -> u64 {
    v.iter().fold(0, |acc, &c| (acc << 1) | (c & 1) as u64)
}

pub fn unpack(w: u64, n: usize) -> Vec<Elem> {
    (0..n).map(|i| ((w >> (n - 1 - i)) & 1) as Elem).collect()
}

#[inline]
fn lead(w: u64) -> u32 {
    63 - w.leading_zeros()
}

/// Fully reduced echelon basis; every leading bit occurs in exactly one row.
#[derive(Clone, Debug, Default)]
pub struct BitEchelon {
    rows: Vec<u64>,
}

impl BitEchelon {
    pub fn new() -> BitEchelon {
        BitEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn reduce(&self, mut w: u64) -> u64 {
        for &r in &self.rows {
            if w >> lead(r) & 1 == 1 {
                w ^= r;
            }
        }
        w
    }

    pub fn contains(&self, w: u64) -> bool {
        self.reduce(w) == 0
    }

    pub fn insert(&mut self, w: u64) -> bool {
        let w = self.reduce(w);
        if w == 0 {
            return false;
        }
        let b = lead(w);
        for r in self.rows.iter_mut() {
            if *r >> b & 1 == 1 {
                *r ^= w;
            }
        }
        self.rows.push(w);
        true
    }

    /// Rows sorted by leading bit, highest first: the canonical RREF.
    pub fn canonical(&self) -> Vec<u64> {
        let mut r = self.rows.clone();
        r.sort_unstable_by(|a, b| b.cmp(a));
        r
    }

    /// Basis of {y : r . y = 0 for all rows r} in `n`-bit words.
    pub fn nullspace(&self, n: usize) -> Vec<u64> {
        let leads: u64 = self.rows.iter().fold(0, |a, &r| a | 1u64 << lead(r));
        (0..n as u32)
            .rev()
            .filter(|&b| leads >> b & 1 == 0)
            .map(|b| {
                let mut y = 1u64 << b;
                for &r in &self.rows {
                    if r >> b & 1 == 1 {
                        y |= 1u64 << lead(r);
                    }
                }
                y
            })
            .collect()
    }

    pub fn to_subspace(&self, n: usize) -> Subspace {
        let f = Field::new(2, 1).unwrap();
        let rows: Vec<Elem> = self.canonical().iter().flat_map(|&w| unpack(w, n)).collect();
        Subspace::from_rref_rows(&f, n, rows).expect("packed rows are in RREF")
    }
}

pub fn from_subspace(s: &Subspace) -> Vec<u64> {
    s.rows().map(pack).collect()
}

/// Keys of every point in the span of the given independent rows, in Gray
/// code order.
pub fn span_points(rows: &[u64]) -> impl Iterator<Item = PointKey> + '_ {
    let mut acc = 0u64;
    (1u64..1u64 << rows.len()).map(move |i| {
        acc ^= rows[i.trailing_zeros() as usize];
        acc
    })
}

#[inline]
pub fn parity(w: u64) -> u8 {
    (w.count_ones() & 1) as u8
}

/// Packed quadratic form over GF(2): `Q(x) = sum diag_i x_i + sum_{i<j} g_ij x_i x_j`.
/// `polar[i]` is the packed functional `y -> f(e_i, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitForm {
    pub n: usize,
    pub diag: u64,
    pub polar: Vec<u64>,
    upper: Vec<u64>,
}

impl BitForm {
    /// From an upper-triangular Gram matrix over GF(2).
    pub fn new(n: usize, gram: &[Elem]) -> BitForm {
        let mut polar = vec![0u64; n];
        let mut upper = vec![0u64; n];
        let mut diag = 0u64;
        let bit = |j: usize| 1u64 << (n - 1 - j);
        for i in 0..n {
            if gram[i * n + i] & 1 == 1 {
                diag |= bit(i);
            }
            for j in i + 1..n {
                if gram[i * n + j] & 1 == 1 {
                    polar[i] |= bit(j);
                    polar[j] |= bit(i);
                    upper[i] |= bit(j);
                }
            }
        }
        BitForm { n, diag, polar, upper }
    }

    pub fn eval(&self, x: u64) -> u8 {
        let mut acc = parity(self.diag & x);
        for i in 0..self.n {
            if x >> (self.n - 1 - i) & 1 == 1 {
                acc ^= parity(self.upper[i] & x);
            }
        }
        acc
    }

    pub fn polar_functional(&self, x: u64) -> u64 {
        let mut out = 0;
        for i in 0..self.n {
            if x >> (self.n - 1 - i) & 1 == 1 {
                out ^= self.polar[i];
            }
        }
        out
    }
}

/// Visit every point `c` of P^(m-1) in Gray-code order (as a local coordinate
/// word) together with the ambient key `sum c_i rows[i]` and `Q(c)`.
pub fn for_each_with_form<F: FnMut(u64, PointKey, u8)>(rows: &[u64], form: &BitForm, mut f: F) {
    let m = rows.len();
    debug_assert_eq!(m, form.n);
    let mut c = 0u64;
    let mut key = 0u64;
    let mut qv = 0u8;
    for i in 1u64..1u64 << m {
        let t = i.trailing_zeros() as usize;
        // local coordinate t lives at bit m-1-t
        let e = 1u64 << (m - 1 - t);
        // Q(c + e) = Q(c) + Q(e) + f(c, e)
        qv ^= ((form.diag & e) != 0) as u8 ^ parity(form.polar[t] & c);
        c ^= e;
        key ^= rows[t];
        f(c, key, qv);
    }
}
