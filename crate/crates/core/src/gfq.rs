//! Table-driven arithmetic in GF(q) for q = p^k <= 9.
//!
//! Elements are small integers. For k > 1 an element `c_0 + c_1 p + ...`
//! encodes the polynomial `c_0 + c_1 t + ...` modulo a fixed monic
//! irreducible of degree k (the lexicographically least one under the same
//! encoding of its lower coefficients). Index 0 is zero, index 1 is one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_Q: usize = 9;

/// Element of a [`Field`], encoded as its index in `[0, q)`.
pub type Elem = u8;

/// A finite field GF(p^k) with full lookup tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u8,
    k: u8,
    q: u8,
    /// Lower coefficients of the monic modulus, constant term first. Unused when k = 1.
    modulus: [u8; 4],
    add: [[u8; MAX_Q]; MAX_Q],
    mul: [[u8; MAX_Q]; MAX_Q],
    neg: [u8; MAX_Q],
    inv: [u8; MAX_Q],
}

/// Serializable description of a field, enough to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u8,
    pub k: u8,
    pub q: u8,
    /// Modulus coefficients, constant term first, including the leading 1.
    pub modulus: Vec<u8>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn digits(mut v: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[usize], p: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiply two polynomials over GF(p) with `k` coefficients each, reduce by
/// the monic modulus `t^k + lower`.
fn poly_mulmod(a: &[usize], b: &[usize], lower: &[usize], p: usize) -> Vec<usize> {
    let k = lower.len();
    let mut prod = vec![0usize; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // t^deg = t^(deg-k) * t^k = -t^(deg-k) * lower
        for (i, &l) in lower.iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + (p - (c * l) % p)) % p;
        }
    }
    prod.truncate(k);
    prod
}

fn has_root_free_irreducible(lower: &[usize], p: usize) -> bool {
    // Degree <= 3: irreducible iff no root in GF(p).
    let k = lower.len();
    (0..p).all(|x| {
        let mut val = 1usize; // leading coefficient
        for i in (0..k).rev() {
            val = (val * x + lower[i]) % p;
        }
        val != 0
    })
}

impl Field {
    /// Build GF(p^k). Rejects non-prime `p`, `k = 0` and orders above 9.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Field(format!("characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Field("extension degree must be at least 1".into()));
        }
        let q = p.checked_pow(k).filter(|&q| q as usize <= MAX_Q).ok_or_else(|| {
            Error::Field(format!("GF({p}^{k}) exceeds the supported order {MAX_Q}"))
        })?;
        let (p, k, q) = (p as usize, k as usize, q as usize);

        let lower: Vec<usize> = if k == 1 {
            Vec::new()
        } else {
            (0..q)
                .map(|i| digits(i, p, k))
                .find(|l| has_root_free_irreducible(l, p))
                .ok_or_else(|| Error::Field(format!("no irreducible modulus of degree {k} over GF({p})")))?
        };

        let mut add = [[0u8; MAX_Q]; MAX_Q];
        let mut mul = [[0u8; MAX_Q]; MAX_Q];
        for a in 0..q {
            for b in 0..q {
                if k == 1 {
                    add[a][b] = ((a + b) % p) as u8;
                    mul[a][b] = ((a * b) % p) as u8;
                } else {
                    let (da, db) = (digits(a, p, k), digits(b, p, k));
                    let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[a][b] = undigits(&s, p) as u8;
                    mul[a][b] = undigits(&poly_mulmod(&da, &db, &lower, p), p) as u8;
                }
            }
        }
        let mut neg = [0u8; MAX_Q];
        let mut inv = [0u8; MAX_Q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a][b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (0..q)
                    .find(|&b| mul[a][b] == 1)
                    .ok_or_else(|| Error::Field(format!("element {a} has no inverse")))? as u8;
            }
        }
        let mut modulus = [0u8; 4];
        for (i, &c) in lower.iter().enumerate() {
            modulus[i] = c as u8;
        }
        Ok(Field { p: p as u8, k: k as u8, q: q as u8, modulus, add, mul, neg, inv })
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        let f = Field::new(spec.p as u32, spec.k as u32)?;
        if f.spec() != *spec {
            return Err(Error::Field(format!(
                "field description {spec:?} does not match the canonical GF({}^{})",
                spec.p, spec.k
            )));
        }
        Ok(f)
    }

    pub fn spec(&self) -> FieldSpec {
        let modulus = if self.k == 1 {
            vec![0, 1]
        } else {
            let mut m: Vec<u8> = self.modulus[..self.k as usize].to_vec();
            m.push(1);
            m
        };
        FieldSpec { p: self.p, k: self.k, q: self.q, modulus }
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p as usize
    }
    #[inline]
    pub fn k(&self) -> usize {
        self.k as usize
    }
    #[inline]
    pub fn q(&self) -> usize {
        self.q as usize
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize][b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize][self.neg[b as usize] as usize]
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize][b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }
    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.inv[a as usize])
    }
    pub fn pow(&self, a: Elem, mut e: u32) -> Elem {
        let (mut base, mut acc) = (a, 1u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u32)
    }
    /// `a * x + y`, the axpy kernel of every elimination loop.
    #[inline]
    pub fn mul_add(&self, a: Elem, x: Elem, y: Elem) -> Elem {
        self.add[self.mul[a as usize][x as usize] as usize][y as usize]
    }
    /// The image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.p as i64) as Elem
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        1..self.q
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}
