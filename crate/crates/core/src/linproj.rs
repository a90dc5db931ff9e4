//! Exact linear algebra over GF(q) and the projective-subspace calculus.
//!
//! A [`Subspace`] is stored as its reduced-row-echelon basis, so two
//! subspaces are equal exactly when their bases are byte-equal. Projective
//! points are vectors normalised so the first nonzero coordinate is 1.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};

/// Canonical integer key of a normalised vector: base-q digits with
/// coordinate 0 most significant. For q = 2 this is the bit pattern, so the
/// key of a sum is the XOR of keys.
pub type PointKey = u64;

pub fn pack(coords: &[Elem], q: usize) -> PointKey {
    coords.iter().fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

pub fn unpack(mut key: PointKey, n: usize, q: usize) -> Vec<Elem> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = (key % q as u64) as Elem;
        key /= q as u64;
    }
    out
}

/// Largest vector dimension whose points can be keyed in a `u64`.
pub fn max_keyable_dim(q: usize) -> usize {
    let mut n = 0;
    let mut cap: u128 = 1;
    while cap * (q as u128) <= u64::MAX as u128 + 1 {
        cap *= q as u128;
        n += 1;
    }
    n
}

/// Scale `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize(field: &Field, v: &mut [Elem]) -> bool {
    let Some(lead) = v.iter().copied().find(|&c| c != 0) else {
        return false;
    };
    if lead != 1 {
        let s = field.inv(lead).unwrap();
        for c in v.iter_mut() {
            *c = field.mul(*c, s);
        }
    }
    true
}

/// `y += a * x`
#[inline]
pub fn axpy(field: &Field, a: Elem, x: &[Elem], y: &mut [Elem]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = field.mul_add(a, xi, *yi);
    }
}

pub fn dot(field: &Field, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| field.mul_add(a, b, acc))
}

/// A point of P^(n-1)(GF(q)), i.e. a normalised nonzero vector of length n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec<Elem>);

impl ProjPoint {
    pub fn new(field: &Field, mut coords: Vec<Elem>) -> Option<ProjPoint> {
        normalize(field, &mut coords).then_some(ProjPoint(coords))
    }

    /// Wraps coordinates that are already normalised.
    pub fn from_normalized(coords: Vec<Elem>) -> ProjPoint {
        debug_assert!(coords.iter().find(|&&c| c != 0) == Some(&1));
        ProjPoint(coords)
    }

    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Elem> {
        self.0
    }

    /// Length of the coordinate vector (projective dimension + 1).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn key(&self, q: usize) -> PointKey {
        pack(&self.0, q)
    }
}

/// Incremental reduced-row-echelon accumulator.
#[derive(Clone, Debug)]
pub struct Echelon {
    n: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Echelon {
        Echelon { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows in place.
    pub fn reduce(&self, field: &Field, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(field, field.neg(c), row, v);
            }
        }
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Add `v` to the span; returns true when the rank grew.
    pub fn insert(&mut self, field: &Field, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.n, "vector length does not match ambient dimension");
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        if !normalize(field, &mut w) {
            return false;
        }
        let p = w.iter().position(|&c| c != 0).unwrap();
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                axpy(field, field.neg(c), &w, row);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        let mut rows = Vec::with_capacity(self.rows.len() * self.n);
        for r in &self.rows {
            rows.extend_from_slice(r);
        }
        Subspace { n: self.n, rows, pivots: self.pivots }
    }
}

/// A projective subspace of P^(n-1), stored as a canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Elem>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn empty(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Subspace {
        let mut rows = vec![0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1;
        }
        Subspace { n, rows, pivots: (0..n).collect() }
    }

    /// Span of a list of vectors of length `n`.
    pub fn from_vectors<'a, I>(field: &Field, n: usize, vectors: I) -> Result<Subspace>
    where
        I: IntoIterator<Item = &'a [Elem]>,
    {
        let mut e = Echelon::new(n);
        for v in vectors {
            if v.len() != n {
                return Err(Error::DimensionMismatch(n, v.len()));
            }
            e.insert(field, v);
        }
        Ok(e.into_subspace())
    }

    /// Rebuild from rows that are already in RREF (e.g. read from disk).
    pub fn from_rref_rows(field: &Field, n: usize, rows: Vec<Elem>) -> Result<Subspace> {
        if n == 0 || rows.len() % n != 0 {
            return Err(Error::Format("basis length is not a multiple of the ambient dimension".into()));
        }
        let s = Subspace::from_vectors(field, n, rows.chunks(n))?;
        if s.rows != rows {
            return Err(Error::Format("basis is not in reduced row echelon form".into()));
        }
        Ok(s)
    }

    pub fn ambient_len(&self) -> usize {
        self.n
    }

    /// Vector dimension.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn projdim(&self) -> isize {
        self.rank() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.rows.chunks(self.n.max(1)).take(self.rank())
    }

    pub fn raw_rows(&self) -> &[Elem] {
        &self.rows
    }

    fn echelon(&self) -> Echelon {
        Echelon { n: self.n, rows: self.rows().map(<[Elem]>::to_vec).collect(), pivots: self.pivots.clone() }
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn contains_vec(&self, field: &Field, v: &[Elem]) -> bool {
        v.len() == self.n && self.echelon().contains(field, v)
    }

    pub fn contains_point(&self, field: &Field, p: &ProjPoint) -> bool {
        self.contains_vec(field, p.coords())
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        let e = self.echelon();
        other.n == self.n && other.rows().all(|r| e.contains(field, r))
    }

    /// Smallest subspace containing both.
    pub fn join(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut e = self.echelon();
        for r in other.rows() {
            e.insert(field, r);
        }
        Ok(e.into_subspace())
    }

    pub fn join_vec(&self, field: &Field, v: &[Elem]) -> Result<Subspace> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(self.n, v.len()));
        }
        let mut e = self.echelon();
        e.insert(field, v);
        Ok(e.into_subspace())
    }

    /// The annihilator {y : r . y = 0 for every basis row r} under the standard dot product.
    pub fn annihilator(&self, field: &Field) -> Subspace {
        let basis = nullspace(field, self.n, &self.rows);
        Subspace::from_vectors(field, self.n, basis.iter().map(Vec::as_slice)).unwrap()
    }

    pub fn intersect(&self, field: &Field, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let ann = self.annihilator(field).join(field, &other.annihilator(field))?;
        Ok(ann.annihilator(field))
    }

    /// Coordinates of `v` in terms of the basis rows, or None if `v` is outside.
    pub fn local_coords(&self, field: &Field, v: &[Elem]) -> Option<Vec<Elem>> {
        let c: Vec<Elem> = self.pivots.iter().map(|&p| v[p]).collect();
        (self.from_local(field, &c) == v).then_some(c)
    }

    /// Coordinates of a vector already known to lie in the subspace.
    pub fn local_coords_unchecked(&self, v: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }

    pub fn from_local(&self, field: &Field, c: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.n];
        for (i, &ci) in c.iter().enumerate() {
            axpy(field, ci, self.row(i), &mut v);
        }
        v
    }

    /// Number of projective points: (q^rank - 1)/(q - 1).
    pub fn point_count(&self, q: usize) -> u64 {
        ((q as u64).pow(self.rank() as u32) - 1) / (q as u64 - 1)
    }

    /// Visit every projective point. Combinations of RREF rows whose first
    /// nonzero coefficient is 1 are already normalised.
    pub fn for_each_point<F: FnMut(&[Elem])>(&self, field: &Field, mut f: F) {
        let r = self.rank();
        let q = field.q();
        let mut v = vec![0 as Elem; self.n];
        for lead in 0..r {
            let combos = q.pow((r - lead - 1) as u32);
            for t in 0..combos {
                v.copy_from_slice(self.row(lead));
                let mut x = t;
                for i in (lead + 1..r).rev() {
                    axpy(field, (x % q) as Elem, self.row(i), &mut v);
                    x /= q;
                }
                f(&v);
            }
        }
    }

    pub fn points(&self, field: &Field) -> Vec<ProjPoint> {
        let mut out = Vec::with_capacity(self.point_count(field.q()) as usize);
        self.for_each_point(field, |v| out.push(ProjPoint(v.to_vec())));
        out
    }

    /// Keys of all points. Uses XOR Gray-code stepping for q = 2.
    pub fn point_keys(&self, field: &Field) -> Vec<PointKey> {
        let q = field.q();
        if q == 2 {
            let row_keys: Vec<PointKey> = self.rows().map(|r| pack(r, 2)).collect();
            let r = row_keys.len();
            let mut out = Vec::with_capacity((1usize << r).saturating_sub(1));
            let mut acc = 0u64;
            for i in 1u64..(1u64 << r) {
                acc ^= row_keys[i.trailing_zeros() as usize];
                out.push(acc);
            }
            out
        } else {
            let mut out = Vec::with_capacity(self.point_count(q) as usize);
            self.for_each_point(field, |v| out.push(pack(v, q)));
            out
        }
    }
}

/// Basis of the right nullspace {y : M y = 0} of a row-major matrix with `n` columns.
pub fn nullspace(field: &Field, n: usize, matrix: &[Elem]) -> Vec<Vec<Elem>> {
    let mut e = Echelon::new(n);
    for r in matrix.chunks(n.max(1)) {
        if r.len() == n {
            e.insert(field, r);
        }
    }
    let pivots = e.pivots.clone();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut y = vec![0; n];
            y[fc] = 1;
            for (row, &p) in e.rows.iter().zip(&pivots) {
                y[p] = field.neg(row[fc]);
            }
            y
        })
        .collect()
}

/// Inverse of a square row-major matrix, or None when singular.
pub fn invert(field: &Field, n: usize, matrix: &[Elem]) -> Option<Vec<Elem>> {
    // reduce [M | I] and read off the right half
    let w = 2 * n;
    let mut aug = vec![0; n * w];
    for i in 0..n {
        aug[i * w..i * w + n].copy_from_slice(&matrix[i * n..(i + 1) * n]);
        aug[i * w + n + i] = 1;
    }
    let s = Subspace::from_vectors(field, w, aug.chunks(w)).ok()?;
    if s.pivots().iter().copied().take(n).ne(0..n) || s.rank() != n {
        return None;
    }
    Some(s.rows().flat_map(|r| r[n..].to_vec()).collect())
}

/// Rank of a row-major matrix with `n` columns.
pub fn rank(field: &Field, n: usize, matrix: &[Elem]) -> usize {
    let mut e = Echelon::new(n);
    for r in matrix.chunks(n) {
        e.insert(field, r);
    }
    e.rank()
}

/// Smallest subspace containing all inputs.
pub fn span<'a, I>(field: &Field, n: usize, points: I) -> Result<Subspace>
where
    I: IntoIterator<Item = &'a ProjPoint>,
{
    Subspace::from_vectors(field, n, points.into_iter().map(ProjPoint::coords))
}

pub fn span_subspaces<'a, I>(field: &Field, n: usize, parts: I) -> Result<Subspace>
where
    I: IntoIterator<Item = &'a Subspace>,
{
    parts.into_iter().try_fold(Subspace::empty(n), |acc, s| acc.join(field, s))
}

pub fn enumerate_points(field: &Field, s: &Subspace) -> Result<Vec<ProjPoint>> {
    if s.is_empty() {
        return Err(Error::Precondition("cannot enumerate the empty subspace".into()));
    }
    Ok(s.points(field))
}

/// All points of P^(n-1).
pub fn all_points(field: &Field, n: usize) -> Vec<ProjPoint> {
    Subspace::full(n).points(field)
}

/// The unique point of `screen` on the join of `center` and `x`.
pub fn project_from(field: &Field, center: &Subspace, screen: &Subspace, x: &ProjPoint) -> Result<ProjPoint> {
    center.check_same(screen)?;
    if x.len() != center.n {
        return Err(Error::DimensionMismatch(center.n, x.len()));
    }
    if !center.intersect(field, screen)?.is_empty() || center.rank() + screen.rank() != center.n {
        return Err(Error::Precondition("center and screen are not complementary".into()));
    }
    if center.contains_point(field, x) {
        return Err(Error::Precondition("point lies in the projection center".into()));
    }
    let through = center.join_vec(field, x.coords())?;
    let meet = through.intersect(field, screen)?;
    debug_assert_eq!(meet.rank(), 1);
    Ok(ProjPoint(meet.row(0).to_vec()))
}

/// Visit every `k`-dimensional (vector) subspace of GF(q)^n, once each, in
/// canonical RREF form.
pub fn for_each_subspace<F: FnMut(Subspace)>(field: &Field, n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let q = field.q();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: row i, columns > pivots[i] that are not pivots
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = pivots.clone();
                (pivots[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut vals = vec![0 as Elem; free.len()];
        loop {
            let mut rows = vec![0 as Elem; k * n];
            for (i, &p) in pivots.iter().enumerate() {
                rows[i * n + p] = 1;
            }
            for (&(i, c), &v) in free.iter().zip(&vals) {
                rows[i * n + c] = v;
            }
            f(Subspace { n, rows, pivots: pivots.clone() });
            let mut j = vals.len();
            let mut done = true;
            while j > 0 {
                j -= 1;
                vals[j] += 1;
                if (vals[j] as usize) < q {
                    done = false;
                    break;
                }
                vals[j] = 0;
            }
            if done {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if k == 0 {
            return;
        }
    }
}

pub fn all_subspaces(field: &Field, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for_each_subspace(field, n, k, |s| out.push(s));
    out
}

/// Gaussian binomial [n choose k]_q.
pub fn gaussian_binomial(n: usize, k: usize, q: usize) -> u64 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

pub fn random_vector<R: Rng>(field: &Field, n: usize, rng: &mut R) -> Vec<Elem> {
    (0..n).map(|_| rng.gen_range(0..field.q()) as Elem).collect()
}

/// Uniformly random `k`-dimensional subspace of GF(q)^n (rejection on rank).
pub fn random_subspace<R: Rng>(field: &Field, n: usize, k: usize, rng: &mut R) -> Subspace {
    assert!(k <= n);
    loop {
        let mut e = Echelon::new(n);
        for _ in 0..k {
            e.insert(field, &random_vector(field, n, rng));
        }
        if e.rank() == k {
            return e.into_subspace();
        }
    }
}
