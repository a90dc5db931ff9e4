//! Point sets with a family of quadratic spaces: the objects every check runs on.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf2::{self, BitForm};
use crate::gfq::{Elem, Field};
use crate::linproj::{self, normalize, pack, PointKey, ProjPoint, Subspace};
use crate::quadform::{fit_form, QuadraticForm};

/// A quadratic space: a subspace together with a quadratic form written in
/// the local coordinates of its RREF basis (the values at the pivot columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symp {
    span: Subspace,
    form: QuadraticForm,
    packed: Option<Packed>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Packed {
    rows: Vec<u64>,
    form: BitForm,
}

impl Symp {
    pub fn new(span: Subspace, form: QuadraticForm) -> Result<Symp> {
        if form.n() != span.rank() {
            return Err(Error::DimensionMismatch(span.rank(), form.n()));
        }
        let packed = (form.field().q() == 2 && span.ambient_len() <= 64).then(|| {
            Packed { rows: gf2::from_subspace(&span), form: BitForm::new(form.n(), form.gram()) }
        });
        Ok(Symp { span, form, packed })
    }

    /// From a basis of the span and a form given in coordinates of that basis.
    pub fn from_basis(field: &Field, n: usize, basis: &[Vec<Elem>], form: &QuadraticForm) -> Result<Symp> {
        let span = Subspace::from_vectors(field, n, basis.iter().map(Vec::as_slice))?;
        let m = basis.len();
        if span.rank() != m || form.n() != m {
            return Err(Error::Precondition("symp basis is not independent".into()));
        }
        // rows of L express the given basis in RREF coordinates; RREF row i is
        // then sum_j (L^-1)_ij basis_j
        let l: Vec<Elem> = basis.iter().flat_map(|b| span.local_coords_unchecked(b)).collect();
        let linv = linproj::invert(field, m, &l).expect("change of basis is invertible");
        let local = form.pullback(linv.chunks(m));
        Symp::new(span, local.normalized())
    }

    /// The span of `points` with the unique quadratic form vanishing on them.
    pub fn fit<'a, I>(field: &Field, n: usize, points: I) -> Result<Symp>
    where
        I: IntoIterator<Item = &'a [Elem]> + Clone,
    {
        let span = Subspace::from_vectors(field, n, points.clone())?;
        let local: Vec<Vec<Elem>> = points.into_iter().map(|p| span.local_coords_unchecked(p)).collect();
        let form = fit_form(field, span.rank(), local.iter().map(Vec::as_slice))?;
        Symp::new(span, form)
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn projdim(&self) -> isize {
        self.span.projdim()
    }

    /// Value of the form at an ambient vector of the span.
    pub fn eval(&self, v: &[Elem]) -> Elem {
        self.form.eval(&self.span.local_coords_unchecked(v))
    }

    /// Tangent hyperplane T_x(xi) in ambient coordinates, as basis rows.
    pub fn tangent_rows(&self, field: &Field, x: &[Elem]) -> Result<Vec<Vec<Elem>>> {
        let c = self.span.local_coords(field, x).ok_or_else(|| Error::Precondition("point outside the symp".into()))?;
        if self.form.eval(&c) != 0 {
            return Err(Error::NotOnQuadric);
        }
        let fx = self.form.polar_functional(&c);
        let Some(j0) = fx.iter().position(|&a| a != 0) else {
            return Err(Error::SingularForm("polar functional vanishes at the point".into()));
        };
        let s = field.inv(fx[j0]).unwrap();
        // e_i - (fx_i / fx_j0) e_j0 for i != j0, mapped to the ambient space
        Ok((0..c.len())
            .filter(|&i| i != j0)
            .map(|i| {
                let mut v = self.span.row(i).to_vec();
                let coef = field.neg(field.mul(fx[i], s));
                linproj::axpy(field, coef, self.span.row(j0), &mut v);
                v
            })
            .collect())
    }

    /// Packed tangent rows for q = 2; `x` is given by its local coordinate word.
    pub(crate) fn tangent_rows_gf2(&self, local: u64) -> Option<Vec<u64>> {
        let p = self.packed.as_ref()?;
        let m = p.rows.len();
        let mut fx = 0u64;
        for i in 0..m {
            if local >> (m - 1 - i) & 1 == 1 {
                fx ^= p.form.polar[i];
            }
        }
        if fx == 0 {
            return None;
        }
        let j0 = fx.leading_zeros() as usize - (64 - m);
        Some(
            (0..m)
                .filter(|&i| i != j0)
                .map(|i| if fx >> (m - 1 - i) & 1 == 1 { p.rows[i] ^ p.rows[j0] } else { p.rows[i] })
                .collect(),
        )
    }

    pub(crate) fn packed_rows(&self) -> Option<&[u64]> {
        self.packed.as_ref().map(|p| p.rows.as_slice())
    }

    /// Visit every point of the span with its form value. The callback gets
    /// the normalized ambient coordinates and the point key.
    pub fn for_each_point_with_value<F: FnMut(&[Elem], PointKey, Elem)>(&self, field: &Field, mut f: F) {
        let n = self.span.ambient_len();
        if let Some(p) = &self.packed {
            let mut buf = vec![0; n];
            gf2::for_each_with_form(&p.rows, &p.form, |_, key, v| {
                for (i, slot) in buf.iter_mut().enumerate() {
                    *slot = (key >> (n - 1 - i) & 1) as Elem;
                }
                f(&buf, key, v);
            });
        } else {
            let q = field.q();
            self.span.for_each_point(field, |v| {
                let val = self.eval(v);
                f(v, pack(v, q), val)
            });
        }
    }

    /// Keys and form values only; skips building coordinate vectors for q = 2.
    pub fn for_each_key_with_value<F: FnMut(PointKey, Elem)>(&self, field: &Field, mut f: F) {
        if let Some(p) = &self.packed {
            gf2::for_each_with_form(&p.rows, &p.form, |_, key, v| f(key, v));
        } else {
            self.for_each_point_with_value(field, |_, k, v| f(k, v));
        }
    }
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<u64>,
    ids: Vec<u32>,
}

impl Csr {
    fn from_lists(lists: Vec<Vec<u32>>) -> Csr {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0u64);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut ids = Vec::with_capacity(total);
        for l in lists {
            ids.extend(l);
            offsets.push(ids.len() as u64);
        }
        Csr { offsets, ids }
    }

    /// Transpose of `self` into `m` rows.
    fn transpose(&self, m: usize) -> Csr {
        let mut counts = vec![0u64; m + 1];
        for &j in &self.ids {
            counts[j as usize + 1] += 1;
        }
        for i in 0..m {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut ids = vec![0u32; self.ids.len()];
        for row in 0..self.len() {
            for &j in self.get(row) {
                ids[fill[j as usize] as usize] = row as u32;
                fill[j as usize] += 1;
            }
        }
        Csr { offsets: counts, ids }
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.ids[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn total(&self) -> usize {
        self.ids.len()
    }
}

/// A point set X with symp family Xi and split type d.
#[derive(Debug)]
pub struct MMSet {
    family: String,
    field: Field,
    n: usize,
    d: usize,
    points: Vec<ProjPoint>,
    keys: Vec<PointKey>,
    index: FxHashMap<PointKey, u32>,
    bits: Option<Vec<u64>>,
    symps: Vec<Symp>,
    /// symp -> points of X in its span, sorted
    symp_points: Csr,
    /// point -> symps whose span contains it, sorted
    point_symps: Csr,
}

/// Largest coordinate count for which q = 2 membership uses a dense bitset.
const BITSET_MAX_N: usize = 27;

impl MMSet {
    /// Builds the lookup structures. Fails on malformed input (wrong lengths,
    /// unnormalised or repeated points); geometric invariants are left to the
    /// structure check so corrupted sets can still be inspected.
    pub fn new(family: impl Into<String>, field: Field, n: usize, d: usize, points: Vec<ProjPoint>, symps: Vec<Symp>) -> Result<MMSet> {
        let q = field.q();
        if n > linproj::max_keyable_dim(q) {
            return Err(Error::Unsupported(format!("{n} coordinates over GF({q}) do not fit a 64-bit key")));
        }
        let mut index = FxHashMap::default();
        index.reserve(points.len());
        let mut keys = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(Error::DimensionMismatch(n, p.len()));
            }
            if p.coords().iter().any(|&c| c as usize >= q) || p.coords().iter().find(|&&c| c != 0) != Some(&1) {
                return Err(Error::Format(format!("point {i} is not a normalised vector over GF({q})")));
            }
            let k = p.key(q);
            if index.insert(k, i as u32).is_some() {
                return Err(Error::Structure(format!("point {i} repeats an earlier point")));
            }
            keys.push(k);
        }
        for s in &symps {
            if s.span().ambient_len() != n {
                return Err(Error::DimensionMismatch(n, s.span().ambient_len()));
            }
        }
        let bits = (q == 2 && n <= BITSET_MAX_N).then(|| {
            let mut b = vec![0u64; ((1usize << n) + 63) / 64];
            for &k in &keys {
                b[(k >> 6) as usize] |= 1 << (k & 63);
            }
            b
        });
        let mut set = MMSet {
            family: family.into(),
            field,
            n,
            d,
            points,
            keys,
            index,
            bits,
            symps,
            symp_points: Csr::default(),
            point_symps: Csr::default(),
        };
        let lists: Vec<Vec<u32>> = set
            .symps
            .par_iter()
            .map(|s| {
                let mut l = Vec::new();
                s.for_each_key_with_value(&set.field, |k, _| {
                    if let Some(i) = set.index_of_key(k) {
                        l.push(i);
                    }
                });
                l.sort_unstable();
                l
            })
            .collect();
        set.symp_points = Csr::from_lists(lists);
        set.point_symps = set.symp_points.transpose(set.points.len());
        Ok(set)
    }

    pub fn family(&self) -> &str {
        &self.family
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    /// Coordinate count, N + 1.
    pub fn n(&self) -> usize {
        self.n
    }
    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.n - 1
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn point(&self, i: usize) -> &[Elem] {
        self.points[i].coords()
    }
    pub fn key(&self, i: usize) -> PointKey {
        self.keys[i]
    }
    pub fn keys(&self) -> &[PointKey] {
        &self.keys
    }
    pub fn symps(&self) -> &[Symp] {
        &self.symps
    }
    pub fn symp(&self, i: usize) -> &Symp {
        &self.symps[i]
    }
    pub fn symp_points(&self, s: usize) -> &[u32] {
        self.symp_points.get(s)
    }
    pub fn symps_through(&self, x: usize) -> &[u32] {
        self.point_symps.get(x)
    }
    pub fn incidence_total(&self) -> usize {
        self.symp_points.total()
    }

    /// A proper set has more than one symp.
    pub fn is_proper(&self) -> bool {
        self.symps.len() > 1
    }

    #[inline]
    pub fn contains_key(&self, k: PointKey) -> bool {
        match &self.bits {
            Some(b) => b[(k >> 6) as usize] >> (k & 63) & 1 == 1,
            None => self.index.contains_key(&k),
        }
    }

    #[inline]
    pub fn index_of_key(&self, k: PointKey) -> Option<u32> {
        if self.bits.is_some() && !self.contains_key(k) {
            return None;
        }
        self.index.get(&k).copied()
    }

    /// Membership of an arbitrary nonzero vector's projective point.
    pub fn contains_vec(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        normalize(&self.field, &mut w) && self.contains_key(pack(&w, self.field.q()))
    }

    pub fn index_of(&self, v: &[Elem]) -> Option<u32> {
        let mut w = v.to_vec();
        if !normalize(&self.field, &mut w) {
            return None;
        }
        self.index_of_key(pack(&w, self.field.q()))
    }

    /// The line through points `i` and `j` lies entirely in X.
    pub fn collinear(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        if self.field.q() == 2 {
            return self.contains_key(self.keys[i] ^ self.keys[j]);
        }
        let (x, y) = (self.point(i), self.point(j));
        let mut v = vec![0; self.n];
        self.field.nonzero().all(|t| {
            v.copy_from_slice(x);
            linproj::axpy(&self.field, t, y, &mut v);
            self.contains_vec(&v)
        })
    }

    /// Symps containing both points, by merging the sorted incidence lists.
    pub fn common_symps(&self, i: usize, j: usize) -> Vec<u32> {
        let (a, b) = (self.symps_through(i), self.symps_through(j));
        let (mut x, mut y) = (0, 0);
        let mut out = Vec::new();
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[x]);
                    x += 1;
                    y += 1;
                }
            }
        }
        out
    }

    /// Span of all points of X.
    pub fn span(&self) -> Subspace {
        if self.field.q() == 2 && self.n <= 64 {
            let mut e = gf2::BitEchelon::new();
            for &k in &self.keys {
                if e.rank() == self.n {
                    break;
                }
                e.insert(k);
            }
            return e.to_subspace(self.n);
        }
        let mut e = linproj::Echelon::new(self.n);
        for p in &self.points {
            if e.rank() == self.n {
                break;
            }
            e.insert(&self.field, p.coords());
        }
        e.into_subspace()
    }

    /// Copy with the given symps removed (by index); used for corrupted inputs.
    pub fn without_symps(&self, drop: &[usize]) -> Result<MMSet> {
        let symps = self.symps.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, s)| s.clone()).collect();
        MMSet::new(self.family.clone(), self.field, self.n, self.d, self.points.clone(), symps)
    }

    pub fn without_points(&self, drop: &[usize]) -> Result<MMSet> {
        let points = self.points.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, p)| p.clone()).collect();
        MMSet::new(self.family.clone(), self.field, self.n, self.d, points, self.symps.clone())
    }

    pub fn with_extra_symp(&self, s: Symp) -> Result<MMSet> {
        let mut symps = self.symps.clone();
        symps.push(s);
        MMSet::new(self.family.clone(), self.field, self.n, self.d, self.points.clone(), symps)
    }

    /// Parts needed to rebuild an equal set.
    pub fn into_parts(self) -> (String, Field, usize, usize, Vec<ProjPoint>, Vec<Symp>) {
        (self.family, self.field, self.n, self.d, self.points, self.symps)
    }
}
