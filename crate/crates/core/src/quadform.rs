//! Quadratic forms over GF(q) in every characteristic, split quadrics and
//! their singular subspaces.
//!
//! Forms are kept as upper-triangular coefficient matrices,
//! `Q(x) = sum_{i<=j} g[i][j] x_i x_j`, because in characteristic 2 the form
//! cannot be recovered from its polarisation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitEchelon;
use crate::gfq::{Elem, Field};
use crate::linproj::{self, axpy, nullspace, Echelon, PointKey, ProjPoint, Subspace};
use crate::report::{CheckRecord, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    field: Field,
    n: usize,
    gram: Vec<Elem>,
}

impl QuadraticForm {
    /// `gram` is row-major `n x n`; entries below the diagonal must be zero.
    pub fn new(field: Field, n: usize, gram: Vec<Elem>) -> Result<QuadraticForm> {
        if gram.len() != n * n {
            return Err(Error::DimensionMismatch(n * n, gram.len()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i * n + j] != 0 {
                    return Err(Error::Precondition("Gram matrix must be upper triangular".into()));
                }
            }
        }
        Ok(QuadraticForm { field, n, gram })
    }

    /// Build from `(i, j, coefficient)` terms; `(j, i)` is folded onto `(i, j)`.
    pub fn from_terms(field: Field, n: usize, terms: &[(usize, usize, Elem)]) -> QuadraticForm {
        let mut gram = vec![0; n * n];
        for &(i, j, c) in terms {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            gram[a * n + b] = field.add(gram[a * n + b], c);
        }
        QuadraticForm { field, n, gram }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Vector dimension of the space the form lives on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Projective dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.n - 1
    }

    pub fn gram(&self) -> &[Elem] {
        &self.gram
    }

    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        self.gram[i * self.n + j]
    }

    pub fn eval(&self, x: &[Elem]) -> Elem {
        let f = &self.field;
        let mut acc = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let row = &self.gram[i * self.n..(i + 1) * self.n];
            let mut s = 0;
            for j in i..self.n {
                s = f.mul_add(row[j], x[j], s);
            }
            acc = f.mul_add(x[i], s, acc);
        }
        acc
    }

    /// Symmetric matrix of the polar form f(x,y) = Q(x+y) - Q(x) - Q(y).
    pub fn polar_matrix(&self) -> Vec<Elem> {
        let f = &self.field;
        let n = self.n;
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let g = self.gram[i * n + j];
                if i == j {
                    b[i * n + i] = f.add(g, g);
                } else {
                    b[i * n + j] = g;
                    b[j * n + i] = g;
                }
            }
        }
        b
    }

    pub fn polar(&self, x: &[Elem], y: &[Elem]) -> Elem {
        linproj::dot(&self.field, &self.polar_functional(x), y)
    }

    /// The linear functional y -> f(x, y), as a coefficient vector.
    pub fn polar_functional(&self, x: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let n = self.n;
        let mut out = vec![0; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                let g = if i == j {
                    f.add(self.gram[i * n + i], self.gram[i * n + i])
                } else if i < j {
                    self.gram[i * n + j]
                } else {
                    self.gram[j * n + i]
                };
                out[j] = f.mul_add(x[i], g, out[j]);
            }
        }
        out
    }

    /// Radical of the polar form.
    pub fn radical(&self) -> Subspace {
        let basis = nullspace(&self.field, self.n, &self.polar_matrix());
        Subspace::from_vectors(&self.field, self.n, basis.iter().map(Vec::as_slice)).unwrap()
    }

    /// Odd characteristic: zero radical. Characteristic 2: no singular point in
    /// the radical, and zero radical in even vector dimension.
    pub fn is_nonsingular(&self) -> bool {
        let rad = self.radical();
        if rad.is_empty() {
            return true;
        }
        if self.field.p() != 2 || self.n % 2 == 0 {
            return false;
        }
        let mut ok = true;
        rad.for_each_point(&self.field, |v| ok &= self.eval(v) != 0);
        ok
    }

    /// The form `c -> Q(sum_i c_i rows[i])`.
    pub fn pullback<'a, I>(&self, rows: I) -> QuadraticForm
    where
        I: IntoIterator<Item = &'a [Elem]>,
    {
        let rows: Vec<&[Elem]> = rows.into_iter().collect();
        let m = rows.len();
        let f = &self.field;
        let mut gram = vec![0; m * m];
        for i in 0..m {
            gram[i * m + i] = self.eval(rows[i]);
            let fi = self.polar_functional(rows[i]);
            for j in i + 1..m {
                gram[i * m + j] = linproj::dot(f, &fi, rows[j]);
            }
        }
        QuadraticForm { field: self.field, n: m, gram }
    }

    /// Restriction to a subspace, in coordinates relative to its RREF basis.
    pub fn restrict(&self, s: &Subspace) -> QuadraticForm {
        self.pullback(s.rows())
    }

    /// Scale so the first nonzero coefficient is 1 (same zero set).
    pub fn normalized(mut self) -> QuadraticForm {
        linproj::normalize(&self.field, &mut self.gram);
        self
    }

    pub fn singular_points(&self) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        Subspace::full(self.n).for_each_point(&self.field, |v| {
            if self.eval(v) == 0 {
                out.push(ProjPoint::from_normalized(v.to_vec()));
            }
        });
        out
    }

    fn find_singular(&self) -> Option<Vec<Elem>> {
        let mut found = None;
        // points are visited in a fixed order; stop work after the first hit
        Subspace::full(self.n).for_each_point(&self.field, |v| {
            if found.is_none() && self.eval(v) == 0 {
                found = Some(v.to_vec());
            }
        });
        found
    }
}

/// Standard split form in P^(d+1): parabolic `x0^2 + x1 x2 + ... + x_d x_{d+1}`
/// for odd d, hyperbolic `x0 x1 + ... + x_d x_{d+1}` for even d.
pub fn split_form(d: usize, field: &Field) -> Result<QuadraticForm> {
    if d < 1 {
        return Err(Error::Precondition("split type d must be at least 1".into()));
    }
    let n = d + 2;
    let mut terms = Vec::new();
    let start = if d % 2 == 1 {
        terms.push((0, 0, 1));
        1
    } else {
        0
    };
    for i in (start..n).step_by(2) {
        terms.push((i, i + 1, 1));
    }
    Ok(QuadraticForm::from_terms(*field, n, &terms))
}

/// Number of hyperbolic pairs in a Witt decomposition, found by splitting off
/// hyperbolic planes one at a time.
pub fn witt_index(form: &QuadraticForm) -> Result<usize> {
    if !form.is_nonsingular() {
        return Err(Error::SingularForm("Witt index needs a nonsingular form".into()));
    }
    let field = *form.field();
    let mut current = form.clone();
    let mut index = 0;
    while current.n() >= 2 {
        let Some(x) = current.find_singular() else { break };
        let fx = current.polar_functional(&x);
        let Some(j) = fx.iter().position(|&c| c != 0) else {
            return Err(Error::SingularForm("singular vector in the radical".into()));
        };
        // y with f(x, y) = 1, then y -> y - Q(y) x makes it singular
        let mut y = vec![0; current.n()];
        y[j] = field.inv(fx[j]).unwrap();
        let qy = current.eval(&y);
        axpy(&field, field.neg(qy), &x, &mut y);
        debug_assert_eq!(current.eval(&y), 0);
        let fy = current.polar_functional(&y);
        let mut m = fx.clone();
        m.extend_from_slice(&fy);
        let complement = nullspace(&field, current.n(), &m);
        current = current.pullback(complement.iter().map(Vec::as_slice));
        index += 1;
    }
    Ok(index)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricKind {
    Hyperbolic,
    Parabolic,
    Other,
}

/// Point count of the hyperbolic quadric in P^(2m-1)(GF(q)).
pub fn hyperbolic_point_count(m: u32, q: u64) -> u64 {
    (q.pow(m - 1) + 1) * (q.pow(m) - 1) / (q - 1)
}

/// Point count of the parabolic quadric in P^(2m)(GF(q)).
pub fn parabolic_point_count(m: u32, q: u64) -> u64 {
    (q.pow(2 * m) - 1) / (q - 1)
}

/// Expected point count of a split quadric in P^(d+1).
pub fn split_point_count(d: usize, q: usize) -> u64 {
    let q = q as u64;
    if d % 2 == 0 {
        hyperbolic_point_count((d as u32 + 2) / 2, q)
    } else {
        parabolic_point_count((d as u32 + 1) / 2, q)
    }
}

/// A nonsingular quadric with its full point set.
#[derive(Clone, Debug)]
pub struct Quadric {
    form: QuadraticForm,
    points: Vec<ProjPoint>,
    keys: FxHashSet<PointKey>,
    witt_index: usize,
    kind: QuadricKind,
}

impl Quadric {
    pub fn new(form: QuadraticForm) -> Result<Quadric> {
        let witt = witt_index(&form)?;
        let n = form.n();
        let kind = if n % 2 == 0 && witt == n / 2 {
            QuadricKind::Hyperbolic
        } else if n % 2 == 1 && witt == (n - 1) / 2 {
            QuadricKind::Parabolic
        } else {
            QuadricKind::Other
        };
        let points = form.singular_points();
        let q = form.field().q();
        let keys = points.iter().map(|p| p.key(q)).collect();
        Ok(Quadric { form, points, keys, witt_index: witt, kind })
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }
    pub fn field(&self) -> &Field {
        self.form.field()
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    pub fn witt_index(&self) -> usize {
        self.witt_index
    }
    pub fn kind(&self) -> QuadricKind {
        self.kind
    }
    pub fn is_split(&self) -> bool {
        self.kind != QuadricKind::Other
    }
    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.keys.contains(&p.key(self.field().q()))
    }

    /// Two singular points are collinear on the quadric iff they are orthogonal.
    pub fn collinear(&self, x: &[Elem], y: &[Elem]) -> bool {
        self.form.polar(x, y) == 0
    }

    pub fn tangent_space(&self, x: &ProjPoint) -> Result<Subspace> {
        tangent_space(&self.form, x.coords())
    }

    /// All singular subspaces, level by level: index k holds the singular
    /// subspaces of projective dimension k.
    pub fn singular_subspaces(&self) -> Vec<Vec<Subspace>> {
        let field = self.field();
        let n = self.n();
        let mut levels: Vec<Vec<Subspace>> = vec![self
            .points
            .iter()
            .map(|p| Subspace::from_vectors(field, n, [p.coords()]).unwrap())
            .collect()];
        loop {
            let mut next: FxHashSet<Subspace> = FxHashSet::default();
            for s in levels.last().unwrap() {
                // singular points of the perp outside s
                let mut m = Vec::with_capacity(s.rank() * n);
                for r in s.rows() {
                    m.extend(self.form.polar_functional(r));
                }
                let perp = nullspace(field, n, &m);
                let perp = Subspace::from_vectors(field, n, perp.iter().map(Vec::as_slice)).unwrap();
                perp.for_each_point(field, |v| {
                    if self.form.eval(v) == 0 && !s.contains_vec(field, v) {
                        next.insert(s.join_vec(field, v).unwrap());
                    }
                });
            }
            if next.is_empty() {
                break;
            }
            let mut lvl: Vec<Subspace> = next.into_iter().collect();
            lvl.sort_unstable();
            levels.push(lvl);
        }
        levels
    }
}

/// Tangent hyperplane {y : f(x, y) = 0} of the form's quadric at `x`.
pub fn tangent_space(form: &QuadraticForm, x: &[Elem]) -> Result<Subspace> {
    if form.eval(x) != 0 {
        return Err(Error::NotOnQuadric);
    }
    let fx = form.polar_functional(x);
    if fx.iter().all(|&c| c == 0) {
        return Err(Error::SingularForm("polar functional vanishes at the point".into()));
    }
    let basis = nullspace(form.field(), form.n(), &fx);
    Subspace::from_vectors(form.field(), form.n(), basis.iter().map(Vec::as_slice))
}

/// Maximal singular subspaces, with the hyperbolic class partition.
#[derive(Clone, Debug)]
pub struct MaxSingular {
    pub subspaces: Vec<Subspace>,
    /// For hyperbolic quadrics: `false` for the class of the lexicographically
    /// least member ("+"), `true` for the other.
    pub odd_class: Option<Vec<bool>>,
}

impl MaxSingular {
    pub fn class_of(&self, i: usize) -> Option<bool> {
        self.odd_class.as_ref().map(|c| c[i])
    }
}

pub fn max_singular_subspaces(quadric: &Quadric) -> Result<MaxSingular> {
    if !quadric.is_split() {
        return Err(Error::Precondition("quadric is not split".into()));
    }
    let mut levels = quadric.singular_subspaces();
    let subspaces = levels.pop().unwrap_or_default();
    let odd_class = (quadric.kind() == QuadricKind::Hyperbolic).then(|| {
        let field = quadric.field();
        let anchor = subspaces.iter().min().unwrap().clone();
        subspaces
            .iter()
            .map(|m| (m.rank() - m.intersect(field, &anchor).unwrap().rank()) % 2 == 1)
            .collect()
    });
    Ok(MaxSingular { subspaces, odd_class })
}

/// The unique (up to scalar) quadratic form on GF(q)^n vanishing at the given
/// points, normalised to leading coefficient 1.
pub fn fit_form<'a, I>(field: &Field, n: usize, points: I) -> Result<QuadraticForm>
where
    I: IntoIterator<Item = &'a [Elem]>,
{
    let monomials: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let m = monomials.len();
    let pts: Vec<&[Elem]> = points.into_iter().collect();
    if field.q() == 2 && m <= 64 {
        return fit_form_gf2(field, n, &monomials, &pts);
    }
    let mut eqs = Echelon::new(m);
    let mut row = vec![0 as Elem; m];
    for v in &pts {
        for (slot, &(i, j)) in row.iter_mut().zip(&monomials) {
            *slot = field.mul(v[i], v[j]);
        }
        eqs.insert(field, &row);
        if eqs.rank() + 1 == m {
            break;
        }
    }
    if eqs.rank() + 1 != m {
        return Err(Error::KernelDimension {
            expected: 1,
            found: m - eqs.rank(),
            context: "quadratic forms through the given points".into(),
        });
    }
    let ker = eqs.into_subspace().annihilator(field);
    let coeffs = ker.row(0);
    let mut gram = vec![0; n * n];
    for (&(i, j), &c) in monomials.iter().zip(coeffs) {
        gram[i * n + j] = c;
    }
    finish_fit(QuadraticForm { field: *field, n, gram }, &pts)
}

fn fit_form_gf2(field: &Field, n: usize, monomials: &[(usize, usize)], pts: &[&[Elem]]) -> Result<QuadraticForm> {
    let m = monomials.len();
    let mut eqs = BitEchelon::new();
    for v in pts {
        let mut row = 0u64;
        for &(i, j) in monomials {
            row = (row << 1) | (v[i] & v[j] & 1) as u64;
        }
        eqs.insert(row);
        if eqs.rank() + 1 == m {
            break;
        }
    }
    if eqs.rank() + 1 != m {
        return Err(Error::KernelDimension {
            expected: 1,
            found: m - eqs.rank(),
            context: "quadratic forms through the given points".into(),
        });
    }
    let y = eqs.nullspace(m)[0];
    let mut gram = vec![0; n * n];
    for (k, &(i, j)) in monomials.iter().enumerate() {
        gram[i * n + j] = (y >> (m - 1 - k) & 1) as Elem;
    }
    finish_fit(QuadraticForm { field: *field, n, gram }, pts)
}

fn finish_fit(form: QuadraticForm, pts: &[&[Elem]]) -> Result<QuadraticForm> {
    let form = form.normalized();
    if let Some(bad) = pts.iter().find(|v| form.eval(v) != 0) {
        return Err(Error::Structure(format!("no quadratic form vanishes on all points (fails at {bad:?})")));
    }
    Ok(form)
}

/// Options for the exhaustive-or-sampled quadric lemma checks.
#[derive(Clone, Copy, Debug)]
pub struct LemmaOptions {
    /// Exhaustive when the ambient projective dimension is at most this.
    pub exhaustive_max_dim: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for LemmaOptions {
    fn default() -> LemmaOptions {
        LemmaOptions { exhaustive_max_dim: 5, samples: 10_000, seed: 7 }
    }
}

fn basis_of(s: &Subspace) -> Vec<Vec<Elem>> {
    s.rows().map(<[Elem]>::to_vec).collect()
}

/// Subspaces of vector dimension `k` to test: all of them, or a seeded sample.
fn test_subspaces(field: &Field, n: usize, k: usize, opts: &LemmaOptions, salt: u64) -> (Vec<Subspace>, bool) {
    if n - 1 <= opts.exhaustive_max_dim {
        (linproj::all_subspaces(field, n, k), true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ salt);
        ((0..opts.samples).map(|_| linproj::random_subspace(field, n, k, &mut rng)).collect(), false)
    }
}

fn finish_sampled(mut rec: CheckRecord, exhaustive: bool, opts: &LemmaOptions) -> CheckRecord {
    if !exhaustive {
        rec = rec.sampled(opts.seed, opts.samples);
    }
    rec.finish()
}

/// Runs the three quadric lemmas: every (m+1)-space of P^(2m+1) or P^(2m)
/// holds two non-collinear quadric points; for parabolic quadrics, through
/// every generator passes exactly one space of the next dimension meeting the
/// quadric in nothing more; every subspace of codimension 2 misses some line
/// of the quadric.
pub fn check_quadric_lemmas(quadric: &Quadric, opts: &LemmaOptions) -> Vec<CheckRecord> {
    let field = quadric.field();
    let n = quadric.n();
    let form = quadric.form();
    let mut out = Vec::new();
    // projective dimension n+1 in P^(2n+1) and in P^(2n) alike
    let test_rank = (n - 1) / 2 + 2;

    // (a) non-collinear pair in every such space
    let mut rec = CheckRecord::new("lemma-quadric");
    let (tests, exhaustive) = test_subspaces(field, n, test_rank, opts, 1);
    for u in &tests {
        let pts: Vec<Vec<Elem>> = {
            let mut v = Vec::new();
            u.for_each_point(field, |c| {
                if form.eval(c) == 0 {
                    v.push(c.to_vec())
                }
            });
            v
        };
        let found = pts.iter().enumerate().any(|(i, x)| pts[i + 1..].iter().any(|y| form.polar(x, y) != 0));
        rec.checked += 1;
        if !found {
            rec.violation(Witness::QuadricLemma { lemma: "quadric".into(), subspace: basis_of(u) });
        }
    }
    out.push(finish_sampled(rec, exhaustive, opts));

    // (b) parabolic: exactly one space of the next dimension through each generator meeting P only there
    if quadric.kind() == QuadricKind::Parabolic {
        let mut rec = CheckRecord::new("lemma-paraquad");
        let gens = max_singular_subspaces(quadric).map(|m| m.subspaces).unwrap_or_default();
        for w in &gens {
            let complement_cols: Vec<usize> = (0..n).filter(|c| !w.pivots().contains(c)).collect();
            let comp = Subspace::from_vectors(
                field,
                n,
                complement_cols.iter().map(|&c| {
                    let mut e = vec![0; n];
                    e[c] = 1;
                    e
                }).collect::<Vec<_>>().iter().map(Vec::as_slice),
            )
            .unwrap();
            let w_points = w.point_count(field.q());
            let mut tangent_like = 0u64;
            comp.for_each_point(field, |c| {
                let u = w.join_vec(field, c).unwrap();
                let mut on = 0u64;
                u.for_each_point(field, |v| on += (form.eval(v) == 0) as u64);
                tangent_like += (on == w_points) as u64;
            });
            rec.checked += 1;
            rec.count("spaces-meeting-only-generator", tangent_like);
            if tangent_like != 1 {
                rec.violation(Witness::QuadricLemma { lemma: "paraquad".into(), subspace: basis_of(w) });
            }
        }
        out.push(rec.finish());
    }

    // (c) every (n-2)-dimensional projective subspace misses a quadric line
    if n >= 4 {
        let mut rec = CheckRecord::new("lemma-n-2");
        let levels = quadric.singular_subspaces();
        let lines: &[Subspace] = levels.get(1).map(Vec::as_slice).unwrap_or(&[]);
        let (tests, exhaustive) = test_subspaces(field, n, n - 2, opts, 2);
        for s in &tests {
            rec.checked += 1;
            let missed = lines.iter().any(|l| s.join(field, l).unwrap().rank() == n);
            if !missed {
                rec.violation(Witness::QuadricLemma { lemma: "n-2".into(), subspace: basis_of(s) });
            }
        }
        out.push(finish_sampled(rec, exhaustive, opts));
    }
    out
}

/// Map from point key to position, for point sets of quadrics and varieties.
pub fn key_index(points: &[ProjPoint], q: usize) -> FxHashMap<PointKey, u32> {
    points.iter().enumerate().map(|(i, p)| (p.key(q), i as u32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::new(p, 1).unwrap()
    }

    #[test]
    fn split_forms_small_counts() {
        let conic = Quadric::new(split_form(1, &gf(2)).unwrap()).unwrap();
        assert_eq!(conic.points().len(), 3);
        assert_eq!(conic.kind(), QuadricKind::Parabolic);
        let hyp = Quadric::new(split_form(2, &gf(2)).unwrap()).unwrap();
        assert_eq!(hyp.points().len(), 9);
        assert_eq!(hyp.witt_index(), 2);
        assert_eq!(hyp.kind(), QuadricKind::Hyperbolic);
        assert_eq!(witt_index(&split_form(8, &gf(2)).unwrap()).unwrap(), 5);
        assert!(split_form(0, &gf(2)).is_err());
    }

    #[test]
    fn witt_index_of_split_forms() {
        for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1)] {
            let f = Field::new(p, k).unwrap();
            for d in 1..=8 {
                if f.q() > 3 && d > 4 {
                    continue;
                }
                let form = split_form(d, &f).unwrap();
                assert!(form.is_nonsingular(), "{f} d={d}");
                assert_eq!(witt_index(&form).unwrap(), (d + 2) / 2, "{f} d={d}");
            }
        }
    }

    #[test]
    fn witt_index_examples() {
        let f = gf(2);
        assert_eq!(witt_index(&split_form(4, &f).unwrap()).unwrap(), 3);
        let aniso = QuadraticForm::from_terms(gf(3), 2, &[(0, 0, 1), (1, 1, 1)]);
        assert_eq!(witt_index(&aniso).unwrap(), 0);
        assert_eq!(witt_index(&split_form(1, &gf(3)).unwrap()).unwrap(), 1);
        let degenerate = QuadraticForm::from_terms(gf(3), 3, &[(0, 1, 1)]);
        assert!(witt_index(&degenerate).is_err());
    }

    #[test]
    fn point_count_formulas_match_enumeration() {
        for p in [2u32, 3] {
            let f = gf(p);
            for d in 1..=6 {
                if p == 3 && d > 5 {
                    continue;
                }
                let quad = Quadric::new(split_form(d, &f).unwrap()).unwrap();
                assert_eq!(quad.points().len() as u64, split_point_count(d, f.q()), "q={p} d={d}");
            }
        }
    }

    #[test]
    fn char2_nonsingularity_conventions() {
        let f = gf(2);
        // parabolic: radical is the nucleus, which is not singular
        let par = split_form(3, &f).unwrap();
        assert_eq!(par.radical().rank(), 1);
        assert!(par.is_nonsingular());
        // x0^2 alone on two coordinates: radical everything, singular
        let bad = QuadraticForm::from_terms(f, 2, &[(0, 0, 1)]);
        assert!(!bad.is_nonsingular());
    }

    #[test]
    fn tangent_line_of_conic_over_gf3() {
        let f = gf(3);
        let form = split_form(1, &f).unwrap();
        let t = tangent_space(&form, &[0, 1, 0]).unwrap();
        let expected = Subspace::from_vectors(&f, 3, [&[1u8, 0, 0][..], &[0, 1, 0]]).unwrap();
        assert_eq!(t, expected);
        assert!(matches!(tangent_space(&form, &[1, 0, 0]), Err(Error::NotOnQuadric)));
    }

    #[test]
    fn char2_conic_tangents_share_the_nucleus() {
        let f = gf(2);
        let conic = Quadric::new(split_form(1, &f).unwrap()).unwrap();
        let mut common = Subspace::full(3);
        for x in conic.points() {
            common = common.intersect(&f, &conic.tangent_space(x).unwrap()).unwrap();
        }
        assert_eq!(common.projdim(), 0);
        assert_eq!(common, conic.form().radical());
        assert_eq!(common.row(0), &[1, 0, 0]);
    }

    #[test]
    fn tangent_plane_of_hyperbolic_p3_meets_in_two_lines() {
        for p in [2u32, 3] {
            let f = gf(p);
            let quad = Quadric::new(split_form(2, &f).unwrap()).unwrap();
            for x in quad.points() {
                let t = quad.tangent_space(x).unwrap();
                let on: Vec<&ProjPoint> = quad.points().iter().filter(|y| t.contains_point(&f, y)).collect();
                assert_eq!(on.len(), 2 * f.q() + 1);
                // every point of the intersection is collinear with x on the quadric
                for y in &on {
                    assert!(quad.collinear(x.coords(), y.coords()));
                }
            }
        }
    }

    #[test]
    fn tangent_cone_exhaustive_up_to_p5() {
        for (p, d) in [(2u32, 1usize), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4)] {
            let f = gf(p);
            let quad = Quadric::new(split_form(d, &f).unwrap()).unwrap();
            for x in quad.points() {
                let t = quad.tangent_space(x).unwrap();
                for y in quad.points().iter().filter(|y| t.contains_point(&f, y)) {
                    // the whole line xy lies on the quadric
                    let line = Subspace::from_vectors(&f, quad.n(), [x.coords(), y.coords()]).unwrap();
                    for z in line.points(&f) {
                        assert!(quad.contains(&z));
                    }
                }
            }
        }
    }

    #[test]
    fn generator_counts() {
        let f = gf(2);
        let h3 = max_singular_subspaces(&Quadric::new(split_form(2, &f).unwrap()).unwrap()).unwrap();
        assert_eq!(h3.subspaces.len(), 6);
        assert_eq!(h3.odd_class.as_ref().unwrap().iter().filter(|&&c| c).count(), 3);
        let h7 = max_singular_subspaces(&Quadric::new(split_form(6, &f).unwrap()).unwrap()).unwrap();
        assert_eq!(h7.subspaces.len(), 270);
        assert_eq!(h7.odd_class.as_ref().unwrap().iter().filter(|&&c| c).count(), 135);
        assert!(h7.subspaces.iter().all(|s| s.projdim() == 3));
    }

    #[test]
    fn generator_classes_by_even_codimension_p7() {
        let f = gf(2);
        let h7 = max_singular_subspaces(&Quadric::new(split_form(6, &f).unwrap()).unwrap()).unwrap();
        let cls = h7.odd_class.as_ref().unwrap();
        for (i, a) in h7.subspaces.iter().enumerate() {
            for (j, b) in h7.subspaces.iter().enumerate() {
                let codim = a.rank() - a.intersect(&f, b).unwrap().rank();
                assert_eq!(codim % 2 == 0, cls[i] == cls[j]);
            }
        }
    }

    #[test]
    fn parabolic_generators_have_no_classes() {
        let m = max_singular_subspaces(&Quadric::new(split_form(3, &gf(3)).unwrap()).unwrap()).unwrap();
        // Q(4,3): (q+1)(q^2+1) lines
        assert_eq!(m.subspaces.len(), 40);
        assert!(m.odd_class.is_none());
    }

    #[test]
    fn fit_recovers_split_forms() {
        for (p, d) in [(2u32, 2usize), (2, 4), (3, 2), (2, 6), (3, 3)] {
            let f = gf(p);
            let form = split_form(d, &f).unwrap().normalized();
            let pts = form.singular_points();
            let fitted = fit_form(&f, d + 2, pts.iter().map(ProjPoint::coords)).unwrap();
            assert_eq!(fitted, form);
        }
        // three points of a conic over GF(2) do not determine it
        let f = gf(2);
        let pts = split_form(1, &f).unwrap().singular_points();
        assert!(matches!(
            fit_form(&f, 3, pts.iter().map(ProjPoint::coords)),
            Err(Error::KernelDimension { .. })
        ));
    }

    #[test]
    fn pullback_matches_evaluation() {
        let f = gf(3);
        let form = split_form(3, &f).unwrap();
        let rows: Vec<Vec<Elem>> = vec![vec![1, 2, 0, 1, 1], vec![0, 1, 1, 2, 0], vec![2, 0, 1, 0, 1]];
        let pb = form.pullback(rows.iter().map(Vec::as_slice));
        for c in linproj::all_points(&f, 3) {
            let mut v = vec![0; 5];
            for (ci, r) in c.coords().iter().zip(&rows) {
                axpy(&f, *ci, r, &mut v);
            }
            assert_eq!(pb.eval(c.coords()), form.eval(&v));
        }
    }

    #[test]
    fn quadric_lemmas_hyperbolic_p3_gf2() {
        let quad = Quadric::new(split_form(2, &gf(2)).unwrap()).unwrap();
        let recs = check_quadric_lemmas(&quad, &LemmaOptions::default());
        let a = &recs[0];
        assert_eq!(a.name, "lemma-quadric");
        assert_eq!(a.checked, 15);
        assert!(a.passed() && a.exhaustive);
        assert!(recs.iter().all(CheckRecord::passed));
    }

    #[test]
    fn quadric_lemmas_parabolic_p4_gf2() {
        let quad = Quadric::new(split_form(3, &gf(2)).unwrap()).unwrap();
        let recs = check_quadric_lemmas(&quad, &LemmaOptions::default());
        let para = recs.iter().find(|r| r.name == "lemma-paraquad").unwrap();
        assert_eq!(para.checked, 15);
        assert_eq!(para.counts["spaces-meeting-only-generator"], 15);
        assert!(recs.iter().all(CheckRecord::passed), "{recs:#?}");
    }

    #[test]
    fn quadric_lemma_n_minus_2_sampled_p5_gf3() {
        let quad = Quadric::new(split_form(4, &gf(3)).unwrap()).unwrap();
        let opts = LemmaOptions { exhaustive_max_dim: 4, samples: 1000, seed: 11 };
        let recs = check_quadric_lemmas(&quad, &opts);
        let r = recs.iter().find(|r| r.name == "lemma-n-2").unwrap();
        assert_eq!(r.checked, 1000);
        assert!(!r.exhaustive && r.passed());
    }
}
