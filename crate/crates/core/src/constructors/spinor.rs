//! Pure spinors and the half-spin variety D5,5.
//!
//! The parent space is GF(q)^10 with Q(x) = sum x_i x_{5+i}. Coordinates 0..5
//! span U0 and 5..10 span U_inf. A spinor is a vector indexed by the subsets
//! of {0,..,4} (bitmasks, numeric order), and u = (a, b) acts by contraction
//! with a plus wedge with b. Under this action the empty subset is the pure
//! spinor of U0, so the half-spin variety uses the class of U0 and the even
//! subsets.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};
use crate::linproj::{nullspace, normalize, PointKey, ProjPoint, Subspace};
use crate::mmset::{MMSet, Symp};
use crate::quadform::QuadraticForm;

use super::assemble;

const RANK: usize = 5;
const SPINOR_LEN: usize = 1 << RANK;

#[derive(Clone, Debug)]
pub struct SpinorSpace {
    field: Field,
    form: QuadraticForm,
    u0: Subspace,
    uinf: Subspace,
}

impl SpinorSpace {
    pub fn new(field: &Field) -> SpinorSpace {
        let terms: Vec<(usize, usize, Elem)> = (0..RANK).map(|i| (i, RANK + i, 1)).collect();
        let form = QuadraticForm::from_terms(*field, 2 * RANK, &terms);
        let unit = |i: usize| {
            let mut v = vec![0; 2 * RANK];
            v[i] = 1;
            v
        };
        let u0 = Subspace::from_vectors(field, 2 * RANK, (0..RANK).map(unit).collect::<Vec<_>>().iter().map(Vec::as_slice)).unwrap();
        let uinf = Subspace::from_vectors(field, 2 * RANK, (RANK..2 * RANK).map(unit).collect::<Vec<_>>().iter().map(Vec::as_slice)).unwrap();
        SpinorSpace { field: *field, form, u0, uinf }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn u0(&self) -> &Subspace {
        &self.u0
    }

    pub fn uinf(&self) -> &Subspace {
        &self.uinf
    }

    /// Dimension of each half-spinor space.
    pub fn half_dim(&self) -> usize {
        SPINOR_LEN / 2
    }

    /// Matrix of the action of u on the full spinor space; entry (t, s) is
    /// the coefficient of subset t in the image of subset s.
    pub fn action(&self, u: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut m = vec![0; SPINOR_LEN * SPINOR_LEN];
        for s in 0..SPINOR_LEN {
            for j in 0..RANK {
                let below = (s & ((1 << j) - 1)).count_ones();
                let sign = |c: Elem| if below % 2 == 1 { f.neg(c) } else { c };
                let (t, c) = if s >> j & 1 == 1 { (s & !(1 << j), u[j]) } else { (s | 1 << j, u[RANK + j]) };
                m[t * SPINOR_LEN + s] = f.add(m[t * SPINOR_LEN + s], sign(c));
            }
        }
        m
    }

    /// Maximal singular subspaces in the class of U0, sorted.
    pub fn generators(&self) -> Vec<Subspace> {
        let f = &self.field;
        let pairs: Vec<(usize, usize)> = (0..RANK).flat_map(|i| (i + 1..RANK).map(move |k| (i, k))).collect();
        let q = f.q();
        let total = q.pow(pairs.len() as u32);
        let mut out: Vec<Subspace> = (0u32..1 << RANK)
            .filter(|j| j.count_ones() % 2 == 0)
            .flat_map(|j| (0..total).map(move |a| (j, a)))
            .par_bridge()
            .map(|(j, mut code)| {
                // alternating matrix from the digits of `code`
                let mut alt = vec![0; RANK * RANK];
                for &(i, k) in &pairs {
                    let c = (code % q) as Elem;
                    code /= q;
                    alt[i * RANK + k] = c;
                    alt[k * RANK + i] = f.neg(c);
                }
                // own_i is e_i, or f_i when i is in J; dual_k is the partner coordinate
                let own = |i: usize| if j >> i & 1 == 1 { RANK + i } else { i };
                let dual = |k: usize| if j >> k & 1 == 1 { k } else { RANK + k };
                let rows: Vec<Vec<Elem>> = (0..RANK)
                    .map(|i| {
                        let mut v = vec![0; 2 * RANK];
                        v[own(i)] = 1;
                        for k in 0..RANK {
                            v[dual(k)] = f.add(v[dual(k)], alt[i * RANK + k]);
                        }
                        v
                    })
                    .collect();
                Subspace::from_vectors(f, 2 * RANK, rows.iter().map(Vec::as_slice)).unwrap()
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The pure spinor of a maximal singular subspace U: the common kernel of the
/// actions of U, restricted to the even coordinates.
pub fn pure_spinor(space: &SpinorSpace, u: &Subspace) -> Result<ProjPoint> {
    let f = space.field();
    let mut system = Vec::with_capacity(u.rank() * SPINOR_LEN * SPINOR_LEN);
    for r in u.rows() {
        system.extend(space.action(r));
    }
    let kernel = nullspace(f, SPINOR_LEN, &system);
    if kernel.len() != 1 {
        return Err(Error::KernelDimension { expected: 1, found: kernel.len(), context: "pure spinor".into() });
    }
    let s = &kernel[0];
    if (0..SPINOR_LEN).any(|t| t.count_ones() % 2 == 1 && s[t] != 0) {
        return Err(Error::Precondition("subspace is not in the class of U0".into()));
    }
    let mut even: Vec<Elem> = (0..SPINOR_LEN).filter(|t| t.count_ones() % 2 == 0).map(|t| s[t]).collect();
    normalize(f, &mut even);
    Ok(ProjPoint::from_normalized(even))
}

/// The half-spin variety D5,5 in P^15 with one symp per point of the parent quadric.
pub fn half_spin(field: &Field) -> Result<MMSet> {
    if !matches!(field.q(), 2 | 3) {
        return Err(Error::Precondition(format!("half-spin construction needs q in {{2, 3}}, got {}", field.q())));
    }
    let space = SpinorSpace::new(field);
    let gens = space.generators();
    let points: Vec<ProjPoint> = gens.par_iter().map(|u| pure_spinor(&space, u)).collect::<Result<_>>()?;
    // generators through each parent point
    let mut through: FxHashMap<PointKey, Vec<u32>> = FxHashMap::default();
    for (i, u) in gens.iter().enumerate() {
        for k in u.point_keys(field) {
            through.entry(k).or_default().push(i as u32);
        }
    }
    let mut parent: Vec<(PointKey, Vec<u32>)> = through.into_iter().collect();
    parent.sort_unstable_by_key(|e| e.0);
    let n = space.half_dim();
    let symps: Vec<Symp> = parent
        .par_iter()
        .map(|(_, ids)| Symp::fit(field, n, ids.iter().map(|&i| points[i as usize].coords())))
        .collect::<Result<_>>()?;
    assemble("half-spin D5,5".into(), *field, n, 6, points, symps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::{max_singular_subspaces, Quadric};

    #[test]
    fn special_spinors() {
        let f = Field::new(3, 1).unwrap();
        let space = SpinorSpace::new(&f);
        let s = pure_spinor(&space, space.u0()).unwrap();
        let mut want = vec![0; 16];
        want[0] = 1;
        assert_eq!(s.coords(), &want[..]);
        // U_inf lies in the other class: its spinor is the odd top subset
        assert!(pure_spinor(&space, space.uinf()).is_err());
        let partial = Subspace::from_vectors(&f, 10, [space.u0().row(0)]).unwrap();
        assert!(matches!(pure_spinor(&space, &partial), Err(Error::KernelDimension { .. })));
    }

    #[test]
    fn action_squares_to_the_form() {
        let f = Field::new(3, 1).unwrap();
        let space = SpinorSpace::new(&f);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let u = crate::linproj::random_vector(&f, 10, &mut rng);
            let m = space.action(&u);
            let qu = space.form().eval(&u);
            for t in 0..SPINOR_LEN {
                for s in 0..SPINOR_LEN {
                    let sq = (0..SPINOR_LEN).fold(0, |acc, k| f.mul_add(m[t * SPINOR_LEN + k], m[k * SPINOR_LEN + s], acc));
                    assert_eq!(sq, if t == s { qu } else { 0 });
                }
            }
        }
    }

    #[test]
    fn generators_are_one_class_of_the_parent_quadric() {
        let f = Field::new(2, 1).unwrap();
        let space = SpinorSpace::new(&f);
        let gens = space.generators();
        assert_eq!(gens.len(), 2295);
        let all = max_singular_subspaces(&Quadric::new(space.form().clone()).unwrap()).unwrap();
        assert_eq!(all.subspaces.len(), 4590);
        let u0_class = all.class_of(all.subspaces.iter().position(|s| s == space.u0()).unwrap());
        let mut same: Vec<Subspace> =
            all.subspaces.iter().enumerate().filter(|(i, _)| all.class_of(*i) == u0_class).map(|(_, s)| s.clone()).collect();
        same.sort_unstable();
        assert_eq!(same, gens);
    }

    #[test]
    fn half_spin_gf2() {
        let f = Field::new(2, 1).unwrap();
        let x = half_spin(&f).unwrap();
        assert_eq!((x.len(), x.ambient_dim(), x.symps().len()), (2295, 15, 527));
        assert!((0..x.symps().len()).all(|s| x.symp_points(s).len() == 135));
        assert!(half_spin(&Field::new(5, 1).unwrap()).is_err());
    }
}
