//! The E6,1 variety: triples x = [A, B, C] of 3x3 matrices on which the
//! derivative of d(x) = det A + det B + det C - Tr(ABC) vanishes identically.
//!
//! Coordinate 9s + 3r + c holds entry (r, c) of matrix s.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};
use crate::linproj::ProjPoint;
use crate::mmset::MMSet;
use crate::mmverify::{closure_family, symp_from_pair, Collinearity, Seeds};

pub const E6_LEN: usize = 27;

type Mat = [[Elem; 3]; 3];

fn mat(x: &[Elem], s: usize) -> Mat {
    let mut m = [[0; 3]; 3];
    for (r, row) in m.iter_mut().enumerate() {
        row.copy_from_slice(&x[9 * s + 3 * r..9 * s + 3 * r + 3]);
    }
    m
}

fn mat_mul(f: &Field, a: &Mat, b: &Mat) -> Mat {
    let mut m = [[0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m[r][c] = (0..3).fold(0, |acc, k| f.mul_add(a[r][k], b[k][c], acc));
        }
    }
    m
}

/// Classical adjugate: adj(M)[c][r] is the (r, c) cofactor.
fn adjugate(f: &Field, m: &Mat) -> Mat {
    let mut out = [[0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
            let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
            // cyclic minors already carry the cofactor sign
            out[c][r] = f.sub(f.mul(m[r1][c1], m[r2][c2]), f.mul(m[r1][c2], m[r2][c1]));
        }
    }
    out
}

fn det(f: &Field, m: &Mat) -> Elem {
    let adj = adjugate(f, m);
    (0..3).fold(0, |acc, k| f.mul_add(m[0][k], adj[k][0], acc))
}

fn trace(f: &Field, m: &Mat) -> Elem {
    f.add(f.add(m[0][0], m[1][1]), m[2][2])
}

/// d(x) for a 27-vector.
pub fn e6_cubic(field: &Field, x: &[Elem]) -> Elem {
    assert_eq!(x.len(), E6_LEN);
    let (a, b, c) = (mat(x, 0), mat(x, 1), mat(x, 2));
    let dets = field.add(field.add(det(field, &a), det(field, &b)), det(field, &c));
    field.sub(dets, trace(field, &mat_mul(field, &mat_mul(field, &a, &b), &c)))
}

/// Coefficients of the linear functional y -> [t] d(x + t y).
///
/// Differentiating entry (r, c) of A gives the cofactor adj(A)[c][r] from
/// det A and (BC)[c][r] from Tr(ABC) = Tr(A (BC)); B and C follow by the
/// cyclic symmetry of the trace.
pub fn e6_derivative(field: &Field, x: &[Elem]) -> Vec<Elem> {
    assert_eq!(x.len(), E6_LEN);
    let m = [mat(x, 0), mat(x, 1), mat(x, 2)];
    let mut out = vec![0; E6_LEN];
    for s in 0..3 {
        let adj = adjugate(field, &m[s]);
        let rest = mat_mul(field, &m[(s + 1) % 3], &m[(s + 2) % 3]);
        for r in 0..3 {
            for c in 0..3 {
                out[9 * s + 3 * r + c] = field.sub(adj[c][r], rest[c][r]);
            }
        }
    }
    out
}

// GF(2) 3x3 matrices as 9-bit masks, entry (r, c) at bit 8 - (3r + c), so
// (A << 18) | (B << 9) | C is the point key of [A, B, C].

fn to_mat(m: u16) -> Mat {
    let mut out = [[0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = (m >> (8 - (3 * r + c)) & 1) as Elem;
        }
    }
    out
}

fn to_mask(m: &Mat) -> u16 {
    (0..9).fold(0, |acc, i| acc << 1 | m[i / 3][i % 3] as u16)
}

struct Gf2Tables {
    adj: Vec<u16>,
    mul: Vec<u16>,
    /// `solve[b * 512 + p]`: every c with b c = p.
    solve: Vec<Vec<u16>>,
}

impl Gf2Tables {
    fn new(f: &Field) -> Gf2Tables {
        let adj: Vec<u16> = (0..512u16).map(|m| to_mask(&adjugate(f, &to_mat(m)))).collect();
        let mul: Vec<u16> = (0..512 * 512)
            .into_par_iter()
            .map(|i| to_mask(&mat_mul(f, &to_mat((i / 512) as u16), &to_mat((i % 512) as u16))))
            .collect();
        let mut solve = vec![Vec::new(); 512 * 512];
        for b in 0..512 {
            for c in 0..512u16 {
                solve[b * 512 + mul[b * 512 + c as usize] as usize].push(c);
            }
        }
        Gf2Tables { adj, mul, solve }
    }

    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * 512 + b as usize]
    }
}

/// Keys of all nonzero x over GF(2) with vanishing derivative, sorted.
///
/// The derivative vanishes iff adj A = BC, adj B = CA and adj C = AB, so for
/// each (A, B) only the solutions C of BC = adj A need testing.
pub fn e6_points_gf2() -> Vec<u64> {
    let f = Field::new(2, 1).unwrap();
    let t = Gf2Tables::new(&f);
    let mut keys: Vec<u64> = (0..512u16)
        .into_par_iter()
        .flat_map_iter(|a| {
            let t = &t;
            (0..512u16).flat_map(move |b| {
                t.solve[b as usize * 512 + t.adj[a as usize] as usize]
                    .iter()
                    .filter(move |&&c| t.mul(c, a) == t.adj[b as usize] && t.adj[c as usize] == t.mul(a, b))
                    .map(move |&c| (a as u64) << 18 | (b as u64) << 9 | c as u64)
            })
        })
        .filter(|&k| k != 0)
        .collect();
    keys.sort_unstable();
    keys
}

/// The E6,1 variety over GF(2) in P^26. Symps are recovered as pair closures;
/// every symp meets the symp H through the first point, so the points of H
/// suffice as closure seeds.
pub fn e6_variety(field: &Field) -> Result<MMSet> {
    if field.q() != 2 {
        return Err(Error::Unsupported("e6 supported only for q=2".into()));
    }
    let points: Vec<ProjPoint> =
        e6_points_gf2().into_iter().map(|k| ProjPoint::from_normalized(crate::gf2::unpack(k, E6_LEN))).collect();
    let bare = MMSet::new("e6 E6,1", *field, E6_LEN, 8, points, Vec::new())?;
    let graph = Collinearity::new(&bare, 0);
    let y = (1..bare.len()).find(|&y| !graph.collinear(0, y)).ok_or_else(|| Error::Structure("all points collinear".into()))?;
    let h = symp_from_pair(&graph, 0, y)?;
    let mut seeds = Vec::new();
    h.for_each_key_with_value(field, |k, v| {
        if v == 0 {
            seeds.push(bare.index_of_key(k).expect("symp zeros lie in X"));
        }
    });
    let symps = closure_family(&graph, &Seeds::Points(seeds))?;
    drop(graph);
    let (family, field, n, d, points, _) = bare.into_parts();
    super::assemble(family, field, n, d, points, symps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(s: usize, r: usize, c: usize) -> Vec<Elem> {
        let mut x = vec![0; E6_LEN];
        x[9 * s + 3 * r + c] = 1;
        x
    }

    #[test]
    fn derivative_examples() {
        for (p, k) in [(2, 1), (3, 1), (5, 1), (2, 2)] {
            let f = Field::new(p, k).unwrap();
            assert!(e6_derivative(&f, &[0; E6_LEN]).iter().all(|&c| c == 0));
            assert!(e6_derivative(&f, &unit(0, 0, 0)).iter().all(|&c| c == 0));
            let mut id = vec![0; E6_LEN];
            for i in 0..3 {
                id[4 * i] = 1;
            }
            let g = e6_derivative(&f, &id);
            let want: Vec<Elem> = (0..E6_LEN).map(|j| (j < 9 && j % 4 == 0) as Elem).collect();
            assert_eq!(g, want);
        }
    }

    #[test]
    fn derivative_is_the_linear_coefficient() {
        use rand::{Rng, SeedableRng};
        let f = Field::new(5, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x: Vec<Elem> = (0..E6_LEN).map(|_| rng.gen_range(0..5)).collect();
            let y: Vec<Elem> = (0..E6_LEN).map(|_| rng.gen_range(0..5)).collect();
            // d(x + t y) = d0 + d1 t + d2 t^2 + d3 t^3; solve from t = 0, 1, 2, 3
            let at = |t: Elem| {
                let v: Vec<Elem> = x.iter().zip(&y).map(|(&a, &b)| f.mul_add(t, b, a)).collect();
                e6_cubic(&f, &v)
            };
            let vals: Vec<Elem> = (0..4).map(at).collect();
            let vander: Vec<Elem> = (0..4).flat_map(|t| (0..4).map(move |e| f.pow(t, e))).collect();
            let inv = crate::linproj::invert(&f, 4, &vander).unwrap();
            let d1 = (0..4).fold(0, |acc, j| f.mul_add(inv[4 + j], vals[j], acc));
            let g = e6_derivative(&f, &x);
            assert_eq!(crate::linproj::dot(&f, &g, &y), d1);
        }
    }

    #[test]
    fn gf2_scan_matches_generic_derivative() {
        let f = Field::new(2, 1).unwrap();
        let keys = e6_points_gf2();
        assert_eq!(keys.len(), 139_503);
        assert!(keys.contains(&(1u64 << 26)));
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20_000 {
            let k: u64 = rng.gen_range(1..1 << 27);
            let zero = e6_derivative(&f, &crate::gf2::unpack(k, E6_LEN)).iter().all(|&c| c == 0);
            assert_eq!(zero, keys.binary_search(&k).is_ok());
        }
        for &k in keys.iter().step_by(97) {
            assert!(e6_derivative(&f, &crate::gf2::unpack(k, E6_LEN)).iter().all(|&c| c == 0));
        }
    }
}
