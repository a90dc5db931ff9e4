//! Singular subspaces and the projective-space recognition for split type 4.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::linproj::Subspace;
use crate::report::{CheckRecord, Witness};

use super::closure::points_in;
use super::graph::{span_of, Collinearity};
use super::lemmas::is_singular;

/// Singular subspaces by projective dimension, up to `max_k` (level 0 = points).
pub fn singular_subspaces(graph: &Collinearity, max_k: usize) -> Vec<Vec<Subspace>> {
    let set = graph.set();
    let field = set.field();
    let mut levels: Vec<Vec<Subspace>> = vec![(0..set.len() as u32).map(|i| span_of(set, &[i])).collect()];
    while levels.len() <= max_k {
        let next: FxHashSet<Subspace> = levels
            .last()
            .unwrap()
            .par_iter()
            .fold(FxHashSet::default, |mut acc, s| {
                let pts = points_in(set, s);
                for z in graph.common_to_all(&pts) {
                    let v = set.point(z as usize);
                    if s.contains_vec(field, v) {
                        continue;
                    }
                    let t = s.join_vec(field, v).unwrap();
                    if !acc.contains(&t) && is_singular(set, &t) {
                        acc.insert(t);
                    }
                }
                acc
            })
            .reduce(FxHashSet::default, |mut a, b| {
                a.extend(b);
                a
            });
        if next.is_empty() {
            break;
        }
        let mut lvl: Vec<Subspace> = next.into_iter().collect();
        lvl.sort_unstable();
        levels.push(lvl);
    }
    levels
}

fn basis(s: &Subspace) -> Vec<Vec<u8>> {
    s.rows().map(<[u8]>::to_vec).collect()
}

/// Builds the geometry of singular f-spaces (type 1), points (type 2) and
/// singular planes outside f-spaces (type 3) and checks that it is a
/// projective space of dimension f + 1.
pub fn recognize_grassmann(graph: &Collinearity) -> Result<CheckRecord> {
    let set = graph.set();
    if set.d() != 4 {
        return Err(Error::Precondition(format!("recognition needs split type 4, got {}", set.d())));
    }
    let field = set.field();
    let q = field.q() as u64;
    let mut rec = CheckRecord::new("recognition");
    let levels = singular_subspaces(graph, set.n());
    let f = levels.len() - 1;

    // maximal singular subspaces must come in exactly the dimensions 2 and f
    let mut maximal_dims = Vec::new();
    for k in 0..=f {
        let has_maximal = levels[k].par_iter().any(|s| k == f || !levels[k + 1].iter().any(|t| t.contains_subspace(field, s)));
        if has_maximal {
            maximal_dims.push(k);
        }
    }
    rec.note(format!("maximal singular subspace dimensions {maximal_dims:?}"));
    if f <= 2 || maximal_dims != [2, f] {
        return Err(Error::Structure(format!(
            "maximal singular subspaces have dimensions {maximal_dims:?}; expected exactly 2 and f > 2"
        )));
    }
    let type1 = &levels[f];
    let type3: Vec<&Subspace> = levels[2].iter().filter(|p| !type1.iter().any(|t| t.contains_subspace(field, p))).collect();
    rec.count("f", f as u64);
    rec.count("type1", type1.len() as u64);
    rec.count("type2", set.len() as u64);
    rec.count("type3", type3.len() as u64);

    // two type-1 elements meet in exactly one point of X
    for (i, a) in type1.iter().enumerate() {
        for b in &type1[i + 1..] {
            rec.checked += 1;
            let m = a.intersect(field, b).unwrap();
            if m.rank() != 1 || !set.contains_vec(m.row(0)) {
                rec.violation(Witness::Recognition { detail: "type-1 elements do not meet in one point".into(), subspaces: vec![basis(a), basis(b)] });
            }
        }
    }
    // each point of X lies on q + 1 type-1 elements
    let t1_points: Vec<Vec<u32>> = type1.iter().map(|t| points_in(set, t)).collect();
    let mut on = vec![0u64; set.len()];
    for pts in &t1_points {
        for &p in pts {
            on[p as usize] += 1;
        }
    }
    rec.checked += 1;
    if on.iter().any(|&c| c != q + 1) {
        let p = on.iter().position(|&c| c != q + 1).unwrap();
        rec.violation(Witness::Recognition {
            detail: format!("point on {} type-1 elements", on[p]),
            subspaces: vec![vec![set.point(p).to_vec()]],
        });
    }
    // a unique type-3 element through every collinear pair
    let t3_points: Vec<Vec<u32>> = type3.iter().map(|t| points_in(set, t)).collect();
    let mut through = vec![Vec::new(); set.len()];
    for (i, pts) in t3_points.iter().enumerate() {
        for &p in pts {
            through[p as usize].push(i as u32);
        }
    }
    for x in 0..set.len() {
        for y in graph.neighbours(x) {
            if (y as usize) < x {
                continue;
            }
            rec.checked += 1;
            let common = through[x].iter().filter(|t| through[y as usize].contains(t)).count();
            if common != 1 {
                rec.violation(Witness::Recognition {
                    detail: format!("{common} type-3 elements through a collinear pair"),
                    subspaces: vec![vec![set.point(x).to_vec()], vec![set.point(y as usize).to_vec()]],
                });
            }
        }
    }
    // plane residues: X points of the plane against type-1 elements meeting it in a line
    let plane_size = q * q + q + 1;
    for (i, plane) in type3.iter().enumerate() {
        rec.checked += 1;
        let pts = &t3_points[i];
        let lines: Vec<Vec<u32>> = t1_points
            .iter()
            .map(|t| pts.iter().copied().filter(|p| t.binary_search(p).is_ok()).collect::<Vec<u32>>())
            .filter(|l| l.len() as u64 == q + 1)
            .collect();
        let mut ok = pts.len() as u64 == plane_size && lines.len() as u64 == plane_size;
        if ok {
            for (a, &x) in pts.iter().enumerate() {
                for &y in &pts[a + 1..] {
                    if lines.iter().filter(|l| l.contains(&x) && l.contains(&y)).count() != 1 {
                        ok = false;
                    }
                }
            }
        }
        if !ok {
            rec.violation(Witness::Recognition { detail: format!("plane residue is not a projective plane of order {q}"), subspaces: vec![basis(plane)] });
        }
    }
    let expected = ((q.pow(f as u32 + 2) - 1) / (q - 1)) as usize;
    rec.checked += 1;
    if type1.len() != expected {
        rec.violation(Witness::Recognition {
            detail: format!("{} type-1 elements, a projective space of dimension {} has {expected} points", type1.len(), f + 1),
            subspaces: vec![],
        });
    }
    rec.count("projective-dimension", f as u64 + 1);
    Ok(rec.finish())
}
