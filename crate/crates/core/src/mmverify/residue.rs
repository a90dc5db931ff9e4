//! The residue at a point: singular lines and symp tangent spaces through p,
//! cut by a hyperplane of T_p that avoids p.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};
use crate::linproj::{self, normalize, pack, Echelon, ProjPoint, Subspace};
use crate::mmset::{MMSet, Symp};
use crate::quadform::fit_form;

use super::axioms::tangent_space;
use super::graph::Collinearity;

#[derive(Debug)]
pub struct Residue {
    /// The base point.
    pub base: Vec<Elem>,
    /// T_p in ambient coordinates.
    pub tangent: Subspace,
    /// C_p is the kernel of the coordinate functional v -> v[hyperplane_column] on T_p.
    pub hyperplane_column: usize,
    /// Span of the residue points in ambient coordinates; the residue set is
    /// written in its local coordinates.
    pub frame: Subspace,
    pub set: MMSet,
}

/// `v - (v[col] / p[col]) p`: the point of the line pv in the hyperplane.
fn cut(field: &Field, v: &[Elem], p: &[Elem], col: usize) -> Vec<Elem> {
    let mut w = v.to_vec();
    let s = field.neg(field.mul(v[col], field.inv(p[col]).unwrap()));
    linproj::axpy(field, s, p, &mut w);
    w
}

pub fn residue(graph: &Collinearity, p: usize) -> Result<Residue> {
    let set = graph.set();
    let field = *set.field();
    if set.d() < 3 {
        return Err(Error::Precondition(format!("residues need split type at least 3, got {}", set.d())));
    }
    if !set.is_proper() {
        return Err(Error::Degenerate("the set has at most one symp".into()));
    }
    let base = set.point(p).to_vec();
    let tangent = tangent_space(set, p);
    let local = tangent.local_coords_unchecked(&base);
    // least defining functional not vanishing at p: the last nonzero local coordinate
    let j = local.iter().rposition(|&c| c != 0).expect("base point is nonzero");
    let col = tangent.pivots()[j];

    let nbrs = graph.neighbours(p);
    if nbrs.is_empty() {
        return Err(Error::Degenerate("no singular line through the base point".into()));
    }
    let mut seen = FxHashSet::default();
    let mut pts: Vec<Vec<Elem>> = Vec::new();
    for &y in &nbrs {
        let mut w = cut(&field, set.point(y as usize), &base, col);
        normalize(&field, &mut w);
        if seen.insert(pack(&w, field.q())) {
            pts.push(w);
        }
    }
    pts.sort_unstable_by_key(|w| pack(w, field.q()));
    let frame = Subspace::from_vectors(&field, set.n(), pts.iter().map(Vec::as_slice))?;
    let m = frame.rank();
    let points: Vec<ProjPoint> = pts
        .iter()
        .map(|w| ProjPoint::new(&field, frame.local_coords_unchecked(w)).expect("nonzero"))
        .collect();

    let spans: Vec<Subspace> = set
        .symps_through(p)
        .par_iter()
        .map(|&s| {
            let rows = set.symp(s as usize).tangent_rows(&field, &base)?;
            let mut e = Echelon::new(m);
            for r in &rows {
                let w = cut(&field, r, &base, col);
                let c = frame
                    .local_coords(&field, &w)
                    .ok_or_else(|| Error::Structure("symp tangent space leaves the span of the residue".into()))?;
                e.insert(&field, &c);
            }
            Ok(e.into_subspace())
        })
        .collect::<Result<_>>()?;
    let mut unique: Vec<Subspace> = spans.into_iter().collect::<FxHashSet<_>>().into_iter().collect();
    unique.sort_unstable();

    let q = field.q();
    let index: FxHashSet<u64> = points.iter().map(|pt| pt.key(q)).collect();
    let symps: Vec<Symp> = unique
        .into_par_iter()
        .map(|span| {
            let mut inside = Vec::new();
            span.for_each_point(&field, |v| {
                if index.contains(&pack(v, q)) {
                    inside.push(span.local_coords_unchecked(v));
                }
            });
            let form = fit_form(&field, span.rank(), inside.iter().map(Vec::as_slice))?;
            Symp::new(span, form)
        })
        .collect::<Result<_>>()?;
    let family = format!("residue of {}", set.family());
    let res = MMSet::new(family, field, m, set.d() - 2, points, symps)?;
    Ok(Residue { base, tangent, hyperplane_column: col, frame, set: res })
}

/// Counts compared between residues and the varieties they should match.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Invariants {
    pub d: usize,
    pub points: usize,
    pub lines: u64,
    pub symps: usize,
    /// Number of singular lines through a point, against how many points have it.
    pub lines_per_point: std::collections::BTreeMap<u64, u64>,
}

impl Invariants {
    /// Needs a full neighbour scan per point; meant for sets of moderate size.
    pub fn of(graph: &Collinearity) -> Invariants {
        let set = graph.set();
        let q = set.field().q() as u64;
        let degrees: Vec<u64> = (0..set.len()).into_par_iter().map(|i| graph.degree(i) as u64).collect();
        let mut lines_per_point = std::collections::BTreeMap::new();
        for &d in &degrees {
            *lines_per_point.entry(d / q).or_insert(0) += 1;
        }
        Invariants {
            d: set.d(),
            points: set.len(),
            lines: degrees.iter().sum::<u64>() / (q * (q + 1)),
            symps: set.symps().len(),
            lines_per_point,
        }
    }
}
