//! Symps recovered from point pairs: the span of two non-collinear points
//! together with all points collinear with both.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::gf2::{self, BitEchelon};
use crate::gfq::Elem;
use crate::linproj::{pack, unpack, Echelon, PointKey, Subspace};
use crate::mmset::{MMSet, Symp};
use crate::quadform::witt_index;

use super::graph::Collinearity;

/// Canonical key of a subspace: its RREF rows packed as point keys.
fn span_key(s: &Subspace, q: usize) -> Vec<PointKey> {
    s.rows().map(|r| pack(r, q)).collect()
}

fn key_span(set: &MMSet, key: &[PointKey]) -> Subspace {
    let (n, q) = (set.n(), set.field().q());
    let rows: Vec<Elem> = key.iter().flat_map(|&k| unpack(k, n, q)).collect();
    Subspace::from_rref_rows(set.field(), n, rows).expect("stored spans are canonical")
}

/// Span of x, y and their common neighbours, with the X points inside it.
fn closure_span(set: &MMSet, x: usize, y: usize, cn: &[u32]) -> (Subspace, Vec<u32>) {
    let field = set.field();
    let n = set.n();
    let span = if field.q() == 2 && n <= 64 {
        let mut e = BitEchelon::new();
        for k in [set.key(x), set.key(y)].into_iter().chain(cn.iter().map(|&z| set.key(z as usize))) {
            e.insert(k);
        }
        e.to_subspace(n)
    } else {
        let mut e = Echelon::new(n);
        for p in [x as u32, y as u32].iter().chain(cn) {
            e.insert(field, set.point(*p as usize));
        }
        e.into_subspace()
    };
    let inside = points_in(set, &span);
    (span, inside)
}

/// Indices of the X points in a subspace, sorted.
pub(crate) fn points_in(set: &MMSet, span: &Subspace) -> Vec<u32> {
    let field = set.field();
    let mut inside = Vec::new();
    if field.q() == 2 && set.n() <= 64 {
        for k in gf2::span_points(&gf2::from_subspace(&span)) {
            if let Some(i) = set.index_of_key(k) {
                inside.push(i);
            }
        }
    } else {
        span.for_each_point(field, |v| {
            if let Some(i) = set.index_of_key(pack(v, field.q())) {
                inside.push(i);
            }
        });
    }
    inside.sort_unstable();
    inside
}

/// Fit and validate the quadric of X inside `span`.
fn symp_on(set: &MMSet, span: Subspace, inside: &[u32]) -> Result<Symp> {
    let field = set.field();
    let d = set.d();
    if span.projdim() != d as isize + 1 {
        return Err(Error::Structure(format!("closure has projective dimension {}, expected {}", span.projdim(), d + 1)));
    }
    let local: Vec<Vec<Elem>> = inside.iter().map(|&i| span.local_coords_unchecked(set.point(i as usize))).collect();
    let form = crate::quadform::fit_form(field, span.rank(), local.iter().map(Vec::as_slice))?;
    let witt = witt_index(&form)?;
    if witt != (d + 2) / 2 {
        return Err(Error::Structure(format!("closure quadric has Witt index {witt}, expected {}", (d + 2) / 2)));
    }
    let symp = Symp::new(span, form)?;
    let mut zeros = 0usize;
    symp.for_each_key_with_value(field, |_, v| zeros += (v == 0) as usize);
    if zeros != inside.len() {
        return Err(Error::Structure("closure quadric has zeros outside X".into()));
    }
    Ok(symp)
}

/// The symp through two non-collinear points, rebuilt from collinearity alone.
pub fn symp_from_pair(graph: &Collinearity, x: usize, y: usize) -> Result<Symp> {
    let set = graph.set();
    if set.d() < 2 {
        return Err(Error::Precondition("pair closure needs split type at least 2".into()));
    }
    if x == y || graph.collinear(x, y) {
        return Err(Error::Precondition("points must be distinct and non-collinear".into()));
    }
    let cn = graph.common_neighbours(x, y, None);
    let (span, inside) = closure_span(set, x, y, &cn);
    symp_on(set, span, &inside)
}

/// Which base points the closure family starts from.
#[derive(Clone, Debug)]
pub enum Seeds {
    /// Every point of X: each non-collinear pair is covered.
    All,
    /// Only these points; enough when every symp meets one of them.
    Points(Vec<u32>),
}

/// The symp family regenerated by pair closures, sorted by span.
///
/// From each seed x, every point y not collinear with x is either used as a
/// closure partner or already lies in a closure through x found earlier.
pub fn closure_family(graph: &Collinearity, seeds: &Seeds) -> Result<Vec<Symp>> {
    let set = graph.set();
    if set.d() < 2 {
        return Err(Error::Precondition("pair closure needs split type at least 2".into()));
    }
    let q = set.field().q();
    let seeds: Vec<u32> = match seeds {
        Seeds::All => (0..set.len() as u32).collect(),
        Seeds::Points(p) => p.clone(),
    };
    let keys: FxHashSet<Vec<PointKey>> = seeds
        .par_iter()
        .fold(FxHashSet::default, |mut acc, &x| {
            let x = x as usize;
            let nbrs = graph.neighbours(x);
            let mut skip = vec![false; set.len()];
            skip[x] = true;
            for &z in &nbrs {
                skip[z as usize] = true;
            }
            for y in 0..set.len() {
                if skip[y] {
                    continue;
                }
                let cn: Vec<u32> = if graph.is_dense() {
                    graph.common_neighbours(x, y, Some(&nbrs))
                } else {
                    nbrs.iter().copied().filter(|&z| set.collinear(z as usize, y)).collect()
                };
                let (span, inside) = closure_span(set, x, y, &cn);
                for &i in &inside {
                    skip[i as usize] = true;
                }
                acc.insert(span_key(&span, q));
            }
            acc
        })
        .reduce(FxHashSet::default, |mut a, b| {
            a.extend(b);
            a
        });
    let mut keys: Vec<Vec<PointKey>> = keys.into_iter().collect();
    keys.sort_unstable();
    keys.into_par_iter()
        .map(|key| {
            let span = key_span(set, &key);
            let inside = points_in(set, &span);
            symp_on(set, span, &inside)
        })
        .collect()
}

/// Whether two symp families have the same spans.
pub fn same_spans(a: &[Symp], b: &[Symp]) -> bool {
    let sa: FxHashSet<&Subspace> = a.iter().map(Symp::span).collect();
    let sb: FxHashSet<&Subspace> = b.iter().map(Symp::span).collect();
    a.len() == sa.len() && b.len() == sb.len() && sa == sb
}
