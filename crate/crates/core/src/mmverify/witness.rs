//! Re-checking witnesses against a set: a reported violation must still be one.

use crate::quadform::witt_index;
use crate::report::Witness;

use super::axioms::tangent_space;
use super::graph::{span_of, Collinearity};
use super::lemmas::is_singular;
use super::wrinkles::Hyperplanes;

/// `Some(true)` when the witness shows a violation in `graph`'s set, `Some(false)`
/// when it does not, `None` for witnesses that do not refer to a set.
pub fn recheck(graph: &Collinearity, w: &Witness) -> Option<bool> {
    let set = graph.set();
    let field = set.field();
    let idx = |c: &[u8]| set.index_of(c).map(|i| i as usize);
    let symp_ok = |s: usize| s < set.symps().len();
    Some(match w {
        Witness::NotSpanning { .. } => set.span().rank() != set.n(),
        Witness::SympDimension { symp, .. } => symp_ok(*symp) && set.symp(*symp).projdim() != set.d() as isize + 1,
        Witness::SympNotSplit { symp, .. } => {
            symp_ok(*symp) && witt_index(set.symp(*symp).form()).map_or(true, |k| k != (set.d() + 2) / 2)
        }
        Witness::SympPointMismatch { symp, point, in_set } => {
            symp_ok(*symp) && {
                let s = set.symp(*symp);
                s.span().contains_vec(field, point) && set.contains_vec(point) == *in_set && (s.eval(point) == 0) != *in_set
            }
        }
        Witness::OrphanPair { x, y } => match (idx(x), idx(y)) {
            (Some(i), Some(j)) => set.common_symps(i, j).is_empty(),
            _ => false,
        },
        Witness::NonUniqueSymp { x, y, .. } => match (idx(x), idx(y)) {
            (Some(i), Some(j)) => !graph.collinear(i, j) && set.common_symps(i, j).len() > 1,
            _ => false,
        },
        Witness::Mm2 { symp_a, symp_b, point } => {
            symp_ok(*symp_a)
                && symp_ok(*symp_b)
                && set.symp(*symp_a).span().contains_vec(field, point)
                && set.symp(*symp_b).span().contains_vec(field, point)
                && !set.contains_vec(point)
        }
        Witness::Mm3 { point, bound, .. } => idx(point).is_some_and(|i| tangent_space(set, i).projdim() > *bound as isize),
        Witness::Quadrangle { corners, .. } => {
            let ids: Option<Vec<usize>> = corners.iter().map(|c| if c.is_empty() { Some(usize::MAX) } else { idx(c) }).collect();
            match ids.as_deref() {
                Some(&[a, usize::MAX, c, usize::MAX]) => a != usize::MAX && graph.common_neighbours(a, c, None).is_empty(),
                Some(&[a, b, c, d]) => {
                    let closed = graph.collinear(a, b) && graph.collinear(b, c) && graph.collinear(c, d) && graph.collinear(d, a);
                    let mut s = set.common_symps(a, c);
                    s.retain(|h| set.symps_through(b).contains(h) && set.symps_through(d).contains(h));
                    closed && !graph.collinear(a, c) && s.len() != 1
                }
                _ => false,
            }
        }
        Witness::CollinearSet { p, symp } => match idx(p) {
            Some(i) if symp_ok(*symp) => {
                let pts = set.symp_points(*symp);
                let col: Vec<u32> = pts.iter().copied().filter(|&y| graph.collinear(i, y as usize)).collect();
                !pts.contains(&(i as u32)) && !col.is_empty() && {
                    let span = span_of(set, &col);
                    let inside = super::closure::points_in(set, &span);
                    inside != col || !is_singular(set, &span)
                }
            }
            _ => false,
        },
        Witness::Lemma1 { a, b } => {
            let sa = crate::linproj::Subspace::from_vectors(field, set.n(), a.iter().map(Vec::as_slice));
            let sb = crate::linproj::Subspace::from_vectors(field, set.n(), b.iter().map(Vec::as_slice));
            match (sa, sb) {
                (Ok(sa), Ok(sb)) => {
                    let join = sa.join(field, &sb).unwrap();
                    is_singular(set, &sa)
                        && is_singular(set, &sb)
                        && sa.intersect(field, &sb).unwrap().rank() + 1 == sa.rank()
                        && !is_singular(set, &join)
                        && !set.symps().iter().any(|h| h.span().contains_subspace(field, &join))
                }
                _ => false,
            }
        }
        Witness::WrinklePoint { x, y } => match (idx(x), idx(y)) {
            (Some(i), Some(j)) => {
                let h = Hyperplanes::new(field, &tangent_space(set, i));
                i != j && h.contains(field, set.key(j), set.point(j)) && !graph.collinear(i, j)
            }
            _ => false,
        },
        Witness::QuadricLemma { .. } | Witness::Recognition { .. } => return None,
    })
}
