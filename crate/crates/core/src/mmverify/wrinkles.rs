//! Wrinkles: points of X in T_x not on a singular line through x.

use rayon::prelude::*;

use crate::gf2::{self, BitEchelon};
use crate::linproj::Subspace;
use crate::report::{CheckRecord, Sampling, Witness};

use super::axioms::{point_sample, tangent_space};
use super::graph::Collinearity;

/// Membership test for a fixed subspace, via its annihilator.
pub(crate) struct Hyperplanes {
    packed: Option<Vec<u64>>,
    generic: Option<Subspace>,
}

impl Hyperplanes {
    pub(crate) fn new(field: &crate::gfq::Field, s: &Subspace) -> Hyperplanes {
        let n = s.ambient_len();
        if field.q() == 2 && n <= 64 {
            let mut e = BitEchelon::new();
            for r in gf2::from_subspace(s) {
                e.insert(r);
            }
            Hyperplanes { packed: Some(e.nullspace(n)), generic: None }
        } else {
            Hyperplanes { packed: None, generic: Some(s.annihilator(field)) }
        }
    }

    pub(crate) fn contains(&self, field: &crate::gfq::Field, key: u64, v: &[u8]) -> bool {
        match (&self.packed, &self.generic) {
            (Some(h), _) => h.iter().all(|&w| gf2::parity(w & key) == 0),
            (_, Some(ann)) => ann.rows().all(|r| crate::linproj::dot(field, r, v) == 0),
            _ => unreachable!(),
        }
    }
}

pub fn find_wrinkles(graph: &Collinearity, x: usize) -> Vec<u32> {
    let set = graph.set();
    let field = set.field();
    let t = tangent_space(set, x);
    let h = Hyperplanes::new(field, &t);
    (0..set.len())
        .filter(|&y| y != x && h.contains(field, set.key(y), set.point(y)) && !graph.collinear(x, y))
        .map(|y| y as u32)
        .collect()
}

pub fn check_wrinkles(graph: &Collinearity, sampling: &Sampling) -> CheckRecord {
    let set = graph.set();
    let mut rec = CheckRecord::new("wrinkles");
    let samples = sampling.point_samples;
    let (pts, exhaustive) = point_sample(set, sampling, samples, 0x7772);
    if !exhaustive {
        rec = rec.sampled(sampling.seed, samples);
    }
    let parts: Vec<CheckRecord> = pts
        .par_chunks(16)
        .map(|chunk| {
            let mut r = CheckRecord::new("wrinkles");
            for &x in chunk {
                r.checked += 1;
                for y in find_wrinkles(graph, x as usize) {
                    r.violation(Witness::WrinklePoint { x: set.point(x as usize).to_vec(), y: set.point(y as usize).to_vec() });
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}
