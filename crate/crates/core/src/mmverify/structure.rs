//! The MMSet invariants: X spans the ambient space and every symp meets X in
//! a nonsingular split quadric of its span.

use rayon::prelude::*;

use crate::linproj::unpack;
use crate::mmset::MMSet;
use crate::quadform::witt_index;
use crate::report::{CheckRecord, Witness};

pub fn check_structure(set: &MMSet) -> CheckRecord {
    let mut rec = CheckRecord::new("structure");
    let field = set.field();
    let span = set.span();
    rec.checked += 1;
    if span.rank() != set.n() {
        rec.violation(Witness::NotSpanning { projdim: span.projdim(), expected: set.ambient_dim() });
    }
    let want = set.d() as isize + 1;
    let witt = (set.d() + 2) / 2;
    let per_symp: Vec<Vec<Witness>> = set
        .symps()
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut w = Vec::new();
            if s.projdim() != want {
                w.push(Witness::SympDimension { symp: i, projdim: s.projdim() });
                return w;
            }
            match witt_index(s.form()) {
                Ok(k) if k == witt => {}
                Ok(k) => {
                    w.push(Witness::SympNotSplit { symp: i, reason: format!("Witt index {k}, expected {witt}") });
                    return w;
                }
                Err(e) => {
                    w.push(Witness::SympNotSplit { symp: i, reason: e.to_string() });
                    return w;
                }
            }
            s.for_each_key_with_value(field, |key, v| {
                let in_set = set.contains_key(key);
                if in_set != (v == 0) && w.len() < 4 {
                    w.push(Witness::SympPointMismatch { symp: i, point: unpack(key, set.n(), field.q()), in_set });
                }
            });
            w
        })
        .collect();
    for w in per_symp {
        rec.checked += 1;
        for x in w {
            rec.violation(x);
        }
    }
    rec.count("points", set.len() as u64);
    rec.count("symps", set.symps().len() as u64);
    rec.count("incidences", set.incidence_total() as u64);
    rec.finish()
}
