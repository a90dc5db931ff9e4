//! The three Mazzocca-Melone axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gf2::{self, BitEchelon};
use crate::linproj::{unpack, Echelon, Subspace};
use crate::mmset::MMSet;
use crate::report::{CheckRecord, Sampling, Witness};

use super::graph::Collinearity;

const CHUNK: usize = 4096;

/// Random index pairs `i != j`.
pub(crate) fn sample_pairs(len: usize, count: u64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..len);
            let mut j = rng.gen_range(0..len - 1);
            if j >= i {
                j += 1;
            }
            (i as u32, j as u32)
        })
        .collect()
}

fn all_pairs(len: usize) -> Vec<(u32, u32)> {
    (0..len as u32).flat_map(|i| (i + 1..len as u32).map(move |j| (i, j))).collect()
}

/// Every pair of points lies in a symp; non-collinear pairs in exactly one.
pub fn check_mm1(graph: &Collinearity, sampling: &Sampling) -> CheckRecord {
    let set = graph.set();
    let mut rec = CheckRecord::new("mm1");
    if set.len() < 2 {
        return rec.finish();
    }
    let exhaustive = set.len() <= sampling.exhaustive_limit;
    let pairs = if exhaustive {
        all_pairs(set.len())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x6d31);
        rec = rec.sampled(sampling.seed, sampling.samples);
        sample_pairs(set.len(), sampling.samples, &mut rng)
    };
    let coords = |i: u32| set.point(i as usize).to_vec();
    let parts: Vec<CheckRecord> = pairs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut r = CheckRecord::new("mm1");
            for &(i, j) in chunk {
                let common = set.common_symps(i as usize, j as usize);
                let col = graph.collinear(i as usize, j as usize);
                r.checked += 1;
                r.count(if col { "collinear-pairs" } else { "non-collinear-pairs" }, 1);
                if common.is_empty() {
                    r.violation(Witness::OrphanPair { x: coords(i), y: coords(j) });
                } else if !col && common.len() != 1 {
                    r.violation(Witness::NonUniqueSymp {
                        x: coords(i),
                        y: coords(j),
                        symps: common.iter().map(|&s| s as usize).collect(),
                    });
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}

/// Intersection of two spans, packed over GF(2) when possible.
pub(crate) fn meet(set: &MMSet, a: usize, b: usize) -> Subspace {
    let (sa, sb) = (set.symp(a), set.symp(b));
    let n = set.n();
    if let (Some(ra), Some(rb)) = (sa.packed_rows(), sb.packed_rows()) {
        if 2 * n <= 64 {
            // Zassenhaus: rows (a|a) and (b|0); rows with zero left half span the meet
            let mut e = BitEchelon::new();
            for &r in ra {
                e.insert(r << n | r);
            }
            for &r in rb {
                e.insert(r << n);
            }
            let mut m = BitEchelon::new();
            for r in e.canonical() {
                if r >> n == 0 {
                    m.insert(r);
                }
            }
            return m.to_subspace(n);
        }
    }
    sa.span().intersect(set.field(), sb.span()).unwrap()
}

/// The span of two symps meets in a subspace of X.
pub fn check_mm2(set: &MMSet, sampling: &Sampling, force_exhaustive: bool) -> CheckRecord {
    let mut rec = CheckRecord::new("mm2");
    let m = set.symps().len();
    if m < 2 {
        rec.note("fewer than two symps; vacuous");
        return rec.finish();
    }
    let exhaustive = force_exhaustive || set.len() <= sampling.exhaustive_limit;
    let pairs = if exhaustive {
        all_pairs(m)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x6d32);
        rec = rec.sampled(sampling.seed, sampling.samples);
        sample_pairs(m, sampling.samples, &mut rng)
    };
    let field = set.field();
    let parts: Vec<CheckRecord> = pairs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut r = CheckRecord::new("mm2");
            for &(a, b) in chunk {
                let s = meet(set, a as usize, b as usize);
                r.checked += 1;
                r.count(&format!("meet-projdim={}", s.projdim()), 1);
                let mut bad = None;
                if field.q() == 2 && set.n() <= 64 {
                    bad = gf2::span_points(&gf2::from_subspace(&s)).find(|&k| !set.contains_key(k)).map(|k| unpack(k, set.n(), 2));
                } else {
                    s.for_each_point(field, |v| {
                        if bad.is_none() && !set.contains_vec(v) {
                            bad = Some(v.to_vec());
                        }
                    });
                }
                if let Some(point) = bad {
                    r.violation(Witness::Mm2 { symp_a: a as usize, symp_b: b as usize, point });
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}

/// T_x: the span of the tangent hyperplanes at `x` of all symps through it.
pub fn tangent_space(set: &MMSet, x: usize) -> Subspace {
    let n = set.n();
    let field = set.field();
    let through = set.symps_through(x);
    let packed = field.q() == 2 && n <= 64 && through.iter().all(|&s| set.symp(s as usize).packed_rows().is_some());
    if packed {
        let key = set.key(x);
        let mut e = BitEchelon::new();
        e.insert(key);
        for &s in through {
            let symp = set.symp(s as usize);
            let local = symp.span().pivots().iter().fold(0u64, |acc, &p| acc << 1 | (key >> (n - 1 - p) & 1));
            if let Some(rows) = symp.tangent_rows_gf2(local) {
                for r in rows {
                    e.insert(r);
                }
            }
        }
        return e.to_subspace(n);
    }
    let mut e = Echelon::new(n);
    e.insert(field, set.point(x));
    for &s in through {
        if let Ok(rows) = set.symp(s as usize).tangent_rows(field, set.point(x)) {
            for r in rows {
                e.insert(field, &r);
            }
        }
    }
    e.into_subspace()
}

/// Points whose tangent space is checked: all of X or a seeded sample.
pub(crate) fn point_sample(set: &MMSet, sampling: &Sampling, samples: u64, salt: u64) -> (Vec<u32>, bool) {
    if set.len() <= sampling.exhaustive_limit || samples as usize >= set.len() {
        ((0..set.len() as u32).collect(), true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ salt);
        ((0..samples).map(|_| rng.gen_range(0..set.len()) as u32).collect(), false)
    }
}

/// dim T_x <= 2d, with the histogram of dim T_x.
pub fn check_mm3(set: &MMSet, sampling: &Sampling) -> CheckRecord {
    let mut rec = CheckRecord::new("mm3");
    let (pts, exhaustive) = point_sample(set, sampling, sampling.samples, 0x6d33);
    if !exhaustive {
        rec = rec.sampled(sampling.seed, sampling.samples);
    }
    let bound = 2 * set.d();
    let parts: Vec<CheckRecord> = pts
        .par_chunks(256)
        .map(|chunk| {
            let mut r = CheckRecord::new("mm3");
            for &x in chunk {
                let t = tangent_space(set, x as usize);
                r.checked += 1;
                r.count(&format!("tangent-projdim={}", t.projdim()), 1);
                if t.projdim() > bound as isize {
                    r.violation(Witness::Mm3 { point: set.point(x as usize).to_vec(), projdim: t.projdim(), bound });
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}
