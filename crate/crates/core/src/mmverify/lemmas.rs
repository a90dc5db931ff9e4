//! The general lemmas on pre-Mazzocca-Melone sets, as executable properties.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::linproj::Subspace;
use crate::mmset::MMSet;
use crate::report::{CheckRecord, Sampling, Witness};

use super::closure::points_in;
use super::graph::{span_of, Collinearity};

/// Sets this small get exhaustive lemma checks.
pub const LEMMA_EXHAUSTIVE_MAX: usize = 200;

/// Smallest sample size used for lemma checks on larger sets.
pub const LEMMA_MIN_SAMPLES: u64 = 10_000;

fn coords(set: &MMSet, i: u32) -> Vec<u8> {
    set.point(i as usize).to_vec()
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn lemma_samples(sampling: &Sampling) -> u64 {
    sampling.samples.max(LEMMA_MIN_SAMPLES)
}

/// Quadrangle x1 x2 x3 x4 of singular lines with x1, x3 non-collinear: all
/// four lines lie in exactly one symp.
fn quadrangle_symps(set: &MMSet, c: [u32; 4]) -> Vec<u32> {
    let mut s = set.symps_through(c[0] as usize).to_vec();
    for &p in &c[1..] {
        s = intersect_sorted(&s, set.symps_through(p as usize));
    }
    s
}

pub fn check_quadrangle(graph: &Collinearity, sampling: &Sampling) -> CheckRecord {
    let set = graph.set();
    let mut rec = CheckRecord::new("quadrangle");
    if set.len() <= LEMMA_EXHAUSTIVE_MAX {
        let lines = graph.lines();
        if lines.len() < 4 {
            return CheckRecord::skipped("quadrangle", "fewer than four singular lines");
        }
        for x1 in 0..set.len() {
            for x3 in x1 + 1..set.len() {
                if graph.collinear(x1, x3) {
                    continue;
                }
                let cn = graph.common_neighbours(x1, x3, None);
                for (a, &x2) in cn.iter().enumerate() {
                    for &x4 in &cn[a..] {
                        let c = [x1 as u32, x2, x3 as u32, x4];
                        check_one(set, c, &mut rec);
                    }
                }
            }
        }
        return rec.finish();
    }
    let samples = lemma_samples(sampling);
    rec = rec.sampled(sampling.seed, samples);
    let pool = base_pool(set, sampling, 0x7170);
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x7175);
    // draw x1 from the pool and a symp through it, then x3 opposite x1 inside that symp
    let mut picks = Vec::with_capacity(samples as usize);
    let mut attempts = 0u64;
    while (picks.len() as u64) < samples && attempts < 50 * samples {
        attempts += 1;
        let x1 = pool[rng.gen_range(0..pool.len())] as usize;
        let Some(&s) = set.symps_through(x1).choose(&mut rng) else { continue };
        let Some(&x3) = set.symp_points(s as usize).choose(&mut rng) else { continue };
        if x3 as usize == x1 || graph.collinear(x1, x3 as usize) {
            continue;
        }
        picks.push((x1 as u32, x3, rng.gen::<u64>()));
    }
    if picks.is_empty() {
        return CheckRecord::skipped("quadrangle", "no non-collinear pairs inside symps");
    }
    let parts: Vec<CheckRecord> = group_by_base(&mut picks)
        .into_par_iter()
        .map(|group| {
            let mut r = CheckRecord::new("quadrangle");
            let nbrs = graph.neighbours(group[0].0 as usize);
            for &(x1, x3, salt) in group {
                let cn = graph.common_neighbours(x1 as usize, x3 as usize, Some(&nbrs));
                if cn.is_empty() {
                    r.checked += 1;
                    r.violation(Witness::Quadrangle { corners: [coords(set, x1), vec![], coords(set, x3), vec![]], symps: vec![] });
                    continue;
                }
                let mut local = ChaCha8Rng::seed_from_u64(salt);
                let x2 = *cn.choose(&mut local).unwrap();
                let x4 = *cn.choose(&mut local).unwrap();
                check_one(set, [x1, x2, x3, x4], &mut r);
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}

/// Base points for sampled configurations. Neighbour lists of large sets
/// cost a full scan, so configurations share a pool of `point_samples` bases.
fn base_pool(set: &MMSet, sampling: &Sampling, salt: u64) -> Vec<u32> {
    if set.len() as u64 <= sampling.point_samples {
        return (0..set.len() as u32).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ salt);
    (0..sampling.point_samples).map(|_| rng.gen_range(0..set.len()) as u32).collect()
}

/// Picks sorted by base point, split into runs sharing it.
fn group_by_base<T: Copy>(picks: &mut [(u32, u32, T)]) -> Vec<&[(u32, u32, T)]> {
    picks.sort_by_key(|p| p.0);
    picks.chunk_by(|a, b| a.0 == b.0).collect()
}

fn check_one(set: &MMSet, c: [u32; 4], rec: &mut CheckRecord) {
    let s = quadrangle_symps(set, c);
    rec.checked += 1;
    if c[1] == c[3] {
        rec.count("degenerate", 1);
    }
    if s.len() != 1 {
        rec.violation(Witness::Quadrangle {
            corners: c.map(|p| coords(set, p)),
            symps: s.iter().map(|&x| x as usize).collect(),
        });
    }
}

/// The points of a symp collinear with an outside point form a singular subspace.
pub fn check_lemma_subspace(graph: &Collinearity, sampling: &Sampling) -> CheckRecord {
    let set = graph.set();
    let mut rec = CheckRecord::new("lemma-subspace");
    let m = set.symps().len();
    if m == 0 {
        return CheckRecord::skipped("lemma-subspace", "no symps");
    }
    let pairs: Vec<(u32, u32)> = if set.len() <= LEMMA_EXHAUSTIVE_MAX {
        (0..set.len() as u32).flat_map(|p| (0..m as u32).map(move |h| (p, h))).collect()
    } else {
        let samples = lemma_samples(sampling);
        rec = rec.sampled(sampling.seed, samples);
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x7375);
        (0..samples).map(|_| (rng.gen_range(0..set.len()) as u32, rng.gen_range(0..m) as u32)).collect()
    };
    let parts: Vec<CheckRecord> = pairs
        .par_chunks(256)
        .map(|chunk| {
            let mut r = CheckRecord::new("lemma-subspace");
            for &(p, h) in chunk {
                let pts = set.symp_points(h as usize);
                if pts.binary_search(&p).is_ok() {
                    continue;
                }
                r.checked += 1;
                let col: Vec<u32> = pts.iter().copied().filter(|&y| graph.collinear(p as usize, y as usize)).collect();
                r.count(&format!("collinear-set-size={}", col.len()), 1);
                if col.is_empty() {
                    continue;
                }
                // the collinear set must be all of a subspace, and that subspace singular
                let span = span_of(set, &col);
                let inside = points_in(set, &span);
                if inside.len() as u64 != span.point_count(set.field().q()) || inside != col {
                    r.violation(Witness::CollinearSet { p: coords(set, p), symp: h as usize });
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}

/// Whether every point of `s` is in X.
pub(crate) fn is_singular(set: &MMSet, s: &Subspace) -> bool {
    points_in(set, s).len() as u64 == s.point_count(set.field().q())
}

fn basis(s: &Subspace) -> Vec<Vec<u8>> {
    s.rows().map(<[u8]>::to_vec).collect()
}

/// Two singular k-spaces meeting in a (k-1)-space span a singular (k+1)-space
/// or lie in a common symp.
fn lemma1_pair(set: &MMSet, a: &Subspace, b: &Subspace, rec: &mut CheckRecord) {
    let field = set.field();
    let join = a.join(field, b).unwrap();
    rec.checked += 1;
    if is_singular(set, &join) {
        rec.count("singular-join", 1);
        return;
    }
    let meet = a.intersect(field, b).unwrap();
    let probe = set.index_of(meet.row(0)).expect("meet of singular subspaces lies in X");
    let in_symp = set.symps_through(probe as usize).iter().any(|&h| set.symp(h as usize).span().contains_subspace(field, &join));
    if in_symp {
        rec.count("in-symp", 1);
    } else {
        rec.violation(Witness::Lemma1 { a: basis(a), b: basis(b) });
    }
}

/// Extend the singular subspace spanned by `pts` by a random collinear point
/// taken from `cands` (the neighbours of `pts[0]`). Points inside `avoid`
/// are skipped; `avoid` contains `span`.
fn extend_random(
    graph: &Collinearity,
    cands: &[u32],
    pts: &[u32],
    span: &Subspace,
    avoid: &Subspace,
    rng: &mut ChaCha8Rng,
) -> Option<(u32, Subspace)> {
    let set = graph.set();
    let field = set.field();
    // lazy random permutation of the candidates; at most 16 joins are tried
    let mut pool = cands.to_vec();
    let mut tried = 0;
    while !pool.is_empty() && tried < 16 {
        let z = pool.swap_remove(rng.gen_range(0..pool.len()));
        let v = set.point(z as usize);
        if !pts[1..].iter().all(|&p| graph.collinear(z as usize, p as usize)) || avoid.contains_vec(field, v) {
            continue;
        }
        tried += 1;
        let s = span.join_vec(field, v).unwrap();
        if is_singular(set, &s) {
            return Some((z, s));
        }
    }
    None
}

pub fn check_lemma1(graph: &Collinearity, sampling: &Sampling, max_k: usize) -> CheckRecord {
    let set = graph.set();
    let field = set.field();
    let mut rec = CheckRecord::new("lemma1");
    if set.len() <= LEMMA_EXHAUSTIVE_MAX {
        let levels = super::recognize::singular_subspaces(graph, max_k);
        for k in 1..levels.len() {
            let lvl = &levels[k];
            for (i, a) in lvl.iter().enumerate() {
                for b in &lvl[i + 1..] {
                    if a.intersect(field, b).unwrap().rank() == k {
                        lemma1_pair(set, a, b, &mut rec);
                    }
                }
            }
        }
        if rec.checked == 0 {
            return CheckRecord::skipped("lemma1", "no pairs of singular subspaces meeting in a hyperplane");
        }
        return rec.finish();
    }
    let samples = lemma_samples(sampling);
    rec = rec.sampled(sampling.seed, samples);
    let pool = base_pool(set, sampling, 0x6c30);
    let mut picks: Vec<(u32, u32, u64)> = {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0x6c31);
        (0..samples).map(|_| (pool[rng.gen_range(0..pool.len())], 0, rng.gen())).collect()
    };
    let parts: Vec<CheckRecord> = group_by_base(&mut picks)
        .into_par_iter()
        .map(|group| {
            let mut r = CheckRecord::new("lemma1");
            let x = group[0].0;
            let nbrs = graph.neighbours(x as usize);
            for &(_, _, s) in group {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                match random_lemma1_pair(graph, x, &nbrs, max_k, &mut rng) {
                    Some((a, b)) => lemma1_pair(set, &a, &b, &mut r),
                    None => r.count("no-configuration-found", 1),
                }
            }
            r
        })
        .collect();
    parts.into_iter().fold(rec, CheckRecord::merge).finish()
}

/// A random singular k-space A through x and a second one sharing a
/// hyperplane of A.
fn random_lemma1_pair(graph: &Collinearity, x: u32, nbrs: &[u32], max_k: usize, rng: &mut ChaCha8Rng) -> Option<(Subspace, Subspace)> {
    let set = graph.set();
    for _ in 0..32 {
        let k = rng.gen_range(1..=max_k);
        let mut pts = vec![x];
        let mut a = span_of(set, &pts);
        while pts.len() <= k {
            let Some((z, s)) = extend_random(graph, nbrs, &pts, &a, &a, rng) else { break };
            pts.push(z);
            a = s;
        }
        if pts.len() <= k {
            continue;
        }
        let hyper = span_of(set, &pts[..k]);
        if let Some((_, b)) = extend_random(graph, nbrs, &pts[..k], &hyper, &a, rng) {
            return Some((a, b));
        }
    }
    None
}
