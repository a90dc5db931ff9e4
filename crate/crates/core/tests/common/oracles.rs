//! Independent reference values: closed-form counts and a second E6
//! evaluator that shares no code with the library.

use rayon::prelude::*;

pub fn pg_points(n: u32, q: u64) -> u64 {
    (q.pow(n + 1) - 1) / (q - 1)
}

/// Number of k-dimensional subspaces of an n-dimensional space, as a product.
pub fn gauss(n: u32, k: u32, q: u64) -> u64 {
    let num: u128 = (0..k).map(|i| (q as u128).pow(n - i) - 1).product();
    let den: u128 = (0..k).map(|i| (q as u128).pow(i + 1) - 1).product();
    (num / den) as u64
}

/// Points of the hyperbolic quadric of P^(2m-1).
pub fn hyperbolic_points(m: u32, q: u64) -> u64 {
    (q.pow(m - 1) + 1) * (q.pow(m) - 1) / (q - 1)
}

/// Points of the parabolic quadric of P^(2m).
pub fn parabolic_points(m: u32, q: u64) -> u64 {
    (q.pow(2 * m) - 1) / (q - 1)
}

/// Points of the split quadric of P^(d+1).
pub fn split_points(d: u32, q: u64) -> u64 {
    if d % 2 == 0 {
        hyperbolic_points(d / 2 + 1, q)
    } else {
        parabolic_points((d + 1) / 2, q)
    }
}

/// Expected (|X|, N, d, |Xi|) per family.
pub fn veronese_counts(n: u32, q: u64) -> (u64, usize, usize, u64) {
    (pg_points(n, q), (n * (n + 3) / 2) as usize, 1, gauss(n + 1, 2, q))
}

pub fn segre_counts(k: u32, l: u32, q: u64) -> (u64, usize, usize, u64) {
    (pg_points(k, q) * pg_points(l, q), (k * l + k + l) as usize, 2, gauss(k + 1, 2, q) * gauss(l + 1, 2, q))
}

pub fn grassmann_counts(m: u32, q: u64) -> (u64, usize, usize, u64) {
    (gauss(m + 1, 2, q), ((m * m + m - 2) / 2) as usize, 4, gauss(m + 1, 4, q))
}

/// One class of generators of Q+(9, q); one symp per point of that quadric.
pub fn half_spin_counts(q: u64) -> (u64, usize, usize, u64) {
    ((1..5).map(|i| q.pow(i) + 1).product(), 15, 6, hyperbolic_points(5, q))
}

pub fn e6_counts(q: u64) -> (u64, usize, usize, u64) {
    let pts = (q.pow(12) - 1) * (q.pow(9) - 1) / ((q.pow(4) - 1) * (q - 1));
    (pts, 26, 8, pts)
}

// Bitsliced evaluation of d(x) = det A + det B + det C + Tr(ABC) over GF(2),
// 64 vectors per word. Determinants use the Leibniz permutation sum and the
// trace the explicit triple sum, unlike the cofactor code in the library.

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

fn cubic_lanes(x: &[u64; 27]) -> u64 {
    let e = |s: usize, r: usize, c: usize| x[9 * s + 3 * r + c];
    let mut acc = 0u64;
    for s in 0..3 {
        for p in PERMS {
            // signs vanish in characteristic 2
            acc ^= e(s, 0, p[0]) & e(s, 1, p[1]) & e(s, 2, p[2]);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                acc ^= e(0, i, j) & e(1, j, k) & e(2, k, i);
            }
        }
    }
    acc
}

/// Keys (coordinate 0 as the most significant of 27 bits) of all nonzero
/// vectors over GF(2) whose derivative functional vanishes. d is square-free
/// in every coordinate, so the partial derivative in direction j is the
/// difference d(x + e_j) - d(x).
pub fn e6_points_oracle() -> Vec<u64> {
    // lanes run over the low 6 key bits, i.e. coordinates 21..27
    let mut lane_pattern = [0u64; 6];
    for lane in 0..64u64 {
        for b in 0..6 {
            if lane >> b & 1 == 1 {
                lane_pattern[b] |= 1 << lane;
            }
        }
    }
    let mut out: Vec<u64> = (0u64..1 << 21)
        .into_par_iter()
        .flat_map_iter(|block| {
            let mut x = [0u64; 27];
            for (i, w) in x.iter_mut().enumerate() {
                let bit = 26 - i;
                *w = if bit < 6 { lane_pattern[bit] } else if (block << 6) >> bit & 1 == 1 { !0 } else { 0 };
            }
            let base = cubic_lanes(&x);
            let mut alive = !0u64;
            for j in 0..27 {
                x[j] = !x[j];
                alive &= !(cubic_lanes(&x) ^ base);
                x[j] = !x[j];
                if alive == 0 {
                    break;
                }
            }
            if block == 0 {
                alive &= !1;
            }
            (0..64u64).filter(move |l| alive >> l & 1 == 1).map(move |l| block << 6 | l)
        })
        .collect();
    out.sort_unstable();
    out
}
