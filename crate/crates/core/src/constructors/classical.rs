//! Veronese, Segre and line Grassmann varieties.

use crate::error::{Error, Result};
use crate::gfq::{Elem, Field};
use crate::linproj::{all_points, for_each_subspace, normalize, ProjPoint};
use crate::mmset::{MMSet, Symp};
use crate::quadform::QuadraticForm;

use super::assemble;

fn point(field: &Field, mut v: Vec<Elem>) -> ProjPoint {
    normalize(field, &mut v);
    ProjPoint::from_normalized(v)
}

fn veronese_map(field: &Field, x: &[Elem]) -> Vec<Elem> {
    let n = x.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(field.mul(x[i], x[j]));
        }
    }
    out
}

/// The polarisation V(u+v) - V(u) - V(v).
fn veronese_polar(field: &Field, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
    let n = u.len();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(field.add(field.mul(u[i], v[j]), field.mul(u[j], v[i])));
        }
    }
    out
}

/// The Veronese variety of P^n: all products x_i x_j, with one conic per line.
pub fn veronese(n: usize, field: &Field) -> Result<MMSet> {
    if !(1..=3).contains(&n) {
        return Err(Error::Precondition(format!("veronese needs 1 <= n <= 3, got {n}")));
    }
    let len = (n + 1) * (n + 2) / 2;
    let points = all_points(field, n + 1).iter().map(|p| point(field, veronese_map(field, p.coords()))).collect();
    // s^2 V(u) + st W + t^2 V(v) has coordinates (a, b, c) with b^2 = ac
    let conic = QuadraticForm::from_terms(*field, 3, &[(1, 1, 1), (0, 2, field.neg(1))]);
    let mut symps = Vec::new();
    let mut err = None;
    for_each_subspace(field, n + 1, 2, |line| {
        let (u, v) = (line.row(0), line.row(1));
        let basis = vec![veronese_map(field, u), veronese_polar(field, u, v), veronese_map(field, v)];
        match Symp::from_basis(field, len, &basis, &conic) {
            Ok(s) => symps.push(s),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    assemble(format!("veronese V{n}"), *field, len, 1, points, symps)
}

fn tensor(field: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    x.iter().flat_map(|&a| y.iter().map(move |&b| field.mul(a, b))).collect()
}

/// The Segre variety of P^k x P^l, coordinate x_i y_j at index i(l+1)+j.
pub fn segre(k: usize, l: usize, field: &Field) -> Result<MMSet> {
    if !(1 <= k && k <= l && k + l <= 4) {
        return Err(Error::Precondition(format!("segre needs 1 <= k <= l and k + l <= 4, got ({k}, {l})")));
    }
    let len = (k + 1) * (l + 1);
    let left = all_points(field, k + 1);
    let right = all_points(field, l + 1);
    let points = left
        .iter()
        .flat_map(|x| right.iter().map(move |y| (x, y)))
        .map(|(x, y)| point(field, tensor(field, x.coords(), y.coords())))
        .collect();
    // coordinates of a u0 v0 + b u0 v1 + c u1 v0 + d u1 v1 are rank one iff ad = bc
    let hyperbolic = QuadraticForm::from_terms(*field, 4, &[(0, 3, 1), (1, 2, field.neg(1))]);
    let mut lines_l = Vec::new();
    for_each_subspace(field, k + 1, 2, |s| lines_l.push(s));
    let mut lines_r = Vec::new();
    for_each_subspace(field, l + 1, 2, |s| lines_r.push(s));
    let mut symps = Vec::new();
    for a in &lines_l {
        for b in &lines_r {
            let basis: Vec<Vec<Elem>> = [(0, 0), (0, 1), (1, 0), (1, 1)]
                .iter()
                .map(|&(i, j)| tensor(field, a.row(i), b.row(j)))
                .collect();
            symps.push(Symp::from_basis(field, len, &basis, &hyperbolic)?);
        }
    }
    assemble(format!("segre S{k},{l}"), *field, len, 2, points, symps)
}

/// Plucker coordinates p_ab = u_a v_b - u_b v_a, pairs a < b in lexicographic order.
fn plucker(field: &Field, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
    let n = u.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(field.sub(field.mul(u[a], v[b]), field.mul(u[b], v[a])));
        }
    }
    out
}

/// The Plucker image of the lines of P^m, with one Klein quadric per solid.
pub fn grassmann_lines(m: usize, field: &Field) -> Result<MMSet> {
    if !(2..=5).contains(&m) {
        return Err(Error::Precondition(format!("grassmann needs 2 <= m <= 5, got {m}")));
    }
    let len = (m + 1) * m / 2;
    let mut points = Vec::new();
    for_each_subspace(field, m + 1, 2, |s| points.push(point(field, plucker(field, s.row(0), s.row(1)))));
    // in the basis w0w1, w0w2, w0w3, w1w2, w1w3, w2w3 the Klein quadric is
    // c0 c5 - c1 c4 + c2 c3
    let klein = QuadraticForm::from_terms(*field, 6, &[(0, 5, 1), (1, 4, field.neg(1)), (2, 3, 1)]);
    let mut solids = Vec::new();
    for_each_subspace(field, m + 1, 4, |s| solids.push(s));
    let mut symps = Vec::with_capacity(solids.len());
    for w in &solids {
        let mut basis = Vec::with_capacity(6);
        for a in 0..4 {
            for b in a + 1..4 {
                basis.push(plucker(field, w.row(a), w.row(b)));
            }
        }
        symps.push(Symp::from_basis(field, len, &basis, &klein)?);
    }
    assemble(format!("grassmann G{m},1"), *field, len, 4, points, symps)
}
