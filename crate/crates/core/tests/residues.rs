mod common;

use common::gf;
use mmgeom::constructors::{grassmann_lines, half_spin, segre, veronese};
use mmgeom::mmverify::{self, residue, Collinearity, Invariants, VerifyOptions};
use mmgeom::{Error, MMSet};

fn invariants(set: &MMSet) -> Invariants {
    Invariants::of(&Collinearity::new(set, 10_000))
}

fn residue_at(set: &MMSet, p: usize) -> MMSet {
    residue(&Collinearity::new(set, 10_000), p).unwrap().set
}

#[test]
fn grassmann_residues_are_segre_varieties() {
    for q in [2, 3] {
        let f = gf(q);
        let g5 = grassmann_lines(5, &f).unwrap();
        let s13 = invariants(&segre(1, 3, &f).unwrap());
        for p in [0, 17, g5.len() - 1] {
            assert_eq!(invariants(&residue_at(&g5, p)), s13, "G5,1 over GF({q}) at {p}");
        }
        let g4 = grassmann_lines(4, &f).unwrap();
        assert_eq!(invariants(&residue_at(&g4, 5)), invariants(&segre(1, 2, &f).unwrap()));
    }
}

#[test]
fn segre_residue_invariants_by_hand() {
    let inv = invariants(&residue_at(&grassmann_lines(5, &gf(2)).unwrap(), 0));
    assert_eq!((inv.d, inv.points, inv.lines, inv.symps), (2, 45, 120, 35));
    assert_eq!(inv.lines_per_point.into_iter().collect::<Vec<_>>(), vec![(8, 45)]);
}

#[test]
fn half_spin_residue_is_line_grassmannian() {
    let set = half_spin(&gf(2)).unwrap();
    let expected = invariants(&grassmann_lines(4, &gf(2)).unwrap());
    for p in [0, 1000] {
        assert_eq!(invariants(&residue_at(&set, p)), expected);
    }
}

#[test]
fn residues_satisfy_the_axioms() {
    let f = gf(2);
    for set in [grassmann_lines(5, &f).unwrap(), half_spin(&f).unwrap()] {
        let res = residue_at(&set, 3);
        let report = mmverify::verify(&res, &VerifyOptions::default().all_for_type(res.d())).unwrap();
        assert!(report.passed(), "{}: {:?}", res.family(), report.checks);
    }
}

#[test]
fn residue_frame_lies_in_the_tangent_space() {
    let set = grassmann_lines(4, &gf(3)).unwrap();
    let graph = Collinearity::new(&set, 10_000);
    let r = residue(&graph, 7).unwrap();
    let f = set.field();
    assert!(r.tangent.contains_subspace(f, &r.frame));
    assert!(!r.frame.contains_vec(f, &r.base));
    assert_eq!(r.frame.projdim(), r.tangent.projdim() - 1);
}

#[test]
fn residue_preconditions() {
    let s22 = segre(2, 2, &gf(2)).unwrap();
    assert!(matches!(residue(&Collinearity::new(&s22, 100), 0), Err(Error::Precondition(_))));
    let v2 = veronese(2, &gf(2)).unwrap();
    assert!(matches!(residue(&Collinearity::new(&v2, 100), 0), Err(Error::Precondition(_))));
    let klein = grassmann_lines(3, &gf(2)).unwrap();
    assert!(matches!(residue(&Collinearity::new(&klein, 100), 0), Err(Error::Degenerate(_))));
}
