mod common;

use common::{gf, oracles};
use mmgeom::constructors::*;
use mmgeom::mmverify::{closure_family, same_spans, symp_from_pair, Collinearity, Seeds};
use mmgeom::MMSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn counts(set: &MMSet) -> (u64, usize, usize, u64) {
    (set.len() as u64, set.ambient_dim(), set.d(), set.symps().len() as u64)
}

#[test]
fn veronese_matches_closed_forms() {
    for (n, q) in [(1, 2), (1, 9), (2, 2), (2, 3), (2, 4), (2, 7), (3, 2), (3, 3)] {
        let set = veronese(n, &gf(q)).unwrap();
        assert_eq!(counts(&set), oracles::veronese_counts(n as u32, q as u64), "V{n} over GF({q})");
    }
}

#[test]
fn segre_matches_closed_forms() {
    for (k, l, q) in [(1, 1, 3), (1, 2, 2), (1, 2, 5), (1, 3, 2), (1, 3, 3), (2, 2, 2), (2, 2, 3), (2, 2, 4)] {
        let set = segre(k, l, &gf(q)).unwrap();
        assert_eq!(counts(&set), oracles::segre_counts(k as u32, l as u32, q as u64), "S{k},{l} over GF({q})");
    }
}

#[test]
fn grassmann_matches_closed_forms() {
    for (m, q) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let set = grassmann_lines(m, &gf(q)).unwrap();
        assert_eq!(counts(&set), oracles::grassmann_counts(m as u32, q as u64), "G{m},1 over GF({q})");
    }
}

#[test]
fn small_members_are_not_proper() {
    assert_eq!(veronese(1, &gf(2)).unwrap().symps().len(), 1);
    assert_eq!(segre(1, 1, &gf(2)).unwrap().symps().len(), 1);
    let klein = grassmann_lines(3, &gf(2)).unwrap();
    assert_eq!((klein.len(), klein.symps().len()), (35, 1));
}

#[test]
fn half_spin_gf2_matches_closed_forms() {
    let set = half_spin(&gf(2)).unwrap();
    assert_eq!(counts(&set), oracles::half_spin_counts(2));
    let per_symp = oracles::split_points(6, 2);
    assert!((0..set.symps().len()).all(|s| set.symp_points(s).len() as u64 == per_symp));
}

#[test]
fn unsupported_parameters_are_rejected() {
    assert!(veronese(0, &gf(2)).is_err());
    assert!(segre(3, 2, &gf(2)).is_err());
    assert!(grassmann_lines(1, &gf(2)).is_err());
    assert!(half_spin(&gf(4)).is_err());
    assert!(matches!(e6_variety(&gf(3)), Err(mmgeom::Error::Unsupported(m)) if m == "e6 supported only for q=2"));
}

#[test]
fn e6_scan_agrees_with_bitsliced_oracle() {
    let oracle = oracles::e6_points_oracle();
    assert_eq!(oracle.len() as u64, oracles::e6_counts(2).0);
    assert_eq!(e6::e6_points_gf2(), oracle);
}

#[test]
fn e6_derivative_examples() {
    for q in [2, 3, 4, 5] {
        let f = gf(q);
        let mut x = vec![0; 27];
        assert!(e6_derivative(&f, &x).iter().all(|&c| c == 0));
        x[0] = 1;
        assert!(e6_derivative(&f, &x).iter().all(|&c| c == 0), "rank one matrix unit");
        assert_eq!(e6_cubic(&f, &x), 0);
        let mut id = vec![0; 27];
        for i in [0, 4, 8] {
            id[i] = 1;
        }
        let g = e6_derivative(&f, &id);
        assert!(g[..9].iter().enumerate().all(|(i, &c)| c == (i % 4 == 0) as u8));
        assert!(g[9..].iter().all(|&c| c == 0));
        assert_eq!(e6_cubic(&f, &id), 1);
    }
}

#[test]
fn closure_reproduces_constructor_symps() {
    let f = gf(2);
    for set in [segre(1, 2, &f).unwrap(), segre(1, 3, &f).unwrap(), segre(2, 2, &f).unwrap(), grassmann_lines(4, &f).unwrap(), grassmann_lines(5, &f).unwrap()] {
        let graph = Collinearity::new(&set, 10_000);
        let fam = closure_family(&graph, &Seeds::All).unwrap();
        assert!(same_spans(&fam, set.symps()), "{}", set.family());
        assert!(fam.iter().zip(set.symps()).all(|(a, b)| a.form() == b.form() || a.span() != b.span()));
    }
    let set = segre(1, 2, &gf(3)).unwrap();
    let graph = Collinearity::new(&set, 10_000);
    assert!(same_spans(&closure_family(&graph, &Seeds::All).unwrap(), set.symps()));
}

#[test]
fn sampled_half_spin_closures_are_constructor_symps() {
    let set = half_spin(&gf(2)).unwrap();
    let graph = Collinearity::new(&set, 10_000);
    let spans: std::collections::HashSet<_> = set.symps().iter().map(|s| s.span().clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tested = 0;
    while tested < 300 {
        let (x, y) = (rng.gen_range(0..set.len()), rng.gen_range(0..set.len()));
        if x == y || graph.collinear(x, y) {
            continue;
        }
        let s = symp_from_pair(&graph, x, y).unwrap();
        assert!(spans.contains(s.span()));
        tested += 1;
    }
    let (x, y) = (0, graph.neighbours(0)[0] as usize);
    assert!(symp_from_pair(&graph, x, y).is_err());
}
