//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{gf, oracles};
use mmgeom::constructors::{e6, e6_variety, grassmann_lines, half_spin, segre, veronese};
use mmgeom::mmverify::{
    self, closure_family, recheck, recognize_grassmann, residue, same_spans, Check, Collinearity, Invariants, Seeds,
    VerificationReport, VerifyOptions,
};
use mmgeom::quadform::{check_quadric_lemmas, split_form, LemmaOptions};
use mmgeom::{CheckRecord, MMSet, QuadraticForm, Quadric, Status, Symp, Witness};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Member {
    set: MMSet,
    report: VerificationReport,
}

impl Member {
    fn new(set: MMSet) -> Member {
        let opts = VerifyOptions::default().all_for_type(set.d());
        let report = mmverify::verify(&set, &opts).expect("verification runs");
        Member { set, report }
    }

    fn name(&self) -> String {
        format!("{}(GF({}))", self.set.family(), self.set.field().q())
    }

    fn rec(&self, check: Check) -> &CheckRecord {
        self.report.check(check.name()).expect("check was run")
    }
}

struct Fixtures {
    severi: Vec<Member>,
    others: Vec<Member>,
    /// Small members over GF(3), all exhaustive.
    odd: Vec<Member>,
    e6: Member,
    d5_gf3: Member,
}

impl Fixtures {
    fn small(&self) -> impl Iterator<Item = &Member> {
        self.severi.iter().chain(&self.others).chain(&self.odd)
    }

    fn all(&self) -> impl Iterator<Item = &Member> {
        self.small().chain([&self.e6, &self.d5_gf3])
    }
}

fn build() -> Fixtures {
    let f2 = gf(2);
    let f3 = gf(3);
    let severi = [veronese(2, &f2), segre(2, 2, &f2), grassmann_lines(5, &f2)];
    let others = [segre(1, 2, &f2), segre(1, 3, &f2), grassmann_lines(4, &f2), half_spin(&f2)];
    let odd = [veronese(2, &f3), segre(1, 2, &f3), segre(1, 3, &f3), segre(2, 2, &f3), grassmann_lines(4, &f3)];
    let members = |v: [mmgeom::Result<MMSet>; 3]| v.into_iter().map(|s| Member::new(s.unwrap())).collect::<Vec<_>>();
    let severi = members(severi);
    let others = others.into_iter().map(|s| Member::new(s.unwrap())).collect();
    let odd = odd.into_iter().map(|s| Member::new(s.unwrap())).collect();
    let e6 = Member::new(e6_variety(&f2).unwrap());
    // the axioms and smoothness on the larger half-spin set, sampled
    let d5 = half_spin(&f3).unwrap();
    let opts = VerifyOptions {
        checks: vec![Check::Structure, Check::Mm1, Check::Mm2, Check::Mm3, Check::Wrinkles],
        ..VerifyOptions::default()
    };
    let report = mmverify::verify(&d5, &opts).unwrap();
    Fixtures { severi, others, odd, e6, d5_gf3: Member { set: d5, report } }
}

fn only_tangent_dim(m: &Member, dim: isize, points: u64) -> Result<(), String> {
    let t = &m.report.summary.tangent_dims;
    ensure(t.len() == 1 && t.get(&dim) == Some(&points), || format!("{}: T_x histogram {t:?}, wanted {{{dim}: {points}}}", m.name()))
}

fn severi_numerics(fx: &Fixtures) -> Outcome {
    let mut got = Vec::new();
    for (m, n) in fx.severi.iter().chain([&fx.e6]).zip([5, 8, 14, 26]) {
        let (d, len) = (m.set.d(), m.set.len() as u64);
        ensure(m.set.ambient_dim() == n && n == 3 * d + 2, || format!("{}: N = {}", m.name(), m.set.ambient_dim()))?;
        let exhaustive = m.rec(Check::Mm3).exhaustive;
        let checked = if exhaustive { len } else { m.rec(Check::Mm3).checked };
        ensure(exhaustive || std::ptr::eq(m, &fx.e6), || format!("{}: tangent scan sampled", m.name()))?;
        only_tangent_dim(m, 2 * d as isize, checked)?;
        got.push(format!("N={n} T={}", 2 * d));
    }
    ensure(fx.e6.set.len() as u64 == oracles::e6_counts(2).0, || "E6 point count".into())?;
    Ok(format!("{} (E6 tangent spaces sampled at {} points)", got.join(", "), fx.e6.rec(Check::Mm3).checked))
}

fn non_severi(fx: &Fixtures) -> Outcome {
    let mut got = Vec::new();
    for (m, n) in fx.others.iter().zip([5, 7, 9, 15]) {
        ensure(m.set.ambient_dim() == n, || format!("{}: N = {}", m.name(), m.set.ambient_dim()))?;
        for c in [Check::Structure, Check::Mm1, Check::Mm2, Check::Mm3] {
            let r = m.rec(c);
            ensure(r.status == Status::Pass && r.exhaustive, || format!("{}: {} {:?}", m.name(), r.name, r.status))?;
        }
        got.push(format!("N={n}"));
    }
    Ok(got.join(", "))
}

fn mm_axioms(fx: &Fixtures) -> Outcome {
    let mut sampled = 0;
    for m in fx.all() {
        for c in [Check::Structure, Check::Mm1, Check::Mm2, Check::Mm3] {
            let r = m.rec(c);
            ensure(r.passed() && r.violations == 0 && r.witnesses.is_empty(), || format!("{}: {} {r:?}", m.name(), r.name))?;
            if m.set.len() <= 10_000 {
                ensure(r.exhaustive, || format!("{}: {} not exhaustive", m.name(), r.name))?;
            } else if !r.exhaustive {
                ensure(r.checked >= 100_000 && r.seed.is_some(), || format!("{}: {} only {} samples", m.name(), r.name, r.checked))?;
                sampled += 1;
            }
        }
    }
    let big = fx.all().filter(|m| m.set.len() > 10_000).count();
    Ok(format!("{} sets with zero violations; {big} beyond 1e4 points, {sampled} of their records sampled at >= 1e5 probes", fx.all().count()))
}

fn lemma_suite(fx: &Fixtures) -> Outcome {
    let mut exhaustive = 0;
    let mut sampled = 0;
    for m in fx.small().chain([&fx.e6]) {
        for c in [Check::Quadrangle, Check::LemmaSubspace, Check::Lemma1] {
            let r = m.rec(c);
            ensure(r.passed() && r.violations == 0, || format!("{}: {} {r:?}", m.name(), r.name))?;
            if m.set.ambient_dim() <= 5 {
                ensure(r.exhaustive, || format!("{}: {} sampled in P^5", m.name(), r.name))?;
            }
            if r.exhaustive {
                exhaustive += 1;
            } else {
                ensure(r.checked >= 10_000, || format!("{}: {} only {} samples", m.name(), r.name, r.checked))?;
                sampled += 1;
            }
        }
    }
    let mut quadric = 0;
    for q in [2, 3] {
        for d in 2..=6 {
            let quad = Quadric::new(split_form(d, &gf(q)).unwrap()).unwrap();
            let recs = check_quadric_lemmas(&quad, &LemmaOptions::default());
            for r in &recs {
                ensure(r.passed(), || format!("{} on Q({d}, {q}): {r:?}", r.name))?;
                // ambient at most P^5 must be exhaustive, anything larger at least 1e4 samples
                ensure(r.exhaustive || quad.n() > 6, || format!("{} on Q({d}, {q}) sampled", r.name))?;
                ensure(r.exhaustive || r.checked >= 10_000, || format!("{} on Q({d}, {q}): {} samples", r.name, r.checked))?;
                quadric += 1;
            }
        }
    }
    Ok(format!("{exhaustive} exhaustive and {sampled} sampled variety records, {quadric} quadric lemma records"))
}

fn smoothness(fx: &Fixtures) -> Outcome {
    for m in fx.all() {
        let r = m.rec(Check::Wrinkles);
        ensure(r.passed() && r.witnesses.is_empty(), || format!("{}: {r:?}", m.name()))?;
        if m.set.len() <= 10_000 {
            ensure(r.exhaustive && r.checked == m.set.len() as u64, || format!("{}: not every point checked", m.name()))?;
        } else {
            ensure(r.checked >= 1000, || format!("{}: {} points", m.name(), r.checked))?;
        }
    }
    Ok(format!("no wrinkles; E6 {} points, D5,5(GF(3)) {} points", fx.e6.rec(Check::Wrinkles).checked, fx.d5_gf3.rec(Check::Wrinkles).checked))
}

fn invariants(set: &MMSet) -> Invariants {
    Invariants::of(&Collinearity::new(set, 10_000))
}

fn residue_tower(fx: &Fixtures) -> Outcome {
    let t = Instant::now();
    let find = |family: &str| fx.others.iter().chain(&fx.severi).find(|m| m.set.family() == family).map(|m| &m.set).unwrap();
    let d5 = find("half-spin D5,5");
    let pairs = [
        (&fx.e6.set, d5),
        (d5, find("grassmann G4,1")),
        (find("grassmann G5,1"), find("segre S1,3")),
        (find("grassmann G4,1"), find("segre S1,2")),
    ];
    let mut got = Vec::new();
    for (from, to) in pairs {
        let r = residue(&Collinearity::new(from, 10_000), 0).map_err(|e| format!("{}: {e}", from.family()))?;
        let (a, b) = (invariants(&r.set), invariants(to));
        ensure(a == b, || format!("residue of {}: {a:?}, expected {b:?}", from.family()))?;
        got.push(format!("{} -> {} ({} points, {} lines)", from.family(), to.family(), a.points, a.lines));
    }
    Ok(format!("{} in {:.0?}", got.join("; "), t.elapsed()))
}

fn recognition() -> Outcome {
    let mut got = Vec::new();
    for m in [5, 4] {
        let set = grassmann_lines(m, &gf(2)).unwrap();
        let r = recognize_grassmann(&Collinearity::new(&set, 10_000)).map_err(|e| e.to_string())?;
        let dim = r.counts["projective-dimension"];
        ensure(r.status == Status::Pass && dim == m as u64, || format!("G{m},1: {r:?}"))?;
        got.push(format!("G{m},1 -> PG({dim}, 2)"));
    }
    Ok(got.join(", "))
}

fn oracle_cross_checks(fx: &Fixtures) -> Outcome {
    for m in &fx.severi[1..] {
        let fam = closure_family(&Collinearity::new(&m.set, 10_000), &Seeds::All).map_err(|e| e.to_string())?;
        ensure(same_spans(&fam, m.set.symps()), || format!("{}: closure family differs", m.name()))?;
    }
    let scan = e6::e6_points_gf2();
    let oracle = oracles::e6_points_oracle();
    ensure(scan == oracle, || format!("E6 evaluators disagree: {} vs {} points", scan.len(), oracle.len()))?;
    let built: Vec<u64> = {
        let mut k = fx.e6.set.keys().to_vec();
        k.sort_unstable();
        k
    };
    ensure(built == oracle, || "E6 constructor points differ from the oracle".into())?;
    Ok(format!("closure spans equal for S2,2 and G5,1; E6 sets equal ({} points)", oracle.len()))
}

/// Runs the full suite on a corrupted set and rechecks every witness of `check`.
fn designated_failure(set: &MMSet, check: &str) -> Result<usize, String> {
    let r = mmverify::verify(set, &VerifyOptions::default().all_for_type(set.d())).map_err(|e| e.to_string())?;
    let rec = r.check(check).unwrap();
    ensure(rec.status == Status::Fail && !rec.witnesses.is_empty(), || format!("{check} did not fail: {rec:?}"))?;
    let graph = Collinearity::new(set, 10_000);
    for w in &rec.witnesses {
        ensure(recheck(&graph, w) == Some(true), || format!("witness does not recheck: {w:?}"))?;
    }
    Ok(rec.witnesses.len())
}

fn negative_controls() -> Outcome {
    let f2 = gf(2);
    let s22 = segre(2, 2, &f2).unwrap();
    let n1 = designated_failure(&s22.without_symps(&[0]).unwrap(), "mm1")?;
    let g4 = grassmann_lines(4, &f2).unwrap();
    let n2 = designated_failure(&g4.without_points(&[0]).unwrap(), "structure")?;
    let v2 = veronese(2, &f2).unwrap();
    let basis: Vec<Vec<u8>> = (0..3).map(|i| v2.point(i).to_vec()).collect();
    let form = QuadraticForm::from_terms(f2, 3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]);
    let fake = Symp::from_basis(&f2, v2.n(), &basis, &form).map_err(|e| e.to_string())?;
    let n3 = designated_failure(&v2.with_extra_symp(fake).unwrap(), "mm2")?;
    // witnesses of the corrupted sets are not violations of the intact ones
    let r = mmverify::verify(&s22.without_symps(&[0]).unwrap(), &VerifyOptions::default()).unwrap();
    let graph = Collinearity::new(&s22, 10_000);
    ensure(r.check("mm1").unwrap().witnesses.iter().all(|w| recheck(&graph, w) == Some(false)), || "intact set rechecks as broken".into())?;
    ensure(matches!(r.check("mm1").unwrap().witnesses[0], Witness::OrphanPair { .. }), || "unexpected witness kind".into())?;
    Ok(format!("deleted symp -> mm1 ({n1} witnesses), deleted point -> structure ({n2}), fabricated symp -> mm2 ({n3}); all rechecked"))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let fx = build();
    eprintln!("fixtures built and verified in {:.0?}", t.elapsed());
    let criteria: [(&str, &dyn Fn() -> Outcome); 9] = [
        ("severi-numerics", &|| severi_numerics(&fx)),
        ("non-severi-members", &|| non_severi(&fx)),
        ("mm-axioms", &|| mm_axioms(&fx)),
        ("lemma-suite", &|| lemma_suite(&fx)),
        ("smoothness", &|| smoothness(&fx)),
        ("residue-tower", &|| residue_tower(&fx)),
        ("recognition", &recognition),
        ("oracle-cross-checks", &|| oracle_cross_checks(&fx)),
        ("negative-controls", &negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.0?}", criteria.len() - failed, criteria.len(), t.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
