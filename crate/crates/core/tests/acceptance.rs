//! Acceptance criteria 1-10. Runs without the libtest harness so that the
//! PASS/FAIL lines always reach the output; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use weilrank::classify::{
    classify, classify_auto, classify_with_oracle, is_sufficiently_large, sufficiency_degree,
    ClassificationReport,
};
use weilrank::exact::{is_irreducible, real_root_count, IntPoly};
use weilrank::newton::{classify_newton, newton_polygon, NewtonType};
use weilrank::relfinder::relation::lift_to_roots;
use weilrank::relfinder::{relation_lattice, replay, verify_relation, RelationConfig, Verdict};
use weilrank::search::{
    construct_totally_real_cubic, enumerate_weil, find_non_neat_sextics, NonNeatSpec, SearchError,
    SearchSpec,
};
use weilrank::subfields::QuadraticElement;
use weilrank::weil::{base_change, normalized_square_torsion, validate, WeilPolynomial};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Classified instances shared between criteria.
#[derive(Default)]
struct Corpus {
    /// (polynomial, report over the field it was classified over)
    items: Vec<(WeilPolynomial, ClassificationReport)>,
    disagreements: usize,
    unsaturated: usize,
}

fn cfg() -> RelationConfig {
    RelationConfig::default()
}

fn ceil_two_sqrt(q: i64) -> i64 {
    (0..).find(|s| s * s >= 4 * q).unwrap()
}

fn g1_corpus() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in [2i64, 3, 4, 5, 7, 8, 9, 25] {
        let amax = ceil_two_sqrt(q) + 1;
        for a in -amax..=amax {
            out.push((q, a));
        }
    }
    out
}

fn quadratic(q: i64, a: i64) -> IntPoly {
    IntPoly::from_i64s(&[q, -a, 1])
}

fn criterion_1() -> Outcome {
    let (mut n, mut bad, mut accepted, mut boundary) = (0, Vec::new(), 0, 0);
    for (q, a) in g1_corpus() {
        n += 1;
        let ours = validate(&quadratic(q, a), &BigInt::from(q)).is_ok();
        // floating roots of t^2 - a t + q: both of absolute value sqrt q?
        let disc = Complex64::new((a * a - 4 * q) as f64, 0.0).sqrt();
        let roots = [(a as f64 + disc) / 2.0, (a as f64 - disc) / 2.0];
        let numeric = roots
            .iter()
            .all(|r| (r.norm_sqr() / q as f64 - 1.0).abs() < 1e-9);
        let rule = a * a <= 4 * q;
        if a * a == 4 * q {
            boundary += 1;
        }
        accepted += usize::from(ours);
        if ours != numeric || ours != rule {
            bad.push((q, a));
        }
    }
    outcome(bad.is_empty(), format!("{n} quadratics, {accepted} accepted, {boundary} on the boundary a^2 = 4q, mismatches {bad:?}"))
}

fn criterion_2() -> Outcome {
    let (mut n, mut bad) = (0, Vec::new());
    for (q, a) in g1_corpus() {
        let Ok(w) = validate(&quadratic(q, a), &BigInt::from(q)) else {
            continue;
        };
        n += 1;
        let p = w.p().to_i64().unwrap();
        let labels = classify_newton(&newton_polygon(&w), 1).labels;
        let ordinary = labels.contains(&NewtonType::Ordinary);
        let supersingular = labels.contains(&NewtonType::Supersingular);
        let torsion = !normalized_square_torsion(&w).is_empty();
        if ordinary != (a % p != 0) || supersingular != torsion {
            bad.push((q, a));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{n} valid elliptic polynomials, mismatches {bad:?}"),
    )
}

fn sextic_box(q: u64, bounds: Vec<Option<u64>>) -> Vec<WeilPolynomial> {
    let mut spec = SearchSpec::new(3, q);
    spec.bounds = bounds;
    enumerate_weil(&spec).expect("enumeration")
}

fn criterion_3(corpus: &mut Corpus) -> Outcome {
    let boxes: [(u64, Vec<Option<u64>>, &str); 3] = [
        (4, vec![Some(6)], "full box |a1| <= 6"),
        (9, vec![Some(9)], "full box |a1| <= 9"),
        (
            25,
            vec![Some(15), Some(10), Some(25)],
            "sub-box |a1| <= 15, |a2| <= 10, |a3| <= 25",
        ),
    ];
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for (q, bounds, label) in boxes {
        let all = sextic_box(q, bounds);
        let (
            mut suff,
            mut nonneat,
            mut nonintegral,
            mut flagged,
            mut biconditional_bad,
            mut dis,
            mut unsat,
            mut errors,
        ) = (0, 0, 0, 0, 0, 0, 0, 0);
        for w in all.iter().filter(|w| is_sufficiently_large(w)) {
            suff += 1;
            let r = match classify_with_oracle(w, &cfg()) {
                Ok(r) => r,
                Err(e) => {
                    errors += 1;
                    failures.push(format!("q={q} {:?}: {e}", w.poly().coeffs()));
                    continue;
                }
            };
            let all3 = r.condition_i && r.condition_ii && r.condition_iii;
            nonneat += usize::from(!r.neat);
            if r.newton_integral {
                if r.neat == all3 {
                    biconditional_bad += 1;
                    failures.push(format!(
                        "q={q} {:?}: neat={} conditions={:?}",
                        w.poly().coeffs(),
                        r.neat,
                        r.conditions()
                    ));
                }
            } else {
                nonintegral += 1;
                flagged += usize::from(!r.neat && !all3);
            }
            if r.oracle_disagrees() {
                dis += 1;
                failures.push(format!(
                    "q={q} {:?}: classifier {} oracle {:?}",
                    w.poly().coeffs(),
                    r.rank,
                    r.oracle.as_ref().map(|o| o.rank)
                ));
            }
            if r.oracle.as_ref().is_some_and(|o| !o.saturated) {
                unsat += 1;
            }
            if let Err(e) = r.check_invariants() {
                failures.push(format!("q={q} {:?}: {e}", w.poly().coeffs()));
            }
            corpus.items.push((w.clone(), r));
        }
        corpus.disagreements += dis;
        corpus.unsaturated += unsat;
        lines.push(format!(
            "q={q} {label}: {} validated, {suff} sufficiently large, {nonneat} non-neat, {dis} disagreements, {biconditional_bad} biconditional violations, {errors} errors; {nonintegral} with non-integral Newton polygon (not threefold characteristic polynomials; {flagged} of them non-neat with (i),(ii) but not (iii)), {unsat} unsaturated oracle lattices",
            all.len()
        ));
    }
    for f in failures.iter().take(10) {
        lines.push(format!("  {f}"));
    }
    let pass = failures.is_empty() && corpus.unsaturated == 0;
    outcome(pass, lines.join("\n    "))
}

fn verify_instance(inst: &weilrank::search::NonNeatInstance) -> Result<String, String> {
    let w = &inst.weil;
    let q = w.q().clone();
    let poly = w.poly();
    if !is_irreducible(poly) {
        return Err("reducible".into());
    }
    if real_root_count(poly) != 0 {
        return Err("has real roots: not CM".into());
    }
    let np = newton_polygon(w);
    let half = BigRational::new(1.into(), 2.into());
    if !classify_newton(&np, 3)
        .labels
        .contains(&NewtonType::AlmostOrdinary)
        || np.length(&half) != 2
    {
        return Err(format!("Newton polygon {:?}", np.segments));
    }
    let c = inst.witness.c();
    let q3 = QuadraticElement::rational(BigRational::from_integer(q.pow(3)), &inst.witness.m);
    if c.mul(c) != q3 || !inst.witness.reexpands_to(poly) {
        return Err("conjugate-cubic witness fails".into());
    }
    let r = &inst.report;
    let wb = base_change(w, r.extension_degree).map_err(|e| e.to_string())?;
    let lat = relation_lattice(&wb, &cfg()).map_err(|e| e.to_string())?;
    let mut rs = lat.roots.clone();
    let reps = lat.reps.clone();
    let unit = lat
        .basis
        .iter()
        .find(|v| v.iter().all(|x| x.abs() == 1))
        .ok_or("no relation with exponents +-1")?;
    let (e, m) = lift_to_roots(&rs, &reps, unit);
    let cert = match verify_relation(&mut rs, wb.q(), &e, m, &cfg()).map_err(|e| e.to_string())? {
        Verdict::Holds(c) => c,
        Verdict::Refuted(x) => return Err(format!("relation refuted: {x:?}")),
    };
    if !replay(&wb, &cert, &cfg()).map_err(|e| e.to_string())? {
        return Err("certificate does not replay".into());
    }
    let o = r.oracle.as_ref().ok_or("no oracle check")?;
    if r.neat || r.rank != 2 || o.rank != 2 || !o.agrees {
        return Err(format!("neat={} rank={} oracle={}", r.neat, r.rank, o.rank));
    }
    Ok(format!(
        "{:?} over q={q}: B = Q(sqrt {}), G(0) = {}, relation {unit:?} certified at {} bits, oracle rank 2, sufficiency degree {}",
        poly.coeffs(),
        inst.witness.m,
        c.a0,
        cert.precision,
        r.sufficiency_degree
    ))
}

fn criterion_4(corpus: &mut Corpus, found: &mut Vec<weilrank::search::NonNeatInstance>) -> Outcome {
    let mut lines = Vec::new();
    let mut verified = 0;
    let mut failures = 0;
    for (p, qs) in [(3u64, vec![9u64, 81, 729, 6561]), (7, vec![49, 2401])] {
        for q in qs {
            let t = Instant::now();
            let spec = NonNeatSpec {
                p,
                q,
                m: -1,
                a_norm_bound: None,
                limit: Some(1),
            };
            match find_non_neat_sextics(&spec) {
                Ok(v) if v.is_empty() => lines.push(format!(
                    "p={p} q={q}: none in the box ({:.1?})",
                    t.elapsed()
                )),
                Ok(v) => {
                    for inst in v {
                        match verify_instance(&inst) {
                            Ok(s) => {
                                verified += 1;
                                lines.push(format!("p={p} q={q}: {s} ({:.1?})", t.elapsed()));
                            }
                            Err(e) => {
                                failures += 1;
                                lines.push(format!("p={p} q={q}: FAILED {e}"));
                            }
                        }
                        if inst.report.oracle_disagrees() {
                            corpus.disagreements += 1;
                        }
                        corpus.items.push((inst.weil.clone(), inst.report.clone()));
                        found.push(inst);
                    }
                }
                Err(SearchError::QNotSquare(_)) | Err(SearchError::BSplitAtP { .. }) => {
                    unreachable!("admissible")
                }
                Err(e) => {
                    failures += 1;
                    lines.push(format!("p={p} q={q}: error {e}"));
                }
            }
        }
    }
    outcome(
        verified >= 1 && failures == 0,
        format!(
            "{verified} verified instances\n    {}",
            lines.join("\n    ")
        ),
    )
}

fn criterion_5() -> Outcome {
    let a = construct_totally_real_cubic(5, 3).map(|r| r.all_pass());
    let b = construct_totally_real_cubic(3, 2).map(|r| r.all_pass());
    let c = construct_totally_real_cubic(5, 11);
    let pass = a == Ok(true)
        && b == Ok(true)
        && c == Err(SearchError::ResidueConditionFails { p: 5, l: 11 });
    outcome(
        pass,
        format!("(5,3) all checks {a:?}; (3,2) all checks {b:?}; (5,11) {c:?}"),
    )
}

fn invariant_violations(w: &WeilPolynomial, r: &ClassificationReport, rebase: bool) -> Vec<String> {
    let mut v = Vec::new();
    let g = w.g();
    let np = newton_polygon(w);
    if let Err(e) = np.check_invariants(g) {
        v.push(e);
    }
    if let Err(e) = r.check_invariants() {
        v.push(e);
    }
    let deg_pmin: usize = r.components.iter().map(|c| c.pmin.deg()).sum();
    if r.rank > g || r.gamma_rank != r.rank + 1 || r.gamma_rank > deg_pmin / 2 + 1 {
        v.push(format!(
            "rank bounds: rank {} gamma {} deg pmin {deg_pmin}",
            r.rank, r.gamma_rank
        ));
    }
    if (r.rank == 0) != (r.newton == NewtonType::Supersingular) {
        v.push("rank 0 vs supersingular".into());
    }
    if g <= 2 && !r.neat {
        v.push("non-neat with g <= 2".into());
    }
    if rebase {
        let base = base_change(w, r.extension_degree).expect("valid");
        for n in [2u32, 3, 6] {
            let wb = base_change(&base, n).expect("valid");
            match classify(&wb) {
                Ok(rb) => {
                    if rb.rank != r.rank || rb.newton_polygon != r.newton_polygon {
                        v.push(format!(
                            "base change by {n}: rank {} -> {}",
                            r.rank, rb.rank
                        ));
                    }
                }
                Err(e) => v.push(format!("base change by {n}: {e}")),
            }
        }
    }
    v
}

fn criterion_6(corpus: &mut Corpus) -> Outcome {
    // the g = 1 corpus of criteria 1-2 and a g = 2 corpus, classified over
    // their sufficiency fields
    let mut small = Vec::new();
    for (q, a) in g1_corpus() {
        if let Ok(w) = validate(&quadratic(q, a), &BigInt::from(q)) {
            small.push(w);
        }
    }
    for q in [2u64, 3, 4, 5] {
        small.extend(enumerate_weil(&SearchSpec::new(2, q)).expect("enumeration"));
    }
    let mut errors = Vec::new();
    for w in small {
        match classify_auto(&w, Some(&cfg())) {
            Ok(r) => {
                if r.oracle_disagrees() {
                    corpus.disagreements += 1;
                }
                corpus.items.push((w, r));
            }
            Err(e) => errors.push(format!("{:?}: {e}", w.poly().coeffs())),
        }
    }
    let mut violations: BTreeMap<String, usize> = BTreeMap::new();
    let mut examples = Vec::new();
    let mut nonintegral = Vec::new();
    let mut by_g: BTreeMap<usize, usize> = BTreeMap::new();
    for (w, r) in &corpus.items {
        *by_g.entry(w.g()).or_default() += 1;
        if !newton_polygon(w).is_integral() {
            nonintegral.push(w);
        }
        for e in invariant_violations(w, r, true) {
            if examples.len() < 5 {
                examples.push(format!("{:?} q={}: {e}", w.poly().coeffs(), w.q()));
            }
            *violations
                .entry(e.split(':').next().unwrap_or("").to_string())
                .or_default() += 1;
        }
    }
    let nonint_g1: Vec<String> = nonintegral
        .iter()
        .filter(|w| w.g() == 1)
        .map(|w| format!("{:?}/{}", w.poly().coeffs(), w.q()))
        .collect();
    let n_nonint_g3 = nonintegral.iter().filter(|w| w.g() == 3).count();
    let total: usize = violations.values().sum();
    let pass = total == 0 && errors.is_empty();
    outcome(
        pass,
        format!(
            "{} instances {by_g:?}, {total} violations {violations:?} {examples:?}, {} classification errors {:?}; slope integrality reported, not asserted (it fails only for polynomials of no abelian variety of dimension g): non-integral g=1 {nonint_g1:?}, g=3 {n_nonint_g3} (see criterion 3)",
            corpus.items.len(),
            errors.len(),
            errors.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_7(corpus: &Corpus) -> Outcome {
    let mut n = 0;
    let mut bad = Vec::new();
    for (w, r) in &corpus.items {
        if w.g() == 3 && r.irreducible && r.newton == NewtonType::Ordinary {
            n += 1;
            if r.oracle.as_ref().is_some_and(|o| o.rank == 2) || r.rank == 2 {
                bad.push(w.poly().coeffs().to_vec());
            }
        }
    }
    outcome(
        bad.is_empty() && n > 0,
        format!(
            "{n} irreducible ordinary sextics, {} with rank 2: {bad:?}",
            bad.len()
        ),
    )
}

fn criterion_8(corpus: &mut Corpus) -> Outcome {
    let x = IntPoly::from_i64s(&[5, -1, 1]);
    let y = IntPoly::from_i64s(&[5, -2, 1]);
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, p, want) in [("X x X", &x * &x, 1usize), ("X x Y", &x * &y, 2)] {
        let w = validate(&p, &BigInt::from(5)).expect("valid");
        match classify_with_oracle(&w, &cfg()) {
            Ok(r) => {
                let o = r.oracle.as_ref().expect("oracle ran");
                let ok = r.rank == want && o.rank == want && o.agrees;
                pass &= ok;
                if r.oracle_disagrees() {
                    corpus.disagreements += 1;
                }
                lines.push(format!(
                    "{label}: classifier {} oracle {} ({:?}), expected {want}",
                    r.rank, o.rank, o.confidence
                ));
            }
            Err(e) => {
                pass = false;
                lines.push(format!("{label}: {e}"));
            }
        }
    }
    outcome(pass, lines.join("; "))
}

fn criterion_9(found: &[weilrank::search::NonNeatInstance]) -> Outcome {
    let five = BigInt::from(5);
    let a = sufficiency_degree(&validate(&IntPoly::from_i64s(&[5, 0, 1]), &five).unwrap());
    let b = sufficiency_degree(&validate(&IntPoly::from_i64s(&[5, -1, 1]), &five).unwrap());
    let mut pass = a == Ok(2) && b == Ok(1) && !found.is_empty();
    let mut lines = vec![format!("t^2+5: {a:?}, t^2-t+5: {b:?}")];
    for inst in found {
        let r = &inst.report;
        let base = base_change(&inst.weil, r.sufficiency_degree).expect("valid");
        let mut stable = true;
        for k in [2u32, 3] {
            let rk = classify(&base_change(&base, k).expect("valid"));
            stable &= rk.as_ref().is_ok_and(|rk| {
                rk.neat == r.neat && rk.rank == r.rank && rk.conditions() == r.conditions()
            });
        }
        pass &= stable && r.extension_degree == r.sufficiency_degree;
        lines.push(format!(
            "q={}: sufficiency degree {}, stable under 2,3: {stable}",
            inst.weil.q(),
            r.sufficiency_degree
        ));
    }
    outcome(pass, lines.join("; "))
}

fn criterion_10(corpus: &Corpus) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_weilrank");
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures");
    let run = |file: &str| {
        Command::new(bin)
            .args([
                "classify",
                "--oracle-check",
                "--batch",
                &format!("{fixtures}/{file}"),
            ])
            .output()
            .expect("runs")
    };
    let clean = run("nonneat.jsonl");
    let corrupted = run("corrupted.jsonl");
    let clean_code = clean.status.code();
    let corrupted_code = corrupted.status.code();
    let lines = String::from_utf8_lossy(&corrupted.stdout).lines().count();
    let pass = corpus.disagreements == 0
        && clean_code == Some(0)
        && corrupted_code == Some(3)
        && lines == 2;
    outcome(
        pass,
        format!(
            "{} classifier/oracle disagreements over {} classified instances; golden fixture exit {clean_code:?}, corrupted fixture exit {corrupted_code:?} ({lines} records)",
            corpus.disagreements,
            corpus.items.len()
        ),
    )
}

fn report(n: usize, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let dt = t.elapsed();
    let in_time = limit.is_none_or(|l| dt <= l);
    let pass = o.pass && in_time;
    let limit_s = limit
        .map(|l| format!(" / limit {}s", l.as_secs()))
        .unwrap_or_default();
    println!(
        "criterion {n}: {} [{:.2}s{limit_s}] {}",
        if pass { "PASS" } else { "FAIL" },
        dt.as_secs_f64(),
        o.detail
    );
    pass
}

fn main() {
    let mut corpus = Corpus::default();
    let mut found = Vec::new();
    let mins = |m: u64| Some(Duration::from_secs(60 * m));
    let mut ok = true;
    ok &= report(1, Some(Duration::from_secs(10)), criterion_1);
    ok &= report(2, Some(Duration::from_secs(10)), criterion_2);
    ok &= report(3, mins(30), || criterion_3(&mut corpus));
    ok &= report(4, mins(10), || criterion_4(&mut corpus, &mut found));
    ok &= report(5, Some(Duration::from_secs(1)), criterion_5);
    ok &= report(6, None, || criterion_6(&mut corpus));
    ok &= report(7, mins(10), || criterion_7(&corpus));
    ok &= report(8, mins(1), || criterion_8(&mut corpus));
    ok &= report(9, None, || criterion_9(&found));
    ok &= report(10, None, || criterion_10(&corpus));
    if !ok {
        println!("acceptance: FAILED");
        std::process::exit(1);
    }
    println!("acceptance: all criteria PASS");
}
