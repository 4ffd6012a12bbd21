//! One PASS/FAIL line per acceptance criterion. Failing criteria are
//! reported, not asserted; the process fails only if a check cannot run.

mod common;

use std::time::{Duration, Instant};

use arrmod::algebra::{parse_upoly, real_root_count, QPoly, Var};
use arrmod::casebook::{load_casebook, run_all, CaseRecord};
use arrmod::lattice::{
    compute_lattice, compute_lattice_branches, counting_identity, enumerate_profiles, lattice_isomorphic,
    pencil_family_triple_bounds, solve_line_distribution, CtxArrangement, ProfileQuery,
};
use arrmod::moduli::{check_equations, frame_values, normalize, propagate, realize, IncidenceSpec, ModuliVerdict, VerdictKind};
use common::*;
use proptest::strategy::Strategy;
use proptest::test_runner::{RngAlgorithm, TestCaseError, TestRng, TestRunner};

struct Row {
    id: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

struct Sheet {
    rows: Vec<Row>,
}

impl Sheet {
    fn record(&mut self, id: &'static str, limit_s: Option<u64>, f: impl FnOnce() -> (bool, String)) {
        let start = Instant::now();
        let (ok, detail) = f();
        let elapsed = start.elapsed();
        let limit = limit_s.map(Duration::from_secs);
        let pass = ok && limit.is_none_or(|l| elapsed < l);
        let row = Row { id, pass, detail, elapsed, limit };
        let limit = row.limit.map_or(String::new(), |l| format!(", limit {} s", l.as_secs()));
        println!(
            "criterion {:<4} {}  {}  [{:.2} s{}]",
            row.id,
            if row.pass { "PASS" } else { "FAIL" },
            row.detail,
            row.elapsed.as_secs_f64(),
            limit
        );
        self.rows.push(row);
    }
}

fn record<'a>(book: &'a [CaseRecord], id: &str) -> &'a CaseRecord {
    book.iter().find(|r| r.id == id).unwrap_or_else(|| panic!("casebook has no {id}"))
}

fn spec_of(book: &[CaseRecord], id: &str) -> IncidenceSpec {
    record(book, id).specs().expect("figure record").remove(0)
}

fn kind(v: &ModuliVerdict) -> String {
    match &v.kind {
        VerdictKind::Parametric { free_count } => format!("Parametric ({free_count} free)"),
        VerdictKind::Finite { .. } => format!("Finite ({} points)", v.moduli_points.unwrap_or(0)),
        _ => v.kind_name().to_string(),
    }
}

/// The printed arrangement of a record, checked against the specified
/// lattice and against the incidence equations of the specification.
fn printed_parametrization(rec: &CaseRecord, spec: &IncidenceSpec) -> (bool, String) {
    let eq = rec.paper_equation.as_ref().expect("record has a printed equation");
    let (_, arr) = eq.build().expect("printed equation parses");
    let have = compute_lattice(&arr).expect("printed lattice is decidable");
    let target = spec.lattice();
    let (arr, same) = match lattice_isomorphic(&have, &target) {
        Ok(phi) => {
            let mut lines = arr.lines().to_vec();
            for (i, l) in arr.lines().iter().enumerate() {
                lines[phi[i]] = l.clone();
            }
            (CtxArrangement::new(lines).unwrap(), true)
        }
        Err(_) => (arr, false),
    };
    let frame = normalize(spec).expect("spec has a pencil pair");
    let sys = propagate(&frame, spec);
    let check = frame_values(&frame, &arr).map_err(|e| e.to_string()).and_then(|v| check_equations(&sys, &v).map_err(|e| e.to_string()));
    let p = have.profile();
    let text = match &check {
        Ok(c) => c.to_string(),
        Err(e) => e.to_string(),
    };
    let lattice = if same {
        "printed lattice matches".to_string()
    } else {
        format!("printed lattice {p} is not the specified one")
    };
    (same && check.as_ref().is_ok_and(|c| c.holds()), format!("{lattice}; {text}"))
}

fn has_branch(v: &ModuliVerdict, f: &QPoly, real: usize) -> bool {
    v.branches().iter().any(|b| b.ctx.modulus() == Some(&f.monic()) && b.real == real)
}

fn run_suite<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> (bool, String) {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(cfg(cases), rng);
    match runner.run(&strategy, test) {
        Ok(()) => (true, format!("{cases} cases")),
        Err(e) => (false, e.to_string()),
    }
}

fn main() {
    let book = load_casebook().expect("bundled casebook loads");
    let mut sheet = Sheet { rows: Vec::new() };

    sheet.record("1", Some(5), || {
        let eq = record(&book, "fig12").paper_equation.clone().expect("printed equation");
        let (_, arr) = eq.build().expect("printed equation parses");
        let branches = compute_lattice_branches(&arr);
        let l = branches[0].1.clone().expect("lattice is decidable");
        let p = l.profile();
        let c = counting_identity(&p);
        let ok = branches.len() == 1
            && p.count(6) == 1
            && p.count(4) == 1
            && l.is_nonreductive()
            && c.holds
            && c.lhs == 66;
        let nr = if l.is_nonreductive() { "nonreductive" } else { "reductive" };
        (ok, format!("want n6=1 n4=1 nonreductive 66=66; got {p}, {nr}, {}={}", c.lhs, c.rhs))
    });

    sheet.record("2", Some(60), || {
        let spec = spec_of(&book, "fig12");
        let v = realize(&spec).expect("solver runs");
        let cubic = parse_upoly("t^3+t^2+t-1", Var::T).unwrap();
        let b = v.branches();
        let solver_ok = b.len() == 1
            && b[0].degree == 3
            && b[0].ctx.modulus().is_some_and(|f| f.is_squarefree())
            && (b[0].real, b[0].nonreal) == (1, 2)
            && v.moduli_points == Some(3)
            && v.quotient_points == Some(2)
            && has_branch(&v, &cubic, 1);
        let (param_ok, param) = printed_parametrization(record(&book, "fig12"), &spec);
        (solver_ok && param_ok, format!("want Finite cubic 1+2 roots, 3 points, quotient 2; got {}; {param}", kind(&v)))
    });

    sheet.record("3", None, || {
        let mut bad = Vec::new();
        let mut slowest = Duration::ZERO;
        let ids: Vec<String> = (1..=11).chain(13..=40).map(|n| format!("fig{n}")).collect();
        for id in &ids {
            for spec in record(&book, id).specs().expect("figure record") {
                let start = Instant::now();
                let v = realize(&spec);
                slowest = slowest.max(start.elapsed());
                match v {
                    Ok(v) if v.is_empty() && !v.certificates.is_empty() => {}
                    Ok(v) => bad.push(format!("{id}: {}", kind(&v))),
                    Err(e) => bad.push(format!("{id}: {e}")),
                }
            }
        }
        let ok = bad.is_empty() && slowest < Duration::from_secs(120);
        let detail = format!(
            "{} figures Empty with certificates, slowest case {:.3} s (limit 120 s){}",
            ids.len(),
            slowest.as_secs_f64(),
            if bad.is_empty() { String::new() } else { format!("; not Empty: {}", bad.join(", ")) }
        );
        (ok, detail)
    });

    sheet.record("4", Some(60), || {
        let spec = spec_of(&book, "fig41");
        let v = realize(&spec).expect("solver runs");
        let cubic = parse_upoly("t^3-4*t^2+3*t+1", Var::T).unwrap();
        let sturm = real_root_count(&cubic).unwrap();
        let solver_ok = has_branch(&v, &cubic, 3) && v.moduli_points == Some(3) && v.quotient_points == Some(3);
        let (param_ok, param) = printed_parametrization(record(&book, "fig41"), &spec);
        (
            sturm == 3 && solver_ok && param_ok,
            format!("want Finite t^3-4t^2+3t+1 (Sturm: {sturm} real), 3 points, quotient 3; got {}; {param}", kind(&v)),
        )
    });

    sheet.record("5", Some(180), || {
        // Discriminant of t^3-3t^2+2t-2: negative means one real root.
        let (a, b, c, d) = (1i64, -3i64, 2i64, -2i64);
        let disc = 18 * a * b * c * d - 4 * b.pow(3) * d + b * b * c * c - 4 * a * c.pow(3) - 27 * a * a * d * d;
        let derived_quotient = if disc < 0 { 1 + 1 } else { 3 };
        let mut ok = true;
        let mut parts = Vec::new();
        for (id, points, quotient) in [("fig42", 2, 2), ("fig43", 2, 2), ("fig44", 3, derived_quotient)] {
            let start = Instant::now();
            let v = realize(&spec_of(&book, id)).expect("solver runs");
            let good = v.moduli_points == Some(points) && v.quotient_points == Some(quotient) && start.elapsed().as_secs() < 60;
            ok &= good;
            let got = match v.moduli_points {
                Some(p) => format!("{p}/{}", v.quotient_points.unwrap_or(0)),
                None => kind(&v),
            };
            parts.push(format!("{id} want {points}/{quotient} got {got}"));
        }
        (ok, format!("points/quotient: {}", parts.join(", ")))
    });

    sheet.record("6a", Some(10), || {
        let mut q = ProfileQuery::new(12).nonreductive(true);
        q.constraints = vec!["n7>=1".parse().unwrap()];
        let found = enumerate_profiles(&q).unwrap();
        (found.is_empty(), format!("{} nonreductive 12-line profiles with n7>=1", found.len()))
    });

    sheet.record("6b", Some(10), || {
        let mut q = ProfileQuery::new(12).nonreductive(true);
        q.constraints = ["n6>=1", "n7=0", "n8=0", "n9=0", "n10=0", "n11=0", "n12=0"].iter().map(|s| s.parse().unwrap()).collect();
        let found = enumerate_profiles(&q).unwrap();
        let bad = found.iter().filter(|p| !(p.count(6) == 1 && p.count(5) == 0 && p.count(4) <= 1)).count();
        (!found.is_empty() && bad == 0, format!("{} survivors, {bad} outside n6=1 n5=0 n4<=1", found.len()))
    });

    sheet.record("6c", Some(10), || {
        let b = pencil_family_triple_bounds(12, 6);
        let (lo, hi) = (b.feasible.first().copied(), b.feasible.last().copied());
        (
            (lo, hi) == (Some(12), Some(14)),
            format!("want 12..=14; feasible n3 {}..={} (counting bound {})", lo.unwrap_or(0), hi.unwrap_or(0), b.upper_counting),
        )
    });

    sheet.record("7a", None, || {
        let mut s: Vec<Vec<usize>> = solve_line_distribution(6, 28, &[3, 4, 5]).into_iter().map(|d| d.counts).collect();
        s.sort();
        (s == vec![vec![0, 2, 4], vec![1, 0, 5]], format!("(6,28): {s:?}"))
    });

    sheet.record("7b", None, || {
        let n32 = solve_line_distribution(6, 32, &[3, 4, 5, 6]).len();
        let n30 = solve_line_distribution(6, 30, &[3, 4, 5, 6]).len();
        ((n32, n30) == (3, 7), format!("want (6,32)->3 and (6,30)->7; got {n32} and {n30}"))
    });

    sheet.record("7c", Some(60), || {
        let r = run_all(None, None).expect("valid filter");
        let flagged_dist = ["thm5.2-n3=15", "thm5.2-n3=16"]
            .iter()
            .all(|id| r.get(id).is_some_and(|c| c.comparison.name() == "FlaggedDiscrepancy"));
        (
            r.errors.is_empty() && r.mismatches == 0 && r.flagged >= 3 && flagged_dist,
            format!("{} Match, {} Mismatch, {} FlaggedDiscrepancy, {} errors", r.matches, r.mismatches, r.flagged, r.errors.len()),
        )
    });

    sheet.record("8i", None, || run_suite(200, arrangement(), |l| check_counting_identity(&l)));
    sheet.record("8ii", None, || run_suite(100, (arrangement(), matrix()), |(l, t)| check_projective_invariance(&l, &t)));
    sheet.record("8iii", None, || run_suite(500, squarefree_poly(), |(f, real)| check_sturm(&f, real)));
    let lattices = casebook_lattices();
    sheet.record("8iv", None, || run_suite(40, relabel_seed(), |s| check_relabelings(&lattices, &s)));
    sheet.record("8v", None, || run_suite(60, profile_query(), |q| check_enumeration(&q)));

    let passed = sheet.rows.iter().filter(|r| r.pass).count();
    println!("acceptance: {passed}/{} criteria pass", sheet.rows.len());
    let expected = ["1", "2", "3", "4", "5", "6a", "6b", "6c", "7a", "7b", "7c", "8i", "8ii", "8iii", "8iv", "8v"];
    let ids: Vec<&str> = sheet.rows.iter().map(|r| r.id).collect();
    assert_eq!(ids, expected, "every criterion is evaluated once");
}
