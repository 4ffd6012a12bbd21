use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{id_order, load_casebook, load_casebook_dir, CaseError, CaseRecord, Check, PaperClaim};
use crate::algebra::{parse_upoly, real_root_count, Var};
use crate::lattice::{
    compute_lattice, enumerate_profiles, lattice_isomorphic, pencil_family_triple_bounds, placement,
    solve_line_distribution, Arrangement, CtxArrangement, IntersectionLattice, ProfileConstraint, ProfileQuery,
};
use crate::moduli::{
    check_equations, frame_values, normalize, propagate, realize, IncidenceSpec, ModuliError, ModuliVerdict,
    VerdictKind,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "detail")]
pub enum Comparison {
    Match,
    Mismatch(String),
    FlaggedDiscrepancy(String),
}

impl Comparison {
    pub fn name(&self) -> &'static str {
        match self {
            Comparison::Match => "Match",
            Comparison::Mismatch(_) => "Mismatch",
            Comparison::FlaggedDiscrepancy(_) => "FlaggedDiscrepancy",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub claim: String,
    pub computed: String,
    pub comparison: Comparison,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregateReport {
    pub reports: Vec<CaseReport>,
    /// Files that could not be loaded.
    pub errors: Vec<String>,
    pub matches: usize,
    pub mismatches: usize,
    pub flagged: usize,
}

impl AggregateReport {
    fn new(reports: Vec<CaseReport>, errors: Vec<String>) -> Self {
        let count = |n: &str| reports.iter().filter(|r| r.comparison.name() == n).count();
        let (matches, mismatches, flagged) = (count("Match"), count("Mismatch"), count("FlaggedDiscrepancy"));
        AggregateReport { reports, errors, matches, mismatches, flagged }
    }

    /// A run fails on any mismatch or unreadable case file.
    pub fn failed(&self) -> bool {
        self.mismatches > 0 || !self.errors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CaseReport> {
        self.reports.iter().find(|r| r.id == id)
    }
}

impl fmt::Display for AggregateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        let w = self.reports.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
        writeln!(f, "{:<w$}  {:<18}  computed", "id", "outcome")?;
        for r in &self.reports {
            writeln!(f, "{:<w$}  {:<18}  {}", r.id, r.comparison.name(), r.computed)?;
            match &r.comparison {
                Comparison::Match => {}
                Comparison::Mismatch(d) | Comparison::FlaggedDiscrepancy(d) => writeln!(f, "{:<w$}    {d}", "")?,
            }
        }
        write!(f, "{} cases: {} Match, {} Mismatch, {} FlaggedDiscrepancy", self.reports.len(), self.matches, self.mismatches, self.flagged)
    }
}

struct Outcome {
    computed: String,
    problems: Vec<String>,
    details: Vec<String>,
}

impl Outcome {
    fn new(computed: impl Into<String>) -> Self {
        Outcome { computed: computed.into(), problems: Vec::new(), details: Vec::new() }
    }

    fn require(&mut self, ok: bool, problem: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(problem());
        }
    }
}

/// Runs the pipeline a record calls for and compares with its claim.
/// Disagreement is a flagged discrepancy when the record declares one,
/// otherwise a mismatch.
pub fn verify_case(rec: &CaseRecord, book: &[CaseRecord]) -> CaseReport {
    let start = Instant::now();
    let out = match &rec.check {
        None => verify_figure(rec),
        Some(c) => verify_check(rec, c, book),
    };
    let comparison = match (out.problems.is_empty(), &rec.discrepancy) {
        (true, None) => Comparison::Match,
        (true, Some(_)) => Comparison::Mismatch("declared discrepancy did not reproduce".into()),
        (false, None) => Comparison::Mismatch(out.problems.join("; ")),
        (false, Some(d)) => Comparison::FlaggedDiscrepancy(format!("{d} Computed: {}", out.problems.join("; "))),
    };
    CaseReport {
        id: rec.id.clone(),
        claim: rec.paper_claim.to_string(),
        computed: out.computed,
        comparison,
        details: out.details,
        assumptions: rec.assumptions.clone(),
        elapsed_ms: start.elapsed().as_millis(),
    }
}

/// Verifies the records whose id matches `filter` (a glob pattern), in
/// parallel, reporting in id order.
pub fn run_records(book: &[CaseRecord], filter: Option<&str>) -> Result<AggregateReport, glob::PatternError> {
    let pat = filter.map(glob::Pattern::new).transpose()?;
    let mut chosen: Vec<&CaseRecord> = book.iter().filter(|r| pat.as_ref().is_none_or(|p| p.matches(&r.id))).collect();
    chosen.sort_by(|a, b| id_order(&a.id, &b.id));
    let reports = chosen.par_iter().map(|r| verify_case(r, book)).collect();
    Ok(AggregateReport::new(reports, Vec::new()))
}

/// Verifies the bundled casebook, or the case files in `dir`.
pub fn run_all(dir: Option<&std::path::Path>, filter: Option<&str>) -> Result<AggregateReport, glob::PatternError> {
    let book = match dir {
        None => load_casebook(),
        Some(d) => load_casebook_dir(d),
    };
    match book {
        Ok(b) => run_records(&b, filter),
        Err(e) => {
            let kind = match e {
                CaseError::MalformedCaseFile { .. } => "MalformedCaseFile",
                CaseError::EmptyCasebook(_) => "EmptyCasebook",
            };
            Ok(AggregateReport::new(Vec::new(), vec![format!("{kind}: {e}")]))
        }
    }
}

fn summary(v: &Result<ModuliVerdict, ModuliError>) -> String {
    let v = match v {
        Ok(v) => v,
        Err(e) => return format!("error: {e}"),
    };
    match &v.kind {
        VerdictKind::Empty => format!("Empty ({} certificates)", v.certificates.len()),
        VerdictKind::Parametric { free_count } => format!("Parametric ({free_count} free)"),
        VerdictKind::Unresolved { reasons, .. } => format!("Unresolved ({})", reasons.join("; ")),
        VerdictKind::Finite { branches } => {
            let parts: Vec<String> =
                branches.iter().map(|b| format!("degree {} ({} real, {} nonreal)", b.degree, b.real, b.nonreal)).collect();
            format!(
                "Finite [{}]: {} points, quotient {}",
                parts.join(", "),
                v.moduli_points.unwrap_or(0),
                v.quotient_points.unwrap_or(0)
            )
        }
    }
}

fn verify_figure(rec: &CaseRecord) -> Outcome {
    let specs = match rec.specs() {
        Ok(s) => s,
        Err(e) => return Outcome { computed: "invalid".into(), problems: vec![e], details: Vec::new() },
    };
    let verdicts: Vec<_> = specs.iter().map(realize).collect();
    let mut out = Outcome::new(summary(&verdicts[0]));
    if specs.len() > 1 {
        out.computed = format!("{} readings: {}", specs.len(), verdicts.iter().map(summary).collect::<Vec<_>>().join(" | "));
    }
    for (s, v) in specs.iter().zip(&verdicts) {
        out.details.push(format!("{s}"));
        if let Ok(v) = v {
            if let Some(c) = v.certificates.first() {
                out.details.push(format!("certificate: {c}"));
            }
        }
    }
    match &rec.paper_claim {
        PaperClaim::NotRealizable => {
            for (k, v) in verdicts.iter().enumerate() {
                let ok = matches!(v, Ok(v) if v.is_empty() && !v.certificates.is_empty());
                out.require(ok, || format!("reading {} is {}", k + 1, summary(v)));
            }
        }
        PaperClaim::Realizable { minpoly, moduli_points, quotient_points } => {
            check_realizable(rec, &specs[0], &verdicts[0], minpoly, *moduli_points, *quotient_points, &mut out);
        }
        other => out.problems.push(format!("claim '{other}' does not apply to a figure")),
    }
    out
}

fn check_realizable(
    rec: &CaseRecord,
    spec: &IncidenceSpec,
    v: &Result<ModuliVerdict, ModuliError>,
    minpoly: &str,
    points: usize,
    quotient: Option<usize>,
    out: &mut Outcome,
) {
    let f = parse_upoly(minpoly, Var::T).expect("validated");
    let (deg, real) = (f.degree().unwrap_or(0), real_root_count(&f).unwrap_or(0));
    match v {
        Ok(v) if matches!(v.kind, VerdictKind::Finite { .. }) => {
            out.require(v.moduli_points == Some(points), || format!("{} moduli points", v.moduli_points.unwrap_or(0)));
            if let Some(q) = quotient {
                out.require(v.quotient_points == Some(q), || format!("quotient {}", v.quotient_points.unwrap_or(0)));
            }
            out.require(v.branches().iter().any(|b| b.degree == deg && b.real == real), || {
                format!("no branch of degree {deg} with {real} real roots")
            });
        }
        _ => out.problems.push(format!("solver: {}", summary(v))),
    }
    let Some(eq) = &rec.paper_equation else { return };
    let (_, arr) = match eq.build() {
        Ok(x) => x,
        Err(e) => return out.problems.push(format!("printed equation: {e}")),
    };
    let target = spec.lattice();
    let arr = match compute_lattice(&arr) {
        Err(e) => return out.problems.push(format!("printed equation: {e}")),
        Ok(l) => match relabel_to(&arr, &l, &target) {
            Ok(a) => {
                out.details.push("printed equation realizes the specified lattice".into());
                a
            }
            Err(why) => {
                out.problems.push(format!(
                    "printed equation realizes {} ({}, {}): {why}",
                    l.profile(),
                    if l.is_nonreductive() { "nonreductive" } else { "reductive" },
                    counting_text(&l)
                ));
                arr
            }
        },
    };
    let frame = match normalize(spec) {
        Ok(f) => f,
        Err(e) => return out.problems.push(e.to_string()),
    };
    let sys = propagate(&frame, spec);
    match frame_values(&frame, &arr).and_then(|vals| check_equations(&sys, &vals)) {
        Ok(c) if c.holds() => out.details.push(format!("printed parametrization: {c}")),
        Ok(c) => out.problems.push(format!("printed parametrization: {c}")),
        Err(e) => out.problems.push(format!("printed parametrization: {e}")),
    }
}

fn counting_text(l: &IntersectionLattice) -> String {
    let c = crate::lattice::counting_identity(&l.profile());
    format!("counting identity {} = {}", c.lhs, c.rhs)
}

/// The arrangement with its lines reordered to match `target`.
fn relabel_to(arr: &CtxArrangement, have: &IntersectionLattice, target: &IntersectionLattice) -> Result<CtxArrangement, String> {
    if have == target {
        return Ok(arr.clone());
    }
    let phi = lattice_isomorphic(have, target).map_err(|e| e.to_string())?;
    let mut lines = arr.lines().to_vec();
    for (i, l) in arr.lines().iter().enumerate() {
        lines[phi[i]] = l.clone();
    }
    Arrangement::new(lines).map_err(|e| e.to_string())
}

fn figure<'a>(book: &'a [CaseRecord], id: &str) -> Result<&'a CaseRecord, String> {
    book.iter().find(|r| r.id == id && r.is_figure()).ok_or_else(|| format!("no figure record {id}"))
}

fn main_verdict(rec: &CaseRecord) -> Result<(IncidenceSpec, ModuliVerdict), String> {
    let spec = rec.specs()?.remove(0);
    let v = realize(&spec).map_err(|e| format!("{}: {e}", rec.id))?;
    Ok((spec, v))
}

fn verify_check(rec: &CaseRecord, check: &Check, book: &[CaseRecord]) -> Outcome {
    match check_inner(rec, check, book) {
        Ok(o) => o,
        Err(e) => Outcome { computed: "error".into(), problems: vec![e], details: Vec::new() },
    }
}

fn constraint(s: &str) -> Result<ProfileConstraint, String> {
    s.parse().map_err(|e| format!("{s}: {e}"))
}

fn check_inner(rec: &CaseRecord, check: &Check, book: &[CaseRecord]) -> Result<Outcome, String> {
    let claim = &rec.paper_claim;
    let unsupported = || format!("claim '{claim}' does not apply to this check");
    Ok(match check {
        Check::Profiles { lines, constraints, nonreductive } => {
            let mut q = ProfileQuery::new(*lines).nonreductive(*nonreductive);
            for c in constraints {
                q.constraints.push(constraint(c)?);
            }
            let found = enumerate_profiles(&q).map_err(|e| e.to_string())?;
            let mut out = Outcome::new(format!("{} surviving profiles", found.len()));
            out.details.extend(found.iter().map(|p| p.to_string()));
            match claim {
                PaperClaim::ProfileInfeasible => out.require(found.is_empty(), || format!("{} profiles survive", found.len())),
                PaperClaim::ProfileBounds { bounds } => {
                    out.require(!found.is_empty(), || "no profile survives".into());
                    for b in bounds {
                        let c = constraint(b)?;
                        if let Some(p) = found.iter().find(|p| !c.holds(p)) {
                            out.problems.push(format!("{p} violates {b}"));
                        }
                    }
                }
                _ => return Err(unsupported()),
            }
            out
        }
        Check::Placement { k, m, r } => {
            let p = placement(*k, *m, *r);
            let mut out =
                Outcome::new(format!("off the pencil: {}, on a pencil line: {}", feasible(p.off_pencil), feasible(p.on_pencil)));
            match claim {
                PaperClaim::CollinearForced => out.require(!p.off_pencil && p.on_pencil, || out_text(p.off_pencil, p.on_pencil)),
                _ => return Err(unsupported()),
            }
            out
        }
        Check::Family { ids } => {
            let PaperClaim::Family { realizable } = claim else { return Err(unsupported()) };
            let results: Vec<(String, Result<(IncidenceSpec, ModuliVerdict), String>)> =
                ids.par_iter().map(|id| (id.clone(), figure(book, id).and_then(main_verdict))).collect();
            let mut found = BTreeSet::new();
            let mut out = Outcome::new("");
            for (id, r) in &results {
                match r {
                    Ok((_, v)) if v.is_empty() => {}
                    Ok((_, v)) if matches!(v.kind, VerdictKind::Unresolved { .. }) => {
                        out.problems.push(format!("{id} undecided"));
                    }
                    Ok(_) => {
                        found.insert(id.clone());
                    }
                    Err(e) => out.problems.push(e.clone()),
                }
            }
            let want: BTreeSet<String> = realizable.iter().cloned().collect();
            out.computed = format!(
                "{} members, realizable: {}",
                ids.len(),
                if found.is_empty() { "none".to_string() } else { found.iter().cloned().collect::<Vec<_>>().join(", ") }
            );
            out.require(found == want, || format!("realizable members {found:?}, expected {want:?}"));
            out
        }
        Check::TripleCount { figure: id } => {
            let PaperClaim::TripleCount { statement, proof } = claim else { return Err(unsupported()) };
            let (spec, v) = main_verdict(figure(book, id)?)?;
            let lattice = match v.branches().first() {
                Some(b) => compute_lattice(&Arrangement::new(b.arrangement.clone()).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?,
                None => spec.lattice(),
            };
            let n3 = lattice.profile().count(3) as usize;
            let mut out = Outcome::new(format!("{n3} triple points in the lattice of {id}"));
            out.require(n3 == *statement, || format!("statement count {statement} differs from {n3}"));
            out.require(n3 == *proof, || format!("proof count {proof} differs from {n3}"));
            out
        }
        Check::PencilBounds { k, m, witness } => {
            let PaperClaim::NThreeRange { lower, upper } = claim else { return Err(unsupported()) };
            let b = pencil_family_triple_bounds(*k, *m);
            let lo = b.feasible.first().copied().unwrap_or(0);
            let hi = b.feasible.last().copied().unwrap_or(0);
            let mut out = Outcome::new(format!(
                "feasible n3 {lo}..={hi} (counting bound {}, per-line cap {})",
                b.upper_counting, b.per_line_cap
            ));
            for row in &b.rows {
                let s: Vec<String> = row.surviving.iter().map(|d| d.to_string()).collect();
                out.details.push(format!("n3={}: {} solutions, surviving {}", row.n3, row.solutions.len(), s.join(" ")));
            }
            out.require(lo == *lower, || format!("lower bound {lo}"));
            out.require(hi == *upper, || format!("upper bound {hi}"));
            if let Some(w) = witness {
                let (_, arr) = w.build().map_err(|e| format!("witness: {e}"))?;
                let l = compute_lattice(&arr).map_err(|e| format!("witness: {e}"))?;
                let p = l.profile();
                let on_pencil = pencil_witness(&l, *m);
                out.details.push(format!(
                    "witness: {p}, {}, triple points on the pencil: {on_pencil}",
                    if l.is_nonreductive() { "nonreductive" } else { "reductive" }
                ));
                if l.is_nonreductive() && on_pencil && p.count(*m) == 1 && p.count(3) as usize > *upper {
                    out.problems.push(format!("explicit arrangement with {} triple points", p.count(3)));
                }
            }
            out
        }
        Check::Distribution { pool, total, weights } => {
            let PaperClaim::Solutions { solutions } = claim else { return Err(unsupported()) };
            let got: BTreeSet<Vec<usize>> =
                solve_line_distribution(*pool, *total, weights).into_iter().map(|d| d.counts.clone()).collect();
            let want: BTreeSet<Vec<usize>> = solutions.iter().cloned().collect();
            let show = |s: &BTreeSet<Vec<usize>>| s.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ");
            let mut out = Outcome::new(format!("{} solutions: {}", got.len(), show(&got)));
            let missing: BTreeSet<_> = got.difference(&want).cloned().collect();
            let extra: BTreeSet<_> = want.difference(&got).cloned().collect();
            out.require(missing.is_empty(), || format!("not listed: {}", show(&missing)));
            out.require(extra.is_empty(), || format!("listed but not solutions: {}", show(&extra)));
            out
        }
        Check::Extension { figure: id } => {
            let PaperClaim::Extension = claim else { return Err(unsupported()) };
            let (spec, v) = main_verdict(figure(book, id)?)?;
            let Some(big) = v.moduli_points else {
                return Err(format!("{id} is not finite: {}", summary(&Ok(v))));
            };
            let mut out = Outcome::new(format!("{id}: {big} points; no smaller instance found"));
            let lat = spec.lattice();
            let mut positive_dim = None;
            for i in (0..spec.n_lines()).rev() {
                if lat.line_signature(i).len() < 2 {
                    continue;
                }
                let Ok(small) = delete_line(&spec, i) else { continue };
                let Ok(w) = realize(&small) else { continue };
                if let Some(sm) = w.moduli_points {
                    out.computed = format!("{id}: {big} points; without L{}: {sm} points", i + 1);
                    out.require(big <= sm, || format!("{big} points exceed {sm} after removing L{}", i + 1));
                    return Ok(out);
                }
                if let VerdictKind::Parametric { free_count } = w.kind {
                    positive_dim.get_or_insert((i, free_count));
                }
            }
            if let Some((i, free)) = positive_dim {
                out.computed = format!("{id}: {big} points; without L{}: {free}-dimensional", i + 1);
                return Ok(out);
            }
            out.problems.push("no line removal leaves a finite or positive-dimensional moduli space".into());
            out
        }
    })
}

fn feasible(b: bool) -> &'static str {
    if b {
        "feasible"
    } else {
        "infeasible"
    }
}

fn out_text(off: bool, on: bool) -> String {
    format!("off-pencil placement {}, on-pencil placement {}", feasible(off), feasible(on))
}

/// Whether the lattice has one `m`-fold point and every other multiple
/// point lies on one of its lines.
fn pencil_witness(l: &IntersectionLattice, m: usize) -> bool {
    let pts: Vec<&Vec<usize>> = l.multiple_points().collect();
    let Some(center) = pts.iter().find(|p| p.len() == m) else { return false };
    pts.iter().all(|p| p.len() == 3 || std::ptr::eq(*p, *center)) && pts.iter().all(|p| p.iter().any(|i| center.contains(i)))
}

fn delete_line(spec: &IncidenceSpec, i: usize) -> Result<IncidenceSpec, crate::moduli::SpecError> {
    let pts = spec
        .points()
        .iter()
        .map(|p| p.iter().filter(|&&j| j != i).map(|&j| if j > i { j - 1 } else { j }).collect::<Vec<_>>())
        .filter(|p| p.len() >= 3)
        .collect();
    IncidenceSpec::new(spec.n_lines() - 1, pts)
}
