use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::lift::{eval_ctx, gcd, specialize};
use super::propagate::ConstraintSystem;
use super::solve::{eliminate, Elimination, Leaf, LeafKind};
use super::{normalize, propagate, IncidenceSpec, ModuliError};
use crate::algebra::ctx::split_branches;
use crate::algebra::{real_root_count, AlgebraError, BranchCtx, CtxElem, QPoly, Rat, Split, Var};
use crate::geometry::{GeomError, ProjLine};
use crate::lattice::{compute_lattice, Arrangement, LatticeError};

/// Why a branch contains no valid arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub path: Vec<String>,
    pub reason: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.reason)
        } else {
            write!(f, "{} (case: {})", self.reason, self.path.join("; "))
        }
    }
}

/// One surviving family of conjugate solutions.
#[derive(Clone, Debug, Serialize)]
pub struct BranchReport {
    pub var: String,
    /// Squarefree modulus, `None` for a single rational solution.
    pub modulus: Option<String>,
    pub degree: usize,
    pub real: usize,
    pub nonreal: usize,
    pub quotient_points: usize,
    /// The lines of the arrangement, as coefficient triples over the branch.
    pub lines: Vec<[String; 3]>,
    #[serde(skip)]
    pub ctx: Arc<BranchCtx>,
    #[serde(skip)]
    pub arrangement: Vec<ProjLine<CtxElem>>,
    /// Values of the system variables.
    #[serde(skip)]
    pub values: BTreeMap<Var, CtxElem>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum VerdictKind {
    Empty,
    Finite { branches: Vec<BranchReport> },
    Parametric { free_count: usize },
    /// Elimination could not finish; any branches found are listed.
    Unresolved { reasons: Vec<String>, branches: Vec<BranchReport> },
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuliVerdict {
    #[serde(flatten)]
    pub kind: VerdictKind,
    pub moduli_points: Option<usize>,
    pub quotient_points: Option<usize>,
    pub certificates: Vec<Certificate>,
    pub anchors: [Vec<usize>; 2],
    pub equations: usize,
    pub inequations: usize,
}

impl ModuliVerdict {
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            VerdictKind::Empty => "Empty",
            VerdictKind::Finite { .. } => "Finite",
            VerdictKind::Parametric { .. } => "Parametric",
            VerdictKind::Unresolved { .. } => "Unresolved",
        }
    }

    pub fn branches(&self) -> &[BranchReport] {
        match &self.kind {
            VerdictKind::Finite { branches } | VerdictKind::Unresolved { branches, .. } => branches,
            _ => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.kind, VerdictKind::Empty)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("odd number {0} of nonreal roots")]
pub struct OddNonrealCount(pub usize);

/// Points of the quotient by complex conjugation: real solutions count
/// once, conjugate pairs once per pair.
pub fn conj_quotient_count(real: usize, nonreal: usize) -> Result<usize, OddNonrealCount> {
    if nonreal % 2 == 1 {
        return Err(OddNonrealCount(nonreal));
    }
    Ok(real + nonreal / 2)
}

/// Normalizes, propagates, eliminates and verifies.
pub fn realize(spec: &IncidenceSpec) -> Result<ModuliVerdict, ModuliError> {
    let frame = normalize(spec)?;
    let sys = propagate(&frame, spec);
    let elim = eliminate(&sys);
    let mut v = filter_degenerate(&elim, &sys, spec);
    v.anchors = [frame.anchor_a.clone(), frame.anchor_b.clone()];
    Ok(v)
}

enum LiftErr {
    Split(Split),
    Dead(String),
    Unresolved(String),
    /// The branch field is Q and `var` is algebraic over it: lift again
    /// with `var` as generator.
    Rebase { var: Var, poly: QPoly, fixed: Vec<(Var, Rat)> },
}

impl From<AlgebraError> for LiftErr {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::SplitRequired(s) => LiftErr::Split(s),
            e => LiftErr::Dead(e.to_string()),
        }
    }
}

impl From<GeomError> for LiftErr {
    fn from(e: GeomError) -> Self {
        match e.split() {
            Some(s) => LiftErr::Split(s.clone()),
            None => LiftErr::Dead(e.to_string()),
        }
    }
}

type Lifted = (Vec<ProjLine<CtxElem>>, BTreeMap<Var, CtxElem>);

/// Values of all variables above the roots of `ctx`, checked against every
/// equation, inequation and the target lattice.
fn lift_leaf(
    leaf: &Leaf,
    sys: &ConstraintSystem,
    spec: &IncidenceSpec,
    ctx: &Arc<BranchCtx>,
    job: &Job,
) -> Result<Lifted, LiftErr> {
    let mut vals: BTreeMap<Var, CtxElem> = BTreeMap::new();
    for (v, x) in &job.fixed {
        vals.insert(*v, ctx.constant(x.clone()));
    }
    if let LeafKind::Algebraic { var, equations, .. } = &leaf.kind {
        vals.insert(job.gen.unwrap_or(*var), ctx.generator());
        let mut pending: BTreeSet<Var> =
            equations.iter().flat_map(|e| e.vars()).filter(|v| !vals.contains_key(v)).collect();
        while !pending.is_empty() {
            let mut progress = false;
            for &w in &pending {
                let mut g: Vec<CtxElem> = Vec::new();
                let mut any = false;
                for e in equations.iter().filter(|e| e.contains_var(w)) {
                    if let Some(p) = specialize(e, w, &vals, ctx) {
                        g = gcd(g, p)?;
                        any = true;
                    }
                }
                if !any || g.is_empty() {
                    continue;
                }
                match g.len() {
                    1 => return Err(LiftErr::Dead(format!("no value of {w} above the branch"))),
                    2 => {
                        vals.insert(w, -&g[0]);
                        progress = true;
                        break;
                    }
                    _ if ctx.degree() == 1 => {
                        let coeff = |x: &CtxElem| ctx.reduce(x.rep()).coeff(0);
                        return Err(LiftErr::Rebase {
                            var: w,
                            poly: QPoly::new(g.iter().map(coeff).collect()),
                            fixed: vals.iter().map(|(v, x)| (*v, coeff(x))).collect(),
                        });
                    }
                    d => {
                        return Err(LiftErr::Unresolved(format!(
                            "{w} has degree {} over {}",
                            d - 1,
                            ctx
                        )))
                    }
                }
            }
            pending.retain(|v| !vals.contains_key(v));
            if !progress && !pending.is_empty() {
                let names: Vec<String> = pending.iter().map(|v| v.to_string()).collect();
                return Err(LiftErr::Unresolved(format!("cannot recover {}", names.join(", "))));
            }
        }
        for e in equations {
            if !eval_ctx(e, &vals, ctx).expect("all variables bound").is_zero()? {
                return Err(LiftErr::Dead("a remaining equation fails above the branch".into()));
            }
        }
    }
    for s in leaf.subs.iter().rev() {
        let num = eval_ctx(&s.num, &vals, ctx).expect("substitution variables bound");
        let den = eval_ctx(&s.den, &vals, ctx).expect("substitution variables bound");
        if den.is_zero()? {
            return Err(LiftErr::Dead(format!("pivot for {} vanishes", s.var)));
        }
        vals.insert(s.var, &num * &den.invert()?);
    }
    for g in &sys.inequations {
        let x = eval_ctx(&g.poly, &vals, ctx).ok_or_else(|| LiftErr::Unresolved("unbound variable".into()))?;
        if x.is_zero()? {
            return Err(LiftErr::Dead(format!("violates {}", g.origin)));
        }
    }
    let mut lines = Vec::new();
    for l in &sys.lines {
        let c: Vec<CtxElem> = l.iter().map(|p| eval_ctx(p, &vals, ctx).expect("line variables bound")).collect();
        lines.push(ProjLine::new(c[0].clone(), c[1].clone(), c[2].clone())?);
    }
    let arr = Arrangement::new(lines.clone()).map_err(|e| LiftErr::Dead(e.to_string()))?;
    let lat = compute_lattice(&arr).map_err(|e| match e {
        LatticeError::Geom(g) => LiftErr::from(g),
        e => LiftErr::Dead(e.to_string()),
    })?;
    if lat != spec.lattice() {
        return Err(LiftErr::Dead("realizes a different lattice".into()));
    }
    Ok((lines, vals))
}

/// Generator variable (the leaf variable when `None`) and rational values
/// fixed in advance.
struct Job {
    ctx: Arc<BranchCtx>,
    gen: Option<Var>,
    fixed: Vec<(Var, Rat)>,
}

fn sample_values(free: &[Var], attempt: usize) -> Vec<(Var, Rat)> {
    free.iter()
        .enumerate()
        .map(|(j, &v)| {
            let num = 3 + 7 * attempt as i64 + 5 * j as i64;
            let den = 2 + j as i64 + attempt as i64;
            (v, Rat::new(num.into(), den.into()))
        })
        .collect()
}

fn branch_report(ctx: &Arc<BranchCtx>, lines: Vec<ProjLine<CtxElem>>, values: BTreeMap<Var, CtxElem>) -> BranchReport {
    let degree = ctx.degree();
    let real = match ctx.modulus() {
        None => 1,
        Some(f) => real_root_count(f).expect("squarefree modulus"),
    };
    let nonreal = degree - real;
    let show = |x: &CtxElem| x.rep().display_in(ctx.var());
    BranchReport {
        var: ctx.var().to_string(),
        modulus: ctx.modulus().map(|f| f.display_in(ctx.var())),
        degree,
        real,
        nonreal,
        quotient_points: conj_quotient_count(real, nonreal).expect("conjugate roots pair up"),
        lines: lines.iter().map(|l| l.coeffs().clone().map(|c| show(&c))).collect(),
        ctx: ctx.clone(),
        arrangement: lines,
        values,
    }
}

/// Verifies each elimination leaf above its roots and assembles the
/// verdict. Roots where a pivot or inequation vanishes, or where the
/// lattice differs from the specification, are discarded with a
/// certificate.
pub fn filter_degenerate(elim: &Elimination, sys: &ConstraintSystem, spec: &IncidenceSpec) -> ModuliVerdict {
    let mut certificates = elim.dead.clone();
    let mut branches = Vec::new();
    let mut unresolved = Vec::new();
    let mut free_count = None;
    for leaf in &elim.leaves {
        let ctx = match &leaf.kind {
            LeafKind::Stuck { reason, .. } => {
                unresolved.push(reason.clone());
                continue;
            }
            LeafKind::Solved => BranchCtx::trivial(),
            LeafKind::Algebraic { var, modulus, .. } => match BranchCtx::new(*var, modulus) {
                Ok(c) => c,
                Err(e) => {
                    unresolved.push(e.to_string());
                    continue;
                }
            },
        };
        let attempts = if leaf.free.is_empty() { 1 } else { 6 };
        let mut survived = false;
        let mut leaf_certs = Vec::new();
        for attempt in 0..attempts {
            let mut jobs = vec![Job { ctx: ctx.clone(), gen: None, fixed: sample_values(&leaf.free, attempt) }];
            let mut results = Vec::new();
            while let Some(job) = jobs.pop() {
                let runs = split_branches(
                    &job.ctx,
                    |c| lift_leaf(leaf, sys, spec, c, &job),
                    |e: &LiftErr| match e {
                        LiftErr::Split(s) => Some(s.clone()),
                        _ => None,
                    },
                );
                for (c, r) in runs {
                    match r {
                        Err(LiftErr::Rebase { var, poly, fixed }) => {
                            match poly.squarefree_part().and_then(|f| BranchCtx::new(var, &f)) {
                                Ok(ctx) => jobs.push(Job { ctx, gen: Some(var), fixed }),
                                Err(e) => results.push((c, Err(LiftErr::Unresolved(e.to_string())))),
                            }
                        }
                        r => results.push((c, r)),
                    }
                }
            }
            for (c, r) in results {
                match r {
                    Ok((lines, vals)) => {
                        survived = true;
                        if leaf.free.is_empty() && leaf.specialized.is_empty() {
                            branches.push(branch_report(&c, lines, vals));
                        }
                    }
                    Err(LiftErr::Dead(reason)) => {
                        let mut path = leaf.path.clone();
                        if !c.is_trivial() {
                            path.push(format!("over {c}"));
                        }
                        leaf_certs.push(Certificate { path, reason });
                    }
                    Err(LiftErr::Unresolved(reason)) => unresolved.push(reason),
                    Err(LiftErr::Split(_) | LiftErr::Rebase { .. }) => unreachable!("splits and rebases are rerun"),
                }
            }
            if survived {
                break;
            }
        }
        if !leaf.specialized.is_empty() {
            let dims = leaf.free.len() + leaf.specialized.len();
            if survived {
                free_count = free_count.max(Some(dims));
            } else {
                unresolved.push(format!("a {dims}-dimensional case has no valid point at its sample"));
            }
        } else if !leaf.free.is_empty() {
            if survived {
                free_count = free_count.max(Some(leaf.free.len()));
            } else {
                unresolved.push(format!("no valid sample for free parameters of one case ({})", leaf_certs[0]));
            }
        } else {
            certificates.extend(leaf_certs);
        }
    }
    if !elim.inconclusive.is_empty() {
        unresolved.push(format!("{} dead ends below a specialization", elim.inconclusive.len()));
    }
    branches.sort_by(|a, b| (a.degree, &a.modulus).cmp(&(b.degree, &b.modulus)));
    let points: usize = branches.iter().map(|b| b.degree).sum();
    let quotient: usize = branches.iter().map(|b| b.quotient_points).sum();
    let (kind, mp, qp) = if let Some(free_count) = free_count {
        (VerdictKind::Parametric { free_count }, None, None)
    } else if !unresolved.is_empty() {
        unresolved.sort();
        unresolved.dedup();
        (VerdictKind::Unresolved { reasons: unresolved, branches }, None, None)
    } else if branches.is_empty() {
        (VerdictKind::Empty, Some(0), Some(0))
    } else {
        (VerdictKind::Finite { branches }, Some(points), Some(quotient))
    };
    ModuliVerdict {
        kind,
        moduli_points: mp,
        quotient_points: qp,
        certificates,
        anchors: [Vec::new(), Vec::new()],
        equations: sys.equations.len(),
        inequations: sys.inequations.len(),
    }
}
