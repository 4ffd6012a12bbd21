mod render;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arrmod_core::casebook::run_all;
use arrmod_core::lattice::{
    compute_lattice_branches, counting_identity, cover_number, enumerate_profiles, fmt_set, lattice_isomorphic,
    solve_line_distribution, IntersectionLattice, MultiplicityProfile, ProfileConstraint, ProfileQuery,
};
use arrmod_core::moduli::{realize, ArrangementFile, ModuliError, SpecFile, VerdictKind};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Read { path: String, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Usage(String),
    #[error("root {index} of {minpoly} is not real ({real} real roots, indexed from 0 in increasing order)")]
    NonRealRoot { index: usize, real: usize, minpoly: String },
    #[error("window must be finite with x0 < x1 and y0 < y1")]
    UnboundedWindow,
}

#[derive(Parser)]
#[command(name = "arrmod", version, about = "Exact computations with projective line arrangements")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Intersection lattice of an explicit arrangement.
    Lattice { file: PathBuf },
    /// Realizability of an incidence specification.
    Realize {
        spec: PathBuf,
        #[arg(long)]
        show_certificate: bool,
        #[arg(long)]
        branch_detail: bool,
    },
    /// Multiplicity profiles passing the combinatorial filters.
    Profiles {
        #[arg(long)]
        lines: usize,
        /// Constraint such as n6=1, n7>=1 or n4<=1. Repeatable.
        #[arg(long = "fix")]
        fix: Vec<String>,
        #[arg(long)]
        nonreductive: bool,
    },
    /// Checks every casebook record against the computation.
    VerifyPaper {
        /// Glob over case ids, e.g. 'fig4*'.
        #[arg(long = "case")]
        case: Option<String>,
        /// Directory of case files instead of the bundled casebook.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Lattice isomorphism between two spec or arrangement files.
    Isomorphic { a: PathBuf, b: PathBuf },
    /// Draws a real arrangement as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, num_args = 4, value_names = ["X0", "Y0", "X1", "Y1"], allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
        /// Real root of the minimal polynomial, 0 for the smallest.
        #[arg(long, default_value_t = 0)]
        root_index: usize,
    },
    /// Nonnegative line counts with given sum and weighted sum.
    Distribution {
        #[arg(long)]
        pool: usize,
        #[arg(long)]
        total: usize,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        weights: Vec<usize>,
    },
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Read { path: path.display().to_string(), msg: e.to_string() })
}

fn in_file<T>(path: &Path, r: Result<T, impl std::fmt::Display>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Read { path: path.display().to_string(), msg: e.to_string() })
}

fn profile_json(p: &MultiplicityProfile) -> Value {
    Value::Object((2..=p.k().max(2)).map(|r| (format!("n{r}"), json!(p.count(r)))).collect())
}

fn lattice_json(l: &IntersectionLattice) -> Value {
    let c = counting_identity(&l.profile());
    let (cover, witness) = cover_number(l);
    json!({
        "n_lines": l.n_lines(),
        "multiple_points": l.multiple_points().map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "profile": profile_json(&l.profile()),
        "counting_identity": {"lhs": c.lhs, "rhs": c.rhs, "holds": c.holds},
        "nonreductive": l.is_nonreductive(),
        "cover_number": cover,
        "cover_witness": witness.iter().map(|i| i + 1).collect::<Vec<_>>(),
    })
}

fn lattice_text(l: &IntersectionLattice) -> String {
    let c = counting_identity(&l.profile());
    let (cover, witness) = cover_number(l);
    format!(
        "{}counting identity: {} = {} ({})\nnonreductive: {}\ncover number: {} {}\n",
        l.report(),
        c.lhs,
        c.rhs,
        if c.holds { "holds" } else { "FAILS" },
        if l.is_nonreductive() { "yes" } else { "no" },
        cover,
        fmt_set(&witness)
    )
}

fn cmd_lattice(path: &Path) -> Result<Output, CliError> {
    let file = in_file(path, ArrangementFile::from_json(&read(path)?))?;
    let (_, arr) = in_file(path, file.build())?;
    let mut text = String::new();
    let mut branches = Vec::new();
    for (ctx, lat) in compute_lattice_branches(&arr) {
        let l = in_file(path, lat)?;
        if !ctx.is_trivial() {
            text.push_str(&format!("branch {}\n", ctx.modulus_string()));
        }
        text.push_str(&lattice_text(&l));
        let mut j = lattice_json(&l);
        j["branch"] = json!(ctx.modulus().map(|_| ctx.modulus_string()));
        branches.push(j);
    }
    Ok(Output::ok(text, json!({ "branches": branches })))
}

fn cmd_realize(path: &Path, show_cert: bool, detail: bool) -> Result<Output, CliError> {
    let spec = in_file(path, SpecFile::from_json(&read(path)?).and_then(|f| f.spec()))?;
    let v = match realize(&spec) {
        Ok(v) => v,
        Err(ModuliError::NoPencilPair) => {
            let msg = "no pair of multiple points to normalize against; the specification is outside the solver's scope";
            return Ok(Output { text: format!("NoPencilPair: {msg}\n"), json: json!({"kind": "NoPencilPair", "message": msg}), code: 3 });
        }
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    let mut text = format!("{}\nverdict: {}", spec, v.kind_name());
    match &v.kind {
        VerdictKind::Parametric { free_count } => text.push_str(&format!(" ({free_count} free parameters)")),
        VerdictKind::Unresolved { reasons, .. } => text.push_str(&format!(" ({})", reasons.join("; "))),
        _ => {}
    }
    text.push('\n');
    if let Some(n) = v.moduli_points {
        text.push_str(&format!("moduli points: {n}\n"));
    }
    if let Some(n) = v.quotient_points {
        text.push_str(&format!("conjugation quotient: {n}\n"));
    }
    for b in v.branches() {
        text.push_str(&format!(
            "branch {}: degree {} ({} real, {} nonreal), quotient {}\n",
            b.modulus.clone().unwrap_or_else(|| "rational".into()),
            b.degree,
            b.real,
            b.nonreal,
            b.quotient_points
        ));
        if detail {
            for (i, l) in b.lines.iter().enumerate() {
                text.push_str(&format!("  L{}: ({} : {} : {})\n", i + 1, l[0], l[1], l[2]));
            }
        }
    }
    if show_cert || v.is_empty() {
        for c in &v.certificates {
            text.push_str(&format!("certificate: {c}\n"));
        }
    }
    let code = match v.kind {
        VerdictKind::Finite { .. } | VerdictKind::Parametric { .. } => 0,
        VerdictKind::Empty => 2,
        VerdictKind::Unresolved { .. } => 4,
    };
    let json = serde_json::to_value(&v).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Output { text, json, code })
}

fn cmd_profiles(k: usize, fix: &[String], nonreductive: bool) -> Result<Output, CliError> {
    let mut q = ProfileQuery::new(k).nonreductive(nonreductive);
    for f in fix {
        q.constraints.push(f.parse::<ProfileConstraint>().map_err(|e| CliError::Usage(e.to_string()))?);
    }
    let ps = enumerate_profiles(&q).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text: String = ps.iter().map(|p| format!("{p}\n")).collect();
    text.push_str(&format!("{} profiles\n", ps.len()));
    let json = json!({
        "lines": k,
        "constraints": q.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "nonreductive": nonreductive,
        "profiles": ps.iter().map(profile_json).collect::<Vec<_>>(),
    });
    Ok(Output::ok(text, json))
}

fn cmd_verify(case: Option<&str>, dir: Option<&Path>) -> Result<Output, CliError> {
    let rep = run_all(dir, case).map_err(|e| CliError::Usage(format!("--case: {e}")))?;
    let code = if rep.failed() { 1 } else { 0 };
    let json = serde_json::to_value(&rep).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Output { text: rep.to_string(), json, code })
}

/// A lattice from either file kind; arrangement files must give the same
/// lattice on every branch.
fn load_lattice(path: &Path) -> Result<IntersectionLattice, CliError> {
    let text = read(path)?;
    let v: Value = in_file(path, serde_json::from_str(&text))?;
    if v.get("points").is_some() {
        let spec = in_file(path, SpecFile::from_json(&text).and_then(|f| f.spec()))?;
        return Ok(spec.lattice());
    }
    let file = in_file(path, ArrangementFile::from_json(&text))?;
    let (_, arr) = in_file(path, file.build())?;
    let mut lats = Vec::new();
    for (_, l) in compute_lattice_branches(&arr) {
        lats.push(in_file(path, l)?);
    }
    if lats.windows(2).any(|w| w[0].points() != w[1].points()) {
        return Err(CliError::Read { path: path.display().to_string(), msg: "the lattice depends on the root of the minpoly".into() });
    }
    Ok(lats.swap_remove(0))
}

fn cmd_isomorphic(a: &Path, b: &Path) -> Result<Output, CliError> {
    let (la, lb) = (load_lattice(a)?, load_lattice(b)?);
    Ok(match lattice_isomorphic(&la, &lb) {
        Ok(phi) => {
            let map: Vec<String> = phi.iter().enumerate().map(|(i, j)| format!("L{}->L{}", i + 1, j + 1)).collect();
            Output::ok(
                format!("isomorphic: {}\n", map.join(" ")),
                json!({"isomorphic": true, "permutation": phi.iter().map(|j| j + 1).collect::<Vec<_>>()}),
            )
        }
        Err(e) => Output {
            text: format!("not isomorphic: {e}\n"),
            json: json!({"isomorphic": false, "reason": e.to_string()}),
            code: 2,
        },
    })
}

fn cmd_render(path: &Path, out: &Path, window: Option<&[f64]>, root: usize) -> Result<Output, CliError> {
    let file = in_file(path, ArrangementFile::from_json(&read(path)?))?;
    let window = window.map(|w| render::Window { x0: w[0], y0: w[1], x1: w[2], y1: w[3] });
    let d = render::render(&file, window, root)?;
    fs::write(out, &d.svg).map_err(|e| CliError::Read { path: out.display().to_string(), msg: e.to_string() })?;
    let mut text = format!("wrote {} ({} lines, {} multiple points in view)\n", out.display(), d.lines_drawn.len(), d.points.len());
    for p in &d.points {
        text.push_str(&format!("  {} r={} at ({:.6}, {:.6})\n", fmt_set(&p.lines.iter().map(|i| i - 1).collect::<Vec<_>>()), p.lines.len(), p.x, p.y));
    }
    let mut json = serde_json::to_value(&d).map_err(|e| CliError::Input(e.to_string()))?;
    json["out"] = json!(out.display().to_string());
    Ok(Output::ok(text, json))
}

fn cmd_distribution(pool: usize, total: usize, weights: &[usize]) -> Result<Output, CliError> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(CliError::Usage("--weights must be positive".into()));
    }
    let sols = solve_line_distribution(pool, total, weights);
    let mut text: String = sols.iter().map(|s| format!("{s}\n")).collect();
    text.push_str(&format!("{} solutions\n", sols.len()));
    Ok(Output::ok(
        text,
        json!({"pool": pool, "total": total, "weights": weights, "solutions": sols.iter().map(|s| &s.counts).collect::<Vec<_>>()}),
    ))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.cmd {
        Cmd::Lattice { file } => cmd_lattice(file),
        Cmd::Realize { spec, show_certificate, branch_detail } => cmd_realize(spec, *show_certificate, *branch_detail),
        Cmd::Profiles { lines, fix, nonreductive } => cmd_profiles(*lines, fix, *nonreductive),
        Cmd::VerifyPaper { case, dir } => cmd_verify(case.as_deref(), dir.as_deref()),
        Cmd::Isomorphic { a, b } => cmd_isomorphic(a, b),
        Cmd::Render { file, out, window, root_index } => cmd_render(file, out, window.as_deref(), *root_index),
        Cmd::Distribution { pool, total, weights } => cmd_distribution(*pool, *total, weights),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"
            } else {
                out.text
            };
            let _ = stdout.write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
