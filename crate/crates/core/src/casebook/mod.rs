//! Encoded configurations and profile-level claims with their expected
//! outcomes, and a harness comparing them with computed results.
//!
//! Each case is a JSON file under `cases/`: a figure record carries the
//! fields of a specification file (`n_lines`, 1-based `points`, optional
//! `paper_equation`), other records carry a `check`. Both carry a
//! `paper_claim`, and optionally `notes`, `assumptions` and a declared
//! `discrepancy`.

mod verify;

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::moduli::{ArrangementFile, IncidenceSpec, SpecFile};

pub use verify::{run_all, run_records, verify_case, AggregateReport, CaseReport, Comparison};

mod bundled {
    include!(concat!(env!("OUT_DIR"), "/cases.rs"));
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PaperClaim {
    NotRealizable,
    Realizable {
        minpoly: String,
        moduli_points: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quotient_points: Option<usize>,
    },
    ProfileInfeasible,
    /// Every surviving profile satisfies these constraints.
    ProfileBounds { bounds: Vec<String> },
    /// The secondary point must lie on a line of the main point.
    CollinearForced,
    /// Exactly these members of the family are realizable.
    Family { realizable: Vec<String> },
    TripleCount { statement: usize, proof: usize },
    #[serde(rename = "n3_range")]
    NThreeRange { lower: usize, upper: usize },
    Solutions { solutions: Vec<Vec<usize>> },
    /// Adding a line through two multiple points cannot add moduli points.
    Extension,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Profiles {
        lines: usize,
        #[serde(default)]
        constraints: Vec<String>,
        #[serde(default)]
        nonreductive: bool,
    },
    Placement { k: usize, m: usize, r: usize },
    Family { ids: Vec<String> },
    TripleCount { figure: String },
    PencilBounds {
        k: usize,
        m: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<ArrangementFile>,
    },
    Distribution { pool: usize, total: usize, weights: Vec<usize> },
    Extension { figure: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_lines: Option<usize>,
    /// 1-based; taken from the lattice of `paper_equation` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<usize>>>,
    /// Further readings of an ambiguous description, all checked.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_equation: Option<ArrangementFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<Check>,
    pub paper_claim: PaperClaim,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assumptions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("{file}: {msg}")]
    MalformedCaseFile { file: String, msg: String },
    #[error("no case files in {0}")]
    EmptyCasebook(String),
}

impl CaseRecord {
    pub fn from_json(file: &str, text: &str) -> Result<Self, CaseError> {
        let malformed = |msg: String| CaseError::MalformedCaseFile { file: file.to_string(), msg };
        let rec: CaseRecord = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        rec.validate().map_err(malformed)?;
        Ok(rec)
    }

    fn validate(&self) -> Result<(), String> {
        match (&self.check, &self.n_lines) {
            (None, None) => return Err("figure record without n_lines".into()),
            (Some(_), Some(_)) => return Err("record has both a check and n_lines".into()),
            _ => {}
        }
        if self.check.is_none() {
            if self.points.is_none() && self.paper_equation.is_none() {
                return Err("figure record needs points or paper_equation".into());
            }
            self.specs()?;
            if let Some(eq) = &self.paper_equation {
                eq.env().map_err(|e| format!("paper_equation: {e}"))?;
            }
        }
        match &self.paper_claim {
            PaperClaim::Realizable { minpoly, .. } => {
                crate::algebra::parse_upoly(minpoly, crate::algebra::Var::T).map_err(|e| format!("minpoly: {e}"))?;
            }
            PaperClaim::ProfileBounds { bounds } => {
                for b in bounds {
                    b.parse::<crate::lattice::ProfileConstraint>().map_err(|e| format!("bound {b}: {e}"))?;
                }
            }
            _ => {}
        }
        if let Some(Check::Profiles { constraints, .. }) = &self.check {
            for c in constraints {
                c.parse::<crate::lattice::ProfileConstraint>().map_err(|e| format!("constraint {c}: {e}"))?;
            }
        }
        Ok(())
    }

    /// The specifications of a figure record: the main reading first.
    pub fn specs(&self) -> Result<Vec<IncidenceSpec>, String> {
        let Some(n) = self.n_lines else { return Ok(Vec::new()) };
        let main = match &self.points {
            Some(p) => p.clone(),
            None => {
                let eq = self.paper_equation.as_ref().expect("checked by validate");
                let (_, arr) = eq.build().map_err(|e| format!("paper_equation: {e}"))?;
                let l = crate::lattice::compute_lattice(&arr).map_err(|e| format!("paper_equation: {e}"))?;
                SpecFile::from_spec(&IncidenceSpec::from_lattice(&l)).points
            }
        };
        std::iter::once(main)
            .chain(self.variants.iter().cloned())
            .map(|points| {
                SpecFile { n_lines: n, points, paper_equation: None }.spec().map_err(|e| e.to_string())
            })
            .collect()
    }

    pub fn is_figure(&self) -> bool {
        self.check.is_none()
    }
}

/// Orders ids by their alphabetic prefix, then numerically by the digit
/// runs, so `fig2` precedes `fig10`.
pub fn id_order(a: &str, b: &str) -> Ordering {
    id_key(a).cmp(&id_key(b))
}

fn id_key(s: &str) -> Vec<(String, u64)> {
    let mut out = Vec::new();
    let mut text = String::new();
    let mut num = String::new();
    for c in s.chars() {
        if c.is_ascii_digit() {
            num.push(c);
        } else {
            if !num.is_empty() {
                out.push((std::mem::take(&mut text), num.parse().unwrap_or(u64::MAX)));
                num.clear();
            }
            text.push(c);
        }
    }
    out.push((text, if num.is_empty() { 0 } else { num.parse().unwrap_or(u64::MAX) }));
    out
}

fn sorted(mut recs: Vec<CaseRecord>) -> Vec<CaseRecord> {
    recs.sort_by(|a, b| id_order(&a.id, &b.id));
    recs
}

/// The bundled casebook, in id order.
pub fn load_casebook() -> Result<Vec<CaseRecord>, CaseError> {
    let recs = bundled::BUNDLED.iter().map(|(f, t)| CaseRecord::from_json(f, t)).collect::<Result<_, _>>()?;
    Ok(sorted(recs))
}

/// Case files from a directory, in id order.
pub fn load_casebook_dir(dir: &Path) -> Result<Vec<CaseRecord>, CaseError> {
    let malformed = |msg: String| CaseError::MalformedCaseFile { file: dir.display().to_string(), msg };
    let mut recs = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| malformed(e.to_string()))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    for p in entries {
        let text = std::fs::read_to_string(&p).map_err(|e| malformed(e.to_string()))?;
        recs.push(CaseRecord::from_json(&p.display().to_string(), &text)?);
    }
    if recs.is_empty() {
        return Err(CaseError::EmptyCasebook(dir.display().to_string()));
    }
    Ok(sorted(recs))
}

impl fmt::Display for PaperClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PaperClaim::NotRealizable => f.write_str("not realizable"),
            PaperClaim::Realizable { minpoly, moduli_points, quotient_points } => {
                write!(f, "realizable over {minpoly}=0, {moduli_points} points")?;
                if let Some(q) = quotient_points {
                    write!(f, ", quotient {q}")?;
                }
                Ok(())
            }
            PaperClaim::ProfileInfeasible => f.write_str("no feasible profile"),
            PaperClaim::ProfileBounds { bounds } => write!(f, "survivors satisfy {}", bounds.join(", ")),
            PaperClaim::CollinearForced => f.write_str("secondary point on a line of the main point"),
            PaperClaim::Family { realizable } => write!(f, "realizable members: {}", realizable.join(", ")),
            PaperClaim::TripleCount { statement, proof } => write!(f, "{statement} triple points (proof: {proof})"),
            PaperClaim::NThreeRange { lower, upper } => write!(f, "{lower} <= n3 <= {upper}"),
            PaperClaim::Solutions { solutions } => write!(f, "{} solutions", solutions.len()),
            PaperClaim::Extension => f.write_str("moduli do not grow under line addition"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_id_order() {
        let mut ids = vec!["fig10", "thm4.1", "fig2", "fig1", "thm3.1", "cor5.5"];
        ids.sort_by(|a, b| id_order(a, b));
        assert_eq!(ids, ["cor5.5", "fig1", "fig2", "fig10", "thm3.1", "thm4.1"]);
    }

    #[test]
    fn malformed_files_are_named() {
        let e = CaseRecord::from_json("x.json", "{\"id\": 1}").unwrap_err();
        assert!(matches!(e, CaseError::MalformedCaseFile { ref file, .. } if file == "x.json"));
        let e = CaseRecord::from_json("y.json", r#"{"id":"a","paper_claim":{"kind":"not_realizable"}}"#).unwrap_err();
        assert!(e.to_string().contains("n_lines"));
    }

    #[test]
    fn bundled_casebook_loads() {
        let book = load_casebook().unwrap();
        let figs: Vec<&str> = book.iter().filter(|r| r.is_figure()).map(|r| r.id.as_str()).collect();
        let want: Vec<String> = (1..=44).map(|k| format!("fig{k}")).collect();
        assert_eq!(figs, want);
    }
}
