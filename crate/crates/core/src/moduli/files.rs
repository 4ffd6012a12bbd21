//! JSON forms of specifications and explicit arrangements. Line indices
//! are 1-based in files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{IncidenceSpec, SpecError};
use crate::algebra::{parse_upoly, BranchCtx, Var};
use crate::geometry::{parse_line_in, LineParseError, ParamEnv};
use crate::lattice::{Arrangement, CtxArrangement};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FileError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("point {0}: line index 0 (indices are 1-based)")]
    ZeroIndex(usize),
    #[error("minpoly: {0}")]
    Minpoly(String),
    #[error("parameter {name}: {msg}")]
    Param { name: String, msg: String },
    #[error("line {index}: {error}")]
    Line { index: usize, error: LineParseError },
    #[error("{0}")]
    Arrangement(String),
}

/// Lines as linear forms, optionally over Q[t]/(minpoly), with named
/// parameters given as expressions in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub lines: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl ArrangementFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))
    }

    /// The parameter environment: `t` bound to the generator of the
    /// minimal polynomial's context, then each parameter in name order.
    pub fn env(&self) -> Result<ParamEnv, FileError> {
        let ctx = match &self.minpoly {
            None => BranchCtx::trivial(),
            Some(m) => {
                let f = parse_upoly(m, Var::T).map_err(|e| FileError::Minpoly(e.to_string()))?;
                BranchCtx::new(Var::T, &f).map_err(|e| FileError::Minpoly(e.to_string()))?
            }
        };
        let mut env = ParamEnv::new(ctx);
        for (name, text) in &self.params {
            let v: Var = name
                .parse()
                .map_err(|_| FileError::Param { name: name.clone(), msg: "not a parameter name".into() })?;
            env.define(v, text).map_err(|e| FileError::Param { name: name.clone(), msg: e.to_string() })?;
        }
        Ok(env)
    }

    /// Parses the lines. Undecided zero tests during parsing are errors:
    /// the minimal polynomial should be irreducible or at least make every
    /// denominator invertible.
    pub fn build(&self) -> Result<(ParamEnv, CtxArrangement), FileError> {
        let env = self.env()?;
        let mut lines = Vec::new();
        for (i, text) in self.lines.iter().enumerate() {
            lines.push(parse_line_in(text, &env).map_err(|error| FileError::Line { index: i + 1, error })?);
        }
        let arr = Arrangement::new(lines).map_err(|e| FileError::Arrangement(e.to_string()))?;
        Ok((env, arr))
    }
}

/// A specification file: `n_lines`, `points` (1-based), and optionally the
/// equation of a known realization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub n_lines: usize,
    pub points: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paper_equation: Option<ArrangementFile>,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::Json(e.to_string()))
    }

    pub fn from_spec(spec: &IncidenceSpec) -> Self {
        SpecFile {
            n_lines: spec.n_lines(),
            points: spec.points().iter().map(|p| p.iter().map(|i| i + 1).collect()).collect(),
            paper_equation: None,
        }
    }

    pub fn spec(&self) -> Result<IncidenceSpec, FileError> {
        let mut pts = Vec::new();
        for (k, p) in self.points.iter().enumerate() {
            if p.contains(&0) {
                return Err(FileError::ZeroIndex(k + 1));
            }
            pts.push(p.iter().map(|i| i - 1).collect());
        }
        Ok(IncidenceSpec::new(self.n_lines, pts)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let text = r#"{"n_lines": 4, "points": [[1, 2, 3]]}"#;
        let f = SpecFile::from_json(text).unwrap();
        let s = f.spec().unwrap();
        assert_eq!(s.points(), &[vec![0, 1, 2]]);
        assert_eq!(SpecFile::from_spec(&s), f);
        assert!(matches!(SpecFile::from_json(r#"{"n_lines": 4, "points": [[0, 1, 2]]}"#).unwrap().spec(), Err(FileError::ZeroIndex(1))));
        assert!(matches!(SpecFile::from_json("{"), Err(FileError::Json(_))));
    }

    #[test]
    fn arrangement_with_parameters() {
        let f = ArrangementFile {
            lines: vec!["X".into(), "Y".into(), "X-t1*Y".into()],
            minpoly: Some("t^2-2".into()),
            params: [("t1".to_string(), "t+1".to_string())].into_iter().collect(),
        };
        let (_, arr) = f.build().unwrap();
        assert_eq!(arr.len(), 3);
        let bad = ArrangementFile { lines: vec!["X".into(), "Y".into(), "X*Y".into()], ..f };
        assert!(matches!(bad.build(), Err(FileError::Line { index: 3, .. })));
    }
}
