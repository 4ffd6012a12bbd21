use std::fmt;

use serde::Serialize;

use super::IncidenceSpec;
use crate::lattice::{is_simple_c3, IntersectionLattice};

/// Result of repeatedly deleting lines through at most two multiple
/// points. Irreducibility of the reduced moduli space carries over to the
/// original one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub reduced: IncidenceSpec,
    /// Deleted lines, as original indices, in deletion order.
    pub removed: Vec<usize>,
    /// Original index of each line of the reduced specification.
    pub kept: Vec<usize>,
}

impl Reduction {
    pub fn changed(&self) -> bool {
        !self.removed.is_empty()
    }
}

/// Deletes the highest-indexed line with at most two multiple points until
/// none is left (or fewer than 3 lines remain).
pub fn reduce_arrangement(spec: &IncidenceSpec) -> Reduction {
    let mut lat = spec.lattice();
    let mut kept: Vec<usize> = (0..spec.n_lines()).collect();
    let mut removed = Vec::new();
    while kept.len() > 3 {
        let counts = lat.multiple_point_counts();
        let Some(i) = (0..kept.len()).rev().find(|&i| counts[i] <= 2) else {
            break;
        };
        removed.push(kept.remove(i));
        let keep: Vec<usize> = (0..counts.len()).filter(|&j| j != i).collect();
        lat = lat.restrict_lines(&keep);
    }
    Reduction { reduced: IncidenceSpec::from_lattice(&lat), removed, kept }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShortcutRule {
    /// A point of multiplicity at least n - 4: the moduli space is irreducible.
    HighMultiplicity,
    /// Simple C_3 type: the moduli space is irreducible.
    SimpleC3,
    /// Some line passes through at most two multiple points and may be
    /// deleted.
    Reducible,
}

impl ShortcutRule {
    pub fn name(self) -> &'static str {
        match self {
            ShortcutRule::HighMultiplicity => "multiplicity >= n-4 implies irreducible",
            ShortcutRule::SimpleC3 => "simple C_3 implies irreducible",
            ShortcutRule::Reducible => "line with <= 2 multiple points may be deleted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictShortcut {
    pub rule: ShortcutRule,
    pub detail: String,
}

impl fmt::Display for VerdictShortcut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule.name(), self.detail)
    }
}

/// Known results whose hypotheses hold for the lattice. Advisory only.
pub fn classify_shortcuts(l: &IntersectionLattice) -> Vec<VerdictShortcut> {
    let mut out = Vec::new();
    let n = l.n_lines();
    let m = l.profile().max_multiplicity();
    if m >= 3 && m + 4 >= n {
        out.push(VerdictShortcut {
            rule: ShortcutRule::HighMultiplicity,
            detail: format!("point of multiplicity {m} among {n} lines"),
        });
    }
    if let Ok(Some(w)) = is_simple_c3(l) {
        let [a, b, c] = w.lines;
        out.push(VerdictShortcut {
            rule: ShortcutRule::SimpleC3,
            detail: format!("multiple points covered by L{}, L{}, L{}", a + 1, b + 1, c + 1),
        });
    }
    let counts = l.multiple_point_counts();
    if let Some(i) = (0..n).rev().find(|&i| counts[i] <= 2) {
        out.push(VerdictShortcut {
            rule: ShortcutRule::Reducible,
            detail: format!("L{} passes through {} multiple points", i + 1, counts[i]),
        });
    }
    out
}
