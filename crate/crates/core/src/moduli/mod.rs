//! Realization spaces of incidence specifications.
//!
//! A specification lists the multiple points of an arrangement as sets of
//! line indices. Solving places two pencils in normal position, determines
//! the remaining lines by joins and meets, eliminates the parameters, and
//! keeps only solutions whose lattice is exactly the specified one.

mod files;
mod gauge;
mod lift;
mod normalize;
mod propagate;
mod shortcuts;
mod solve;
mod verdict;

use std::fmt;

use crate::algebra::AlgebraError;
use crate::lattice::{IntersectionLattice, LatticeSpecError};

pub use files::{ArrangementFile, FileError, SpecFile};
pub use gauge::{check_equations, frame_values, EquationCheck, GaugeError};
pub use normalize::{anchor_choices, normalize, normalize_with, NormalizationFrame, PencilSide, Slot};
pub use propagate::{propagate, ConstraintSystem, Labeled};
pub use shortcuts::{classify_shortcuts, reduce_arrangement, Reduction, ShortcutRule, VerdictShortcut};
pub use solve::{eliminate, Elimination, Leaf, LeafKind, Substitution};
pub use verdict::{
    conj_quotient_count, filter_degenerate, realize, BranchReport, Certificate, ModuliVerdict,
    OddNonrealCount, VerdictKind,
};

/// Multiple points of an arrangement of `n_lines` lines, each a sorted set
/// of at least three 0-based line indices. Unlisted pairs meet in double
/// points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IncidenceSpec {
    n_lines: usize,
    points: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("{0}")]
    Lattice(#[from] LatticeSpecError),
    #[error("point {} has fewer than three lines", crate::lattice::fmt_set(.0))]
    NotMultiple(Vec<usize>),
    #[error("need at least 3 lines")]
    TooFewLines,
}

impl IncidenceSpec {
    pub fn new(n_lines: usize, points: Vec<Vec<usize>>) -> Result<Self, SpecError> {
        if n_lines < 3 {
            return Err(SpecError::TooFewLines);
        }
        let lattice = IntersectionLattice::from_point_sets(n_lines, points.clone())?;
        if let Some(p) = points.iter().find(|p| {
            let mut q = (*p).clone();
            q.sort_unstable();
            q.dedup();
            q.len() < 3
        }) {
            return Err(SpecError::NotMultiple(p.clone()));
        }
        Ok(Self::from_lattice(&lattice))
    }

    /// The specification of a lattice's multiple points.
    pub fn from_lattice(l: &IntersectionLattice) -> Self {
        IncidenceSpec { n_lines: l.n_lines(), points: l.multiple_points().cloned().collect() }
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn lattice(&self) -> IntersectionLattice {
        IntersectionLattice::from_point_sets(self.n_lines, self.points.clone())
            .expect("validated specification")
    }

    /// Index of the multiple point through lines `i` and `j`.
    pub fn point_through(&self, i: usize, j: usize) -> Option<usize> {
        self.points.iter().position(|p| p.contains(&i) && p.contains(&j))
    }

    /// Relabels line `i` as `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> IncidenceSpec {
        Self::from_lattice(&self.lattice().relabel(perm))
    }
}

impl fmt::Display for IncidenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} lines;", self.n_lines)?;
        for p in &self.points {
            write!(f, " {}", crate::lattice::fmt_set(p))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModuliError {
    #[error("no pair of multiple points to normalize against")]
    NoPencilPair,
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
}
