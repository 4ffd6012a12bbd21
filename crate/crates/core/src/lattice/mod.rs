//! Intersection lattices of line arrangements and their combinatorics.
//!
//! Line indices are 0-based in the API and 1-based in every text or JSON
//! form.

mod cover;
mod distribution;
mod iso;
mod profile;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{BranchCtx, CtxElem, Split};
use crate::geometry::{incident, meet, GeomError, ProjLine, Scalar, Verdict};

pub use cover::{cover_number, is_simple_c3, C3Clause, CoverError, SimpleC3Witness};
pub use distribution::{
    pencil_family_triple_bounds, solve_line_distribution, LineDistribution, PencilFamilyBounds,
    PencilFamilyRow,
};
pub use iso::{lattice_isomorphic, NonIsomorphism};
pub use profile::{
    counting_identity, enumerate_profiles, enumerate_profiles_brute, hirzebruch_check, placement,
    placement_feasible, Cmp, CountingCheck, HirzebruchVerdict, MultiplicityProfile, Placement,
    ProfileConstraint, ProfileError, ProfileQuery, RuleId,
};

/// An ordered list of lines over a common scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement<S> {
    lines: Vec<ProjLine<S>>,
}

pub type CtxArrangement = Arrangement<CtxElem>;

impl<S: Scalar> Arrangement<S> {
    pub fn new(lines: Vec<ProjLine<S>>) -> Result<Self, LatticeError> {
        if lines.len() < 3 {
            return Err(LatticeError::TooFewLines(lines.len()));
        }
        Ok(Arrangement { lines })
    }

    pub fn lines(&self) -> &[ProjLine<S>] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Arrangement<T> {
        Arrangement { lines: self.lines.iter().map(|l| l.map(&f)).collect() }
    }
}

impl CtxArrangement {
    pub fn restrict(&self, ctx: &Arc<BranchCtx>) -> CtxArrangement {
        self.map(|x| x.restrict(ctx))
    }

    pub fn ctx(&self) -> &Arc<BranchCtx> {
        self.lines[0].coeffs()[0].ctx()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("an arrangement needs at least 3 lines, got {0}")]
    TooFewLines(usize),
    #[error("lines L{} and L{} coincide", .0 + 1, .1 + 1)]
    CoincidentLines(usize, usize),
    #[error("{0}")]
    Geom(#[from] GeomError),
}

impl LatticeError {
    pub fn split(&self) -> Option<&Split> {
        match self {
            LatticeError::Geom(e) => e.split(),
            _ => None,
        }
    }
}

/// The lattice as its points: each point is the sorted set of lines through
/// it. Every pair of lines lies in exactly one point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionLattice {
    n_lines: usize,
    points: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeSpecError {
    #[error("line index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("point {0:?} has fewer than two lines")]
    TooSmall(Vec<usize>),
    #[error("lines L{} and L{} lie on two listed points", .0 + 1, .1 + 1)]
    SharedPair(usize, usize),
}

impl IntersectionLattice {
    /// Builds a lattice from point sets; pairs not covered become double
    /// points.
    pub fn from_point_sets(
        n_lines: usize,
        sets: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, LatticeSpecError> {
        let mut covered = vec![vec![false; n_lines]; n_lines];
        let mut points = Vec::new();
        for s in sets {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            if let Some(&bad) = set.iter().find(|&&i| i >= n_lines) {
                return Err(LatticeSpecError::IndexOutOfRange(bad + 1, n_lines));
            }
            let set: Vec<usize> = set.into_iter().collect();
            if set.len() < 2 {
                return Err(LatticeSpecError::TooSmall(s));
            }
            for (a, &i) in set.iter().enumerate() {
                for &j in &set[a + 1..] {
                    if covered[i][j] {
                        return Err(LatticeSpecError::SharedPair(i, j));
                    }
                    covered[i][j] = true;
                }
            }
            points.push(set);
        }
        for i in 0..n_lines {
            for j in i + 1..n_lines {
                if !covered[i][j] {
                    points.push(vec![i, j]);
                }
            }
        }
        points.sort();
        Ok(IntersectionLattice { n_lines, points })
    }

    pub fn n_lines(&self) -> usize {
        self.n_lines
    }

    /// All points including double points, sorted.
    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    /// Points of multiplicity at least 3.
    pub fn multiple_points(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.points.iter().filter(|p| p.len() >= 3)
    }

    pub fn profile(&self) -> MultiplicityProfile {
        MultiplicityProfile::from_multiplicities(self.n_lines, self.points.iter().map(Vec::len))
    }

    /// Number of points of multiplicity at least 3 on each line.
    pub fn multiple_point_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n_lines];
        for p in self.multiple_points() {
            for &i in p {
                c[i] += 1;
            }
        }
        c
    }

    /// Every line passes through at least 3 multiple points.
    pub fn is_nonreductive(&self) -> bool {
        self.multiple_point_counts().iter().all(|&c| c >= 3)
    }

    /// Multiplicities of the multiple points on `line`, descending.
    pub fn line_signature(&self, line: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .multiple_points()
            .filter(|p| p.contains(&line))
            .map(Vec::len)
            .collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// `table[i][j]` is the index of the point containing lines `i` and `j`.
    pub fn pair_table(&self) -> Vec<Vec<usize>> {
        let mut t = vec![vec![usize::MAX; self.n_lines]; self.n_lines];
        for (k, p) in self.points.iter().enumerate() {
            for &i in p {
                for &j in p {
                    if i != j {
                        t[i][j] = k;
                    }
                }
            }
        }
        t
    }

    /// The lattice after renaming line `i` to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> IntersectionLattice {
        let mut points: Vec<Vec<usize>> = self
            .points
            .iter()
            .map(|p| {
                let mut q: Vec<usize> = p.iter().map(|&i| perm[i]).collect();
                q.sort_unstable();
                q
            })
            .collect();
        points.sort();
        IntersectionLattice { n_lines: self.n_lines, points }
    }

    /// The lattice of the sub-arrangement on the kept lines, renumbered in
    /// increasing order.
    pub fn restrict_lines(&self, keep: &[usize]) -> IntersectionLattice {
        let mut new_index = vec![usize::MAX; self.n_lines];
        for (k, &i) in keep.iter().enumerate() {
            new_index[i] = k;
        }
        let sets = self.multiple_points().filter_map(|p| {
            let q: Vec<usize> = p.iter().filter(|&&i| new_index[i] != usize::MAX).map(|&i| new_index[i]).collect();
            (q.len() >= 3).then_some(q)
        });
        IntersectionLattice::from_point_sets(keep.len(), sets.collect::<Vec<_>>())
            .expect("restriction of a valid lattice")
    }

    /// Text table: multiple points by descending multiplicity, then the
    /// number of double points and the profile line.
    pub fn report(&self) -> String {
        let mut mult: Vec<&Vec<usize>> = self.multiple_points().collect();
        mult.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut out = String::new();
        let _ = writeln!(out, "lines: {}", self.n_lines);
        let _ = writeln!(out, "multiple points:");
        for p in mult {
            let _ = writeln!(out, "  {:<28} r={}", fmt_set(p), p.len());
        }
        let doubles = self.points.len() - self.multiple_points().count();
        let _ = writeln!(out, "double points: {doubles}");
        let _ = writeln!(out, "{}", self.profile());
        out
    }
}

/// `{1,2,3}` with 1-based indices.
pub fn fmt_set(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Computes the lattice of an arrangement. Undecided zero tests surface as
/// split errors; see [`compute_lattice_branches`].
pub fn compute_lattice<S: Scalar>(arr: &Arrangement<S>) -> Result<IntersectionLattice, LatticeError> {
    let n = arr.lines.len();
    for i in 0..n {
        for j in i + 1..n {
            if arr.lines[i].same_as(&arr.lines[j])?.decided().map_err(GeomError::from)? {
                return Err(LatticeError::CoincidentLines(i, j));
            }
        }
    }
    let mut covered = vec![vec![false; n]; n];
    let mut sets = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if covered[i][j] {
                continue;
            }
            let p = meet(&arr.lines[i], &arr.lines[j]).map_err(|e| match e {
                GeomError::CoincidentLines => LatticeError::CoincidentLines(i, j),
                e => e.into(),
            })?;
            let mut set = vec![i, j];
            for k in 0..n {
                if k != i && k != j && incident(&p, &arr.lines[k])?.decided().map_err(GeomError::from)? {
                    set.push(k);
                }
            }
            set.sort_unstable();
            for &a in &set {
                for &b in &set {
                    covered[a][b] = true;
                }
            }
            sets.push(set);
        }
    }
    Ok(IntersectionLattice::from_point_sets(n, sets).expect("computed points partition the pairs"))
}

/// Lattice of each branch of an arrangement over a branch context. Branches
/// come back sorted by modulus degree, then modulus text.
pub fn compute_lattice_branches(
    arr: &CtxArrangement,
) -> Vec<(Arc<BranchCtx>, Result<IntersectionLattice, LatticeError>)> {
    let mut out = crate::algebra::ctx::split_branches(
        arr.ctx(),
        |c| compute_lattice(&arr.restrict(c)),
        |e: &LatticeError| e.split().cloned(),
    );
    out.sort_by(|a, b| {
        (a.0.degree(), a.0.modulus_string()).cmp(&(b.0.degree(), b.0.modulus_string()))
    });
    out
}

/// Whether three lines of an arrangement are concurrent (with splitting).
pub fn lines_concurrent<S: Scalar>(arr: &Arrangement<S>, i: usize, j: usize, k: usize) -> Result<Verdict, GeomError> {
    crate::geometry::concurrent(&arr.lines[i], &arr.lines[j], &arr.lines[k])
}
