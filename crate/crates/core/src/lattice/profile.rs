//! Multiplicity profiles and the combinatorial feasibility rules.
//!
//! Notation: `k` lines, `n_r` points of multiplicity `r`, `m` the largest
//! multiplicity present, `S` one point of multiplicity `m`. The lines
//! through `S` form the pencil `A` (`m` lines), the others the set `B`
//! (`k - m` lines). A point other than `S` lies on at most one line of `A`.
//!
//! Rules marked *nonreductive* assume every line passes through at least
//! three multiple points:
//!
//! * `pencil-lower-bound`: each line of `A` needs two more multiple points,
//!   each on no other line of `A`, so there are at least `2m + 1` multiple
//!   points in total.
//! * `line-incidence`: counting incidences, `sum_{r>=3} r n_r >= 3k`.
//! * `secondary-placement`: a second multiple point `P` of multiplicity `r`
//!   either avoids `A` (then its `r` lines are in `B` and `f = k - m - r`
//!   lines of `B` are free) or lies on one line of `A` (then `f = k - m - r +
//!   1`). Every multiple point on a line of `A` other than `S` uses a pair of
//!   `B` lines meeting there, and pairs of lines through `P` meet at `P`.
//!   So the first placement needs `f r + C(f,2) >= 2m` and the second needs
//!   `f (r-1) + C(f,2) >= 2(m-1)`.
//!
//! Always valid:
//!
//! * `counting-identity`: `C(k,2) = sum_r n_r C(r,2)`.
//! * `hirzebruch`: `n_2 + 3/4 n_3 >= k + sum_{r>=5} (2r-9) n_r` whenever
//!   `n_k = n_{k-1} = n_{k-2} = 0`.
//! * `transversal-pairs`: each point `P != S` has at least `r_P - 1` lines in
//!   `B`, whose pairs all meet at `P`, so `sum_P C(r_P - 1, 2) <= C(k-m, 2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rational::rat;
use crate::algebra::Rat;

fn c2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Counts `n_r` of points of each multiplicity `r >= 2` among `k` lines.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityProfile {
    k: usize,
    counts: BTreeMap<usize, u64>,
}

impl MultiplicityProfile {
    pub fn new(k: usize, counts: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut m = BTreeMap::new();
        for (r, n) in counts {
            assert!(r >= 2, "multiplicity must be at least 2");
            if n > 0 {
                *m.entry(r).or_insert(0) += n;
            }
        }
        MultiplicityProfile { k, counts: m }
    }

    pub fn from_multiplicities(k: usize, it: impl IntoIterator<Item = usize>) -> Self {
        Self::new(k, it.into_iter().map(|r| (r, 1)))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self, r: usize) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    /// Nonzero counts, ascending in `r`.
    pub fn counts(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&r, &n)| (r, n))
    }

    /// Largest multiplicity with a nonzero count (0 if none).
    pub fn max_multiplicity(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of points of multiplicity at least 3.
    pub fn multiple_points(&self) -> u64 {
        self.counts().filter(|&(r, _)| r >= 3).map(|(_, n)| n).sum()
    }

    /// Multiplicities of all points, descending, one entry per point.
    fn multiset(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for (r, n) in self.counts().collect::<Vec<_>>().into_iter().rev() {
            for _ in 0..n {
                v.push(r);
            }
        }
        v
    }
}

impl fmt::Display for MultiplicityProfile {
    /// `n_2=.. n_3=..` up to `max(6, largest r)`, capped at `k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let top = self.max_multiplicity().max(6).min(self.k.max(2));
        let parts: Vec<String> = (2..=top).map(|r| format!("n_{r}={}", self.count(r))).collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for MultiplicityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} {}", self.k, self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingCheck {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// `k(k-1)/2` against `sum_r n_r r(r-1)/2`.
pub fn counting_identity(p: &MultiplicityProfile) -> CountingCheck {
    let lhs = c2(p.k as u64);
    let rhs = p.counts().map(|(r, n)| n * c2(r as u64)).sum();
    CountingCheck { lhs, rhs, holds: lhs == rhs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HirzebruchVerdict {
    NotApplicable,
    Holds { lhs: Rat, rhs: Rat },
    Fails { lhs: Rat, rhs: Rat },
}

pub fn hirzebruch_check(p: &MultiplicityProfile) -> HirzebruchVerdict {
    let k = p.k;
    if k < 3 || (k - 2..=k).any(|r| p.count(r) > 0) {
        return HirzebruchVerdict::NotApplicable;
    }
    let lhs = rat(p.count(2) as i64) + Rat::new(3.into(), 4.into()) * rat(p.count(3) as i64);
    let mut rhs = rat(k as i64);
    for (r, n) in p.counts().filter(|&(r, _)| r >= 5) {
        rhs += rat((2 * r as i64 - 9) * n as i64);
    }
    if lhs >= rhs {
        HirzebruchVerdict::Holds { lhs, rhs }
    } else {
        HirzebruchVerdict::Fails { lhs, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    CountingIdentity,
    Hirzebruch,
    TransversalPairs,
    PencilLowerBound,
    LineIncidence,
    SecondaryPlacement,
    User,
}

impl RuleId {
    pub fn name(self) -> &'static str {
        match self {
            RuleId::CountingIdentity => "counting-identity",
            RuleId::Hirzebruch => "hirzebruch",
            RuleId::TransversalPairs => "transversal-pairs",
            RuleId::PencilLowerBound => "pencil-lower-bound",
            RuleId::LineIncidence => "line-incidence",
            RuleId::SecondaryPlacement => "secondary-placement",
            RuleId::User => "constraint",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ge,
    Le,
}

/// A condition `n_r (=|>=|<=) value`, written e.g. `n6=1` or `n7>=1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileConstraint {
    pub r: usize,
    pub cmp: Cmp,
    pub value: u64,
}

impl ProfileConstraint {
    pub fn holds(&self, p: &MultiplicityProfile) -> bool {
        let n = p.count(self.r);
        match self.cmp {
            Cmp::Eq => n == self.value,
            Cmp::Ge => n >= self.value,
            Cmp::Le => n <= self.value,
        }
    }

    fn bounds(&self) -> (u64, u64) {
        match self.cmp {
            Cmp::Eq => (self.value, self.value),
            Cmp::Ge => (self.value, u64::MAX),
            Cmp::Le => (0, self.value),
        }
    }
}

impl fmt::Display for ProfileConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.cmp {
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
        };
        write!(f, "n{}{op}{}", self.r, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("profile enumeration is limited to k <= 16 lines, got {0}")]
    GuardExceeded(usize),
    #[error("bad constraint `{0}`: expected e.g. n6=1, n7>=1, n4<=1")]
    BadConstraint(String),
}

impl FromStr for ProfileConstraint {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ProfileError::BadConstraint(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = t.strip_prefix('n').ok_or_else(bad)?;
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        let (r, cmp, v) = if let Some((r, v)) = rest.split_once(">=") {
            (r, Cmp::Ge, v)
        } else if let Some((r, v)) = rest.split_once("<=") {
            (r, Cmp::Le, v)
        } else if let Some((r, v)) = rest.split_once('=') {
            (r, Cmp::Eq, v)
        } else {
            return Err(bad());
        };
        let r: usize = r.parse().map_err(|_| bad())?;
        let value: u64 = v.parse().map_err(|_| bad())?;
        if r < 2 {
            return Err(bad());
        }
        Ok(ProfileConstraint { r, cmp, value })
    }
}

/// Profiles to enumerate: `k` lines, user constraints, and whether the
/// nonreductive rules apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileQuery {
    pub k: usize,
    pub constraints: Vec<ProfileConstraint>,
    pub nonreductive: bool,
}

impl ProfileQuery {
    pub fn new(k: usize) -> Self {
        ProfileQuery { k, constraints: Vec::new(), nonreductive: false }
    }

    pub fn with(mut self, c: &str) -> Self {
        self.constraints.push(c.parse().expect("valid constraint"));
        self
    }

    pub fn nonreductive(mut self, on: bool) -> Self {
        self.nonreductive = on;
        self
    }

    /// The first rule the profile violates, if any.
    pub fn violation(&self, p: &MultiplicityProfile) -> Option<RuleId> {
        if !counting_identity(p).holds {
            return Some(RuleId::CountingIdentity);
        }
        if self.constraints.iter().any(|c| !c.holds(p)) {
            return Some(RuleId::User);
        }
        if let HirzebruchVerdict::Fails { .. } = hirzebruch_check(p) {
            return Some(RuleId::Hirzebruch);
        }
        if !transversal_pairs(p) {
            return Some(RuleId::TransversalPairs);
        }
        if self.nonreductive {
            let k = p.k as u64;
            let m = p.max_multiplicity() as u64;
            if m < 3 || p.multiple_points() < 2 * m + 1 {
                return Some(RuleId::PencilLowerBound);
            }
            let incidences: u64 = p.counts().filter(|&(r, _)| r >= 3).map(|(r, n)| r as u64 * n).sum();
            if incidences < 3 * k {
                return Some(RuleId::LineIncidence);
            }
            if !secondary_placement(p) {
                return Some(RuleId::SecondaryPlacement);
            }
        }
        None
    }
}

fn transversal_pairs(p: &MultiplicityProfile) -> bool {
    let mult = p.multiset();
    let Some((&m, rest)) = mult.split_first() else {
        return true;
    };
    let lhs: u64 = rest.iter().map(|&r| c2(r as u64 - 1)).sum();
    lhs <= c2((p.k - m) as u64)
}

/// Where a point of multiplicity `r` can sit next to the main point of
/// multiplicity `m` among `k` lines of a nonreductive arrangement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    /// On no line of the main point.
    pub off_pencil: bool,
    /// On one line of the main point.
    pub on_pencil: bool,
}

pub fn placement(k: usize, m: usize, r: usize) -> Placement {
    let (k, m, r) = (k as i64, m as i64, r as i64);
    let off_pencil = {
        let f = k - m - r;
        f >= 0 && f * r + f * (f - 1) / 2 >= 2 * m
    };
    let on_pencil = {
        let f = k - m - r + 1;
        f >= 0 && f * (r - 1) + f * (f - 1) / 2 >= 2 * (m - 1)
    };
    Placement { off_pencil, on_pencil }
}

pub fn placement_feasible(k: usize, m: usize, r: usize) -> bool {
    let p = placement(k, m, r);
    p.off_pencil || p.on_pencil
}

fn secondary_placement(p: &MultiplicityProfile) -> bool {
    let mult = p.multiset();
    let Some((&m, rest)) = mult.split_first() else {
        return true;
    };
    rest.iter().filter(|&&r| r >= 3).all(|&r| placement_feasible(p.k, m, r))
}

/// All profiles of `k` lines satisfying the counting identity and every rule
/// of the query, in a deterministic order (descending lexicographic in
/// `(n_k, ..., n_2)`).
pub fn enumerate_profiles(q: &ProfileQuery) -> Result<Vec<MultiplicityProfile>, ProfileError> {
    if q.k > 16 {
        return Err(ProfileError::GuardExceeded(q.k));
    }
    if q.k < 2 {
        return Ok(Vec::new());
    }
    let total = c2(q.k as u64);
    let mut bounds: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for c in &q.constraints {
        let (lo, hi) = c.bounds();
        let e = bounds.entry(c.r).or_insert((0, u64::MAX));
        e.0 = e.0.max(lo);
        e.1 = e.1.min(hi);
    }
    let mut out = Vec::new();
    let mut counts: Vec<(usize, u64)> = Vec::new();
    recurse(q, q.k, total, &bounds, &mut counts, &mut out);
    Ok(out)
}

fn recurse(
    q: &ProfileQuery,
    r: usize,
    remaining: u64,
    bounds: &BTreeMap<usize, (u64, u64)>,
    counts: &mut Vec<(usize, u64)>,
    out: &mut Vec<MultiplicityProfile>,
) {
    let (lo, hi) = bounds.get(&r).copied().unwrap_or((0, u64::MAX));
    if r == 2 {
        if remaining >= lo && remaining <= hi {
            counts.push((2, remaining));
            let p = MultiplicityProfile::new(q.k, counts.iter().copied());
            counts.pop();
            if q.violation(&p).is_none() {
                out.push(p);
            }
        }
        return;
    }
    let w = c2(r as u64);
    let max_n = (remaining / w).min(hi);
    for n in (lo..=max_n).rev() {
        counts.push((r, n));
        recurse(q, r - 1, remaining - n * w, bounds, counts, out);
        counts.pop();
    }
}

/// Reference enumeration for small `k`: every vector with
/// `0 <= n_r <= C(k,2)`, filtered by the counting identity and the query.
pub fn enumerate_profiles_brute(q: &ProfileQuery) -> Vec<MultiplicityProfile> {
    assert!(q.k <= 8, "brute force only for k <= 8");
    let total = c2(q.k as u64);
    let rs: Vec<usize> = (2..=q.k).collect();
    let mut out = Vec::new();
    let mut idx = vec![0u64; rs.len()];
    loop {
        let p = MultiplicityProfile::new(q.k, rs.iter().copied().zip(idx.iter().copied()));
        if q.violation(&p).is_none() {
            out.push(p);
        }
        // odometer over [0, total] per coordinate
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                out.sort_by(|a, b| b.cmp_key().cmp(&a.cmp_key()));
                return out;
            }
            idx[pos] += 1;
            if idx[pos] <= total && weighted(&rs, &idx) <= total {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn weighted(rs: &[usize], idx: &[u64]) -> u64 {
    rs.iter().zip(idx).map(|(&r, &n)| n * c2(r as u64)).sum()
}

impl MultiplicityProfile {
    /// `(n_k, ..., n_2)`, the enumeration order key.
    pub fn cmp_key(&self) -> Vec<u64> {
        (2..=self.k).rev().map(|r| self.count(r)).collect()
    }

    /// Whether the counts are all zero.
    pub fn is_empty(&self) -> bool {
        self.counts.values().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(k: usize, c: &[(usize, u64)]) -> MultiplicityProfile {
        MultiplicityProfile::new(k, c.iter().copied())
    }

    #[test]
    fn counting_examples() {
        let c = counting_identity(&prof(3, &[(3, 1)]));
        assert_eq!((c.lhs, c.rhs, c.holds), (3, 3, true));
        // n_6=1, n_4=1, n_3=10 forces n_2 = 66-15-6-30 = 15
        let c = counting_identity(&prof(12, &[(6, 1), (4, 1), (3, 10), (2, 15)]));
        assert!(c.holds);
        assert_eq!(c.lhs, 66);
    }

    #[test]
    fn hirzebruch_examples() {
        let p = prof(12, &[(6, 1), (4, 1), (3, 12), (2, 13)]);
        assert_eq!(
            hirzebruch_check(&p),
            HirzebruchVerdict::Holds { lhs: rat(22), rhs: rat(15) }
        );
        assert_eq!(hirzebruch_check(&prof(12, &[(10, 1)])), HirzebruchVerdict::NotApplicable);
    }

    #[test]
    fn constraint_parsing() {
        let c: ProfileConstraint = "n7>=1".parse().unwrap();
        assert_eq!(c, ProfileConstraint { r: 7, cmp: Cmp::Ge, value: 1 });
        assert_eq!("n_6 = 1".parse::<ProfileConstraint>().unwrap().to_string(), "n6=1");
        assert!("m6=1".parse::<ProfileConstraint>().is_err());
        assert!("n1=1".parse::<ProfileConstraint>().is_err());
    }

    #[test]
    fn three_lines() {
        let ps = enumerate_profiles(&ProfileQuery::new(3)).unwrap();
        assert_eq!(ps, vec![prof(3, &[(3, 1)]), prof(3, &[(2, 3)])]);
    }

    #[test]
    fn placement_table_for_twelve_lines() {
        assert!(!placement_feasible(12, 6, 6));
        assert!(!placement_feasible(12, 6, 5));
        assert!(placement_feasible(12, 6, 4));
        assert!(placement_feasible(12, 6, 3));
    }

    #[test]
    fn guard() {
        assert_eq!(enumerate_profiles(&ProfileQuery::new(17)), Err(ProfileError::GuardExceeded(17)));
    }
}
