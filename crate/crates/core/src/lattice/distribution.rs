//! Distributions of triple points over the lines outside a high
//! multiplicity point, when every triple point lies on that point's pencil.

use std::fmt;

use num_integer::binomial;
use serde::Serialize;

/// `counts[i]` lines each carrying `weights[i]` triple points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LineDistribution {
    pub weights: Vec<usize>,
    pub counts: Vec<usize>,
}

impl LineDistribution {
    pub fn pool(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn weighted_total(&self) -> usize {
        self.weights.iter().zip(&self.counts).map(|(w, c)| w * c).sum()
    }

    /// Number of lines carrying exactly `w` triple points.
    pub fn lines_with(&self, w: usize) -> usize {
        self.weights.iter().position(|&x| x == w).map_or(0, |i| self.counts[i])
    }
}

impl fmt::Display for LineDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All nonnegative `counts` with `Σ counts = pool` and
/// `Σ weights[i]·counts[i] = total`, in lexicographic order.
pub fn solve_line_distribution(pool: usize, total: usize, weights: &[usize]) -> Vec<LineDistribution> {
    let mut out = Vec::new();
    let mut counts = vec![0; weights.len()];
    descend(weights, 0, pool, total, &mut counts, &mut out);
    out
}

fn descend(
    weights: &[usize],
    i: usize,
    pool_left: usize,
    total_left: usize,
    counts: &mut Vec<usize>,
    out: &mut Vec<LineDistribution>,
) {
    if i == weights.len() {
        if pool_left == 0 && total_left == 0 {
            out.push(LineDistribution { weights: weights.to_vec(), counts: counts.clone() });
        }
        return;
    }
    let rest = &weights[i + 1..];
    let (lo, hi) = (rest.iter().min(), rest.iter().max());
    for c in 0..=pool_left {
        let used = c * weights[i];
        if used > total_left {
            break;
        }
        let (p, t) = (pool_left - c, total_left - used);
        let fits = match (lo, hi) {
            (Some(&lo), Some(&hi)) => p * lo <= t && t <= p * hi,
            _ => p == 0 && t == 0,
        };
        if fits {
            counts[i] = c;
            descend(weights, i + 1, p, t, counts, out);
        }
    }
    counts[i] = 0;
}

/// One candidate triple point count with its distribution systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilFamilyRow {
    pub n3: usize,
    /// Solutions with lines carrying `min_per_line..=pencil size` points.
    pub solutions: Vec<LineDistribution>,
    /// Those respecting the per-line cap.
    pub surviving: Vec<LineDistribution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilFamilyBounds {
    pub k: usize,
    pub m: usize,
    /// From the pencil lines each needing two triple points.
    pub lower: usize,
    /// From the counting identity and the Hirzebruch inequality.
    pub upper_counting: usize,
    /// Most triple points a line off the pencil can carry.
    pub per_line_cap: usize,
    pub rows: Vec<PencilFamilyRow>,
    /// Counts in `lower..=upper_counting` with a surviving distribution.
    pub feasible: Vec<usize>,
}

/// Nonreductive arrangements of `k` lines with one point of multiplicity
/// `m`, no other points above multiplicity 3, and every triple point on a
/// line through the `m`-fold point.
///
/// A triple point then lies on one pencil line and two of the `k - m`
/// other lines, so those lines carry `2·n3` incidences in total. Each
/// carries at least 3 triple points and at most
/// `min(m, k - m - 1)`.
pub fn pencil_family_triple_bounds(k: usize, m: usize) -> PencilFamilyBounds {
    assert!(m >= 3 && m + 3 <= k, "needs 3 <= m <= k - 3");
    let pool = k - m;
    let lower = 2 * m;
    // n2 = C(k,2) - C(m,2) - 3 n3 and n2 + 3/4 n3 >= k + (2m - 9)^+.
    let hir = if m >= 5 { 2 * m - 9 } else { 0 };
    let slack = binomial(k, 2) as i64 - binomial(m, 2) as i64 - k as i64 - hir as i64;
    let by_hirzebruch = if slack < 0 { 0 } else { (4 * slack / 9) as usize };
    let by_counting = (binomial(k, 2) - binomial(m, 2)) / 3;
    let upper_counting = by_hirzebruch.min(by_counting);
    let per_line_cap = m.min(pool - 1);
    let weights: Vec<usize> = (3..=m.max(3)).collect();
    let mut rows = Vec::new();
    for n3 in lower..=upper_counting {
        let solutions = solve_line_distribution(pool, 2 * n3, &weights);
        let surviving = solutions
            .iter()
            .filter(|d| d.weights.iter().zip(&d.counts).all(|(&w, &c)| c == 0 || w <= per_line_cap))
            .cloned()
            .collect();
        rows.push(PencilFamilyRow { n3, solutions, surviving });
    }
    let feasible = rows.iter().filter(|r| !r.surviving.is_empty()).map(|r| r.n3).collect();
    PencilFamilyBounds { k, m, lower, upper_counting, per_line_cap, rows, feasible }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(v: &[LineDistribution]) -> Vec<Vec<usize>> {
        v.iter().map(|d| d.counts.clone()).collect()
    }

    #[test]
    fn three_weights() {
        let s = solve_line_distribution(6, 28, &[3, 4, 5]);
        assert_eq!(tuples(&s), vec![vec![0, 2, 4], vec![1, 0, 5]]);
        assert_eq!(s[0].to_string(), "(0,2,4)");
    }

    #[test]
    fn four_weights() {
        let s = solve_line_distribution(6, 32, &[3, 4, 5, 6]);
        assert_eq!(
            tuples(&s),
            vec![vec![0, 0, 4, 2], vec![0, 1, 2, 3], vec![0, 2, 0, 4], vec![1, 0, 1, 4]]
        );
        let s = solve_line_distribution(6, 30, &[3, 4, 5, 6]);
        assert_eq!(s.len(), 7);
        assert!(tuples(&s).contains(&vec![0, 0, 6, 0]));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(tuples(&solve_line_distribution(0, 0, &[3])), vec![vec![0]]);
        assert!(solve_line_distribution(2, 5, &[3]).is_empty());
        assert!(solve_line_distribution(1, 1, &[]).is_empty());
    }

    #[test]
    fn twelve_lines_sextic() {
        let b = pencil_family_triple_bounds(12, 6);
        assert_eq!((b.lower, b.upper_counting, b.per_line_cap), (12, 16, 5));
        assert_eq!(b.feasible, (12..=15).collect::<Vec<_>>());
        let r15 = b.rows.iter().find(|r| r.n3 == 15).unwrap();
        assert_eq!(tuples(&r15.surviving), vec![vec![0, 0, 6, 0]]);
        let r14 = b.rows.iter().find(|r| r.n3 == 14).unwrap();
        assert_eq!(tuples(&r14.surviving), vec![vec![0, 2, 4, 0], vec![1, 0, 5, 0]]);
    }
}
