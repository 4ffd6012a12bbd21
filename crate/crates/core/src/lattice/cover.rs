//! Covering the multiple points by as few lines as possible.

use itertools::Itertools;
use serde::Serialize;

use super::IntersectionLattice;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("arrangement is of type C_{0}, not C_3")]
    NotC3(usize),
}

/// Which clause of the simple C_3 condition holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum C3Clause {
    /// The three lines share a point.
    Concurrent,
    /// `line` carries exactly one multiple point off the other two.
    PrivatePoint { line: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleC3Witness {
    pub lines: [usize; 3],
    pub clause: C3Clause,
}

fn covers(l: &IntersectionLattice, set: &[usize]) -> bool {
    l.multiple_points().all(|p| p.iter().any(|i| set.contains(i)))
}

/// Minimum number of lines containing every multiple point, with the
/// lexicographically first witness of that size.
pub fn cover_number(l: &IntersectionLattice) -> (usize, Vec<usize>) {
    for size in 0..=l.n_lines() {
        if let Some(set) = (0..l.n_lines()).combinations(size).find(|s| covers(l, s)) {
            return (size, set);
        }
    }
    unreachable!("all lines cover every point")
}

/// Searches the covering triples for one meeting the simple C_3 condition.
pub fn is_simple_c3(l: &IntersectionLattice) -> Result<Option<SimpleC3Witness>, CoverError> {
    let (k, _) = cover_number(l);
    if k != 3 {
        return Err(CoverError::NotC3(k));
    }
    for t in (0..l.n_lines()).combinations(3) {
        if !covers(l, &t) {
            continue;
        }
        let lines = [t[0], t[1], t[2]];
        if l.points().iter().any(|p| lines.iter().all(|i| p.contains(i))) {
            return Ok(Some(SimpleC3Witness { lines, clause: C3Clause::Concurrent }));
        }
        for &line in &lines {
            let private = l
                .multiple_points()
                .filter(|p| p.contains(&line) && !lines.iter().any(|&o| o != line && p.contains(&o)))
                .count();
            if private == 1 {
                return Ok(Some(SimpleC3Witness { lines, clause: C3Clause::PrivatePoint { line } }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize, sets: &[&[usize]]) -> IntersectionLattice {
        IntersectionLattice::from_point_sets(n, sets.iter().map(|s| s.to_vec())).unwrap()
    }

    #[test]
    fn single_line_cover() {
        let l = lat(7, &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6]]);
        assert_eq!(cover_number(&l), (1, vec![0]));
        let pencil = lat(3, &[&[0, 1, 2]]);
        assert_eq!(cover_number(&pencil).0, 1);
        assert_eq!(cover_number(&lat(4, &[])), (0, vec![]));
        assert_eq!(is_simple_c3(&l), Err(CoverError::NotC3(1)));
    }

    #[test]
    fn concurrent_triple() {
        // Lines 0, 1, 2 through one point, each also carrying two private
        // triple points made of lines 3..
        let l = lat(
            15,
            &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6], &[1, 7, 8], &[1, 9, 10], &[2, 11, 12], &[2, 13, 14]],
        );
        assert_eq!(cover_number(&l).0, 3);
        let w = is_simple_c3(&l).unwrap().unwrap();
        assert_eq!(w.lines, [0, 1, 2]);
        assert_eq!(w.clause, C3Clause::Concurrent);
    }

    #[test]
    fn private_point_clause() {
        let l = lat(
            12,
            &[&[0, 3, 4], &[0, 5, 6], &[1, 3, 5], &[1, 7, 8], &[2, 9, 10], &[0, 2, 11]],
        );
        assert_eq!(cover_number(&l).0, 3);
        let w = is_simple_c3(&l).unwrap().unwrap();
        assert_eq!(w.clause, C3Clause::PrivatePoint { line: 2 });
    }

    #[test]
    fn neither_clause() {
        // Three non-concurrent lines, each with two private triple points.
        let l = lat(
            15,
            &[&[0, 3, 4], &[0, 5, 6], &[1, 7, 8], &[1, 9, 10], &[2, 11, 12], &[2, 13, 14]],
        );
        assert_eq!(cover_number(&l).0, 3);
        assert_eq!(is_simple_c3(&l), Ok(None));
    }
}
