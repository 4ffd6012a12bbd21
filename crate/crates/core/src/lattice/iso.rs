use std::collections::HashMap;
use std::fmt;

use super::IntersectionLattice;

/// Why two lattices are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonIsomorphism {
    LineCount(usize, usize),
    Profile(String, String),
    /// The multisets of per-line signatures differ.
    LineSignatures,
    /// Invariants agree but the search found no bijection.
    SearchExhausted,
}

impl fmt::Display for NonIsomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonIsomorphism::LineCount(a, b) => write!(f, "different line counts: {a} vs {b}"),
            NonIsomorphism::Profile(a, b) => write!(f, "different profiles: {a} vs {b}"),
            NonIsomorphism::LineSignatures => {
                f.write_str("different per-line multiple point signatures")
            }
            NonIsomorphism::SearchExhausted => {
                f.write_str("invariants agree but no line bijection preserves the points")
            }
        }
    }
}

/// Finds `phi` with `phi[i]` the line of `b` matching line `i` of `a`, such
/// that the points of `a` map onto the points of `b`.
pub fn lattice_isomorphic(
    a: &IntersectionLattice,
    b: &IntersectionLattice,
) -> Result<Vec<usize>, NonIsomorphism> {
    if a.n_lines != b.n_lines {
        return Err(NonIsomorphism::LineCount(a.n_lines, b.n_lines));
    }
    let (pa, pb) = (a.profile(), b.profile());
    if pa != pb {
        return Err(NonIsomorphism::Profile(pa.to_string(), pb.to_string()));
    }
    let n = a.n_lines;
    let sig_a: Vec<Vec<usize>> = (0..n).map(|i| a.line_signature(i)).collect();
    let sig_b: Vec<Vec<usize>> = (0..n).map(|i| b.line_signature(i)).collect();
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Err(NonIsomorphism::LineSignatures);
    }

    // Assign rare, heavily constrained lines first.
    let mut class_size: HashMap<&Vec<usize>, usize> = HashMap::new();
    for s in &sig_a {
        *class_size.entry(s).or_insert(0) += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (class_size[&sig_a[i]], std::cmp::Reverse(sig_a[i].iter().sum::<usize>()), i));

    let mut search = Search {
        a_pairs: a.pair_table(),
        b_pairs: b.pair_table(),
        a_size: a.points.iter().map(Vec::len).collect(),
        b_size: b.points.iter().map(Vec::len).collect(),
        sig_a,
        sig_b,
        order,
        phi: vec![usize::MAX; n],
        used: vec![false; n],
        fwd: vec![usize::MAX; a.points.len()],
        back: vec![usize::MAX; b.points.len()],
    };
    if search.run(0) {
        Ok(search.phi)
    } else {
        Err(NonIsomorphism::SearchExhausted)
    }
}

struct Search {
    a_pairs: Vec<Vec<usize>>,
    b_pairs: Vec<Vec<usize>>,
    a_size: Vec<usize>,
    b_size: Vec<usize>,
    sig_a: Vec<Vec<usize>>,
    sig_b: Vec<Vec<usize>>,
    order: Vec<usize>,
    phi: Vec<usize>,
    used: Vec<bool>,
    fwd: Vec<usize>,
    back: Vec<usize>,
}

impl Search {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let i = self.order[depth];
        for j in 0..self.phi.len() {
            if self.used[j] || self.sig_a[i] != self.sig_b[j] {
                continue;
            }
            let mut added = Vec::new();
            if self.try_assign(i, j, depth, &mut added) {
                self.phi[i] = j;
                self.used[j] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.phi[i] = usize::MAX;
                self.used[j] = false;
            }
            for (p, q) in added {
                self.fwd[p] = usize::MAX;
                self.back[q] = usize::MAX;
            }
        }
        false
    }

    /// Checks `i -> j` against earlier assignments, extending the point
    /// correspondence; records new point pairs in `added`.
    fn try_assign(&mut self, i: usize, j: usize, depth: usize, added: &mut Vec<(usize, usize)>) -> bool {
        for &i2 in &self.order[..depth] {
            let j2 = self.phi[i2];
            let p = self.a_pairs[i][i2];
            let q = self.b_pairs[j][j2];
            if self.a_size[p] != self.b_size[q] {
                return false;
            }
            match (self.fwd[p], self.back[q]) {
                (usize::MAX, usize::MAX) => {
                    self.fwd[p] = q;
                    self.back[q] = p;
                    added.push((p, q));
                }
                (fp, bq) if fp == q && bq == p => {}
                _ => return false,
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize, sets: &[&[usize]]) -> IntersectionLattice {
        IntersectionLattice::from_point_sets(n, sets.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identity_and_relabel() {
        let l = lat(6, &[&[0, 1, 2], &[0, 3, 4], &[2, 4, 5]]);
        let phi = lattice_isomorphic(&l, &l).unwrap();
        assert_eq!(l.relabel(&phi), l);
        let perm = [5, 3, 1, 0, 2, 4];
        let m = l.relabel(&perm);
        let phi = lattice_isomorphic(&l, &m).unwrap();
        assert_eq!(l.relabel(&phi), m);
    }

    #[test]
    fn rejects_by_invariants() {
        let a = lat(6, &[&[0, 1, 2], &[0, 3, 4]]);
        let b = lat(6, &[&[0, 1, 2]]);
        assert!(matches!(lattice_isomorphic(&a, &b), Err(NonIsomorphism::Profile(..))));
        // Two triples sharing a line vs two disjoint triples.
        let c = lat(6, &[&[0, 1, 2], &[3, 4, 5]]);
        assert_eq!(lattice_isomorphic(&a, &c), Err(NonIsomorphism::LineSignatures));
    }

    #[test]
    fn triangle_versus_path_of_triples() {
        let a = lat(7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        let b = lat(7, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]]);
        assert_eq!(lattice_isomorphic(&a, &b), Err(NonIsomorphism::LineSignatures));
    }
}
