//! Strategies and property bodies shared by the property and acceptance
//! targets.
#![allow(dead_code)]

use arrmod::algebra::rational::{ratio, rat};
use arrmod::algebra::sturm::{isolate_real_roots, real_roots_f64};
use arrmod::algebra::{real_root_count, QPoly, Rat, UniPoly};
use arrmod::casebook::load_casebook;
use arrmod::geometry::{join, ProjTransform, QLine, QPoint};
use arrmod::lattice::{
    compute_lattice, counting_identity, enumerate_profiles, enumerate_profiles_brute, lattice_isomorphic, Arrangement,
    Cmp, IntersectionLattice, ProfileConstraint, ProfileQuery,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

/// Lines through a small pool of points, so that concurrences are common.
pub fn arrangement() -> impl Strategy<Value = Vec<QLine>> {
    let pt = (-3i64..=3, -3i64..=3, prop_oneof![3 => Just(1i64), 1 => Just(0i64), 1 => -2i64..=2]);
    (
        prop::collection::vec(pt, 3..=5),
        prop::collection::vec((0usize..5, 0usize..5, -3i64..=3, -3i64..=3), 3..=12),
    )
        .prop_map(|(pool, picks)| {
            let pool: Vec<QPoint> =
                pool.into_iter().filter_map(|(a, b, c)| (a, b, c).ne(&(0, 0, 0)).then(|| QPoint::ints(a, b, c))).collect();
            let mut lines: Vec<QLine> = Vec::new();
            for (i, j, a, b) in picks {
                if pool.is_empty() {
                    break;
                }
                let p = &pool[i % pool.len()];
                let q = if i % pool.len() != j % pool.len() && j % 3 != 0 {
                    pool[j % pool.len()].clone()
                } else if (a, b) != (0, 0) {
                    QPoint::ints(a, b, 0)
                } else {
                    continue;
                };
                let Ok(l) = join(p, &q) else { continue };
                if !lines.iter().any(|m| m.same_as(&l).unwrap().decided().unwrap()) && lines.len() < 8 {
                    lines.push(l);
                }
            }
            lines
        })
        .prop_filter("at least three lines", |ls| ls.len() >= 3)
}

pub fn lattice_of(lines: &[QLine]) -> IntersectionLattice {
    compute_lattice(&Arrangement::new(lines.to_vec()).unwrap()).unwrap()
}

pub fn matrix() -> impl Strategy<Value = ProjTransform<Rat>> {
    prop::array::uniform3(prop::array::uniform3(-4i64..=4))
        .prop_filter_map("singular", |m| ProjTransform::new(m.map(|r| r.map(rat))).ok())
}

/// Exact sign changes of `f` on the grid `k/8`, `|k| <= 8*bound`, skipping
/// grid points (roots are chosen on the coarser grid `k/4`).
pub fn grid_scan_count(f: &QPoly, bound: i64) -> usize {
    let mut prev: Option<bool> = None;
    let mut changes = 0;
    for k in -8 * bound..=8 * bound {
        if k % 2 == 0 {
            continue;
        }
        let v = f.eval(&ratio(k, 8));
        assert!(!v.is_zero());
        let pos = v.is_positive();
        if prev.is_some_and(|p| p != pos) {
            changes += 1;
        }
        prev = Some(pos);
    }
    changes
}

fn linear(root: &Rat) -> QPoly {
    UniPoly::new(vec![-root.clone(), Rat::one()])
}

/// Squarefree product of distinct linear factors with roots on the quarter
/// grid and at most one irreducible quadratic `(x-a)^2 + b`, `b > 0`.
pub fn squarefree_poly() -> impl Strategy<Value = (QPoly, usize)> {
    (
        prop::collection::btree_set(-16i64..=16, 0..=5),
        prop::option::of((-8i64..=8, 1i64..=8)),
        prop_oneof![Just(1i64), Just(-3), Just(7)],
    )
        .prop_filter("degree 1..=5", |(roots, q, _)| {
            let d = roots.len() + if q.is_some() { 2 } else { 0 };
            (1..=5).contains(&d)
        })
        .prop_map(|(roots, q, lead)| {
            let mut f = UniPoly::constant(rat(lead));
            for r in &roots {
                f = f * linear(&ratio(*r, 4));
            }
            if let Some((a, b)) = q {
                let a = ratio(a, 2);
                f = f * UniPoly::new(vec![&a * &a + ratio(b, 3), -rat(2) * a, Rat::one()]);
            }
            (f, roots.len())
        })
}

pub fn casebook_lattices() -> Vec<(String, IntersectionLattice)> {
    let mut out = Vec::new();
    for rec in load_casebook().unwrap() {
        if let Ok(specs) = rec.specs() {
            for (k, s) in specs.into_iter().enumerate() {
                out.push((format!("{}#{k}", rec.id), s.lattice()));
            }
        }
    }
    out
}

pub fn relabel_seed() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 12)
}

fn constraint() -> impl Strategy<Value = ProfileConstraint> {
    (2usize..=8, prop_oneof![Just(Cmp::Eq), Just(Cmp::Le), Just(Cmp::Ge)], 0u64..=3)
        .prop_map(|(r, cmp, value)| ProfileConstraint { r, cmp, value })
}

pub fn profile_query() -> impl Strategy<Value = ProfileQuery> {
    (3usize..=8, any::<bool>(), prop::collection::vec(constraint(), 0..=2)).prop_map(|(k, nonreductive, cs)| {
        let mut q = ProfileQuery::new(k).nonreductive(nonreductive);
        q.constraints = cs.into_iter().filter(|c| c.r <= k).collect();
        q
    })
}

pub fn check_counting_identity(lines: &[QLine]) -> Result<(), TestCaseError> {
    let l = lattice_of(lines);
    let c = counting_identity(&l.profile());
    prop_assert!(c.holds, "{} vs {}", c.lhs, c.rhs);
    prop_assert_eq!(c.lhs, (lines.len() * (lines.len() - 1) / 2) as u64);
    let t = l.pair_table();
    for i in 0..lines.len() {
        for j in 0..lines.len() {
            if i != j {
                let p = &l.points()[t[i][j]];
                prop_assert!(p.contains(&i) && p.contains(&j));
            }
        }
    }
    Ok(())
}

pub fn check_projective_invariance(lines: &[QLine], t: &ProjTransform<Rat>) -> Result<(), TestCaseError> {
    let moved: Vec<QLine> = lines.iter().map(|l| t.apply_line(l)).collect();
    let (a, b) = (lattice_of(lines), lattice_of(&moved));
    prop_assert!(counting_identity(&b.profile()).holds);
    prop_assert_eq!(a, b);
    Ok(())
}

pub fn check_sturm(f: &QPoly, real: usize) -> Result<(), TestCaseError> {
    prop_assert!(f.is_squarefree());
    prop_assert_eq!(grid_scan_count(f, 6), real);
    prop_assert_eq!(real_root_count(f).unwrap(), real);
    prop_assert_eq!(isolate_real_roots(f).unwrap().len(), real);
    let approx = real_roots_f64(f).unwrap();
    prop_assert_eq!(approx.len(), real);
    for x in approx {
        let nearest = (x * 4.0).round() / 4.0;
        prop_assert!((x - nearest).abs() < 1e-12, "{x}");
    }
    Ok(())
}

pub fn check_relabelings(lattices: &[(String, IntersectionLattice)], seed: &[u32]) -> Result<(), TestCaseError> {
    for (id, a) in lattices {
        let n = a.n_lines();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| (seed[i % seed.len()].rotate_left(i as u32), i));
        let b = a.relabel(&perm);
        let phi = lattice_isomorphic(a, &b).map_err(|e| TestCaseError::fail(format!("{id}: {e}")))?;
        prop_assert_eq!(a.relabel(&phi), b, "{}", id);
    }
    Ok(())
}

pub fn check_enumeration(q: &ProfileQuery) -> Result<(), TestCaseError> {
    let mut fast = enumerate_profiles(q).unwrap();
    let mut slow = enumerate_profiles_brute(q);
    fast.sort_by_key(|p| p.cmp_key());
    slow.sort_by_key(|p| p.cmp_key());
    prop_assert_eq!(fast, slow);
    Ok(())
}
