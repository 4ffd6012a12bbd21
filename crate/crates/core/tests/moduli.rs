use arrmod::algebra::rational::to_f64;
use arrmod::algebra::sturm::real_roots_f64;
use arrmod::algebra::CtxElem;
use arrmod::casebook::load_casebook;
use arrmod::geometry::{join, meet, ProjLine, QPoint};
use arrmod::lattice::{compute_lattice, lattice_isomorphic, Arrangement, IntersectionLattice};
use arrmod::moduli::{realize, IncidenceSpec, ModuliError, ModuliVerdict, VerdictKind};

fn spec(n: usize, pts: &[&[usize]]) -> IncidenceSpec {
    IncidenceSpec::new(n, pts.iter().map(|p| p.iter().map(|i| i - 1).collect()).collect()).unwrap()
}

fn cyclic(n: usize, base: [usize; 3]) -> IncidenceSpec {
    let pts = (0..n)
        .map(|i| {
            let mut p: Vec<usize> = base.iter().map(|b| (i + b) % n).collect();
            p.sort_unstable();
            p
        })
        .collect();
    IncidenceSpec::new(n, pts).unwrap()
}

fn figure(id: &str) -> IncidenceSpec {
    let book = load_casebook().unwrap();
    book.iter().find(|r| r.id == id).unwrap().specs().unwrap().remove(0)
}

fn lattice_f64(lines: Vec<[f64; 3]>) -> IntersectionLattice {
    let lines = lines.into_iter().map(|[a, b, c]| ProjLine::new(a, b, c).unwrap()).collect();
    compute_lattice(&Arrangement::new(lines).unwrap()).unwrap()
}

fn eval_at(x: &CtxElem, t: f64) -> f64 {
    x.rep().coeffs().iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
}

/// Every real root of every branch, evaluated in floating point, realizes
/// the specified lattice. Returns the number of roots checked.
fn check_real_roots_numerically(v: &ModuliVerdict, s: &IncidenceSpec) -> usize {
    let mut checked = 0;
    for b in v.branches() {
        let roots = match b.ctx.modulus() {
            Some(f) => real_roots_f64(f).unwrap(),
            None => vec![0.0],
        };
        assert_eq!(roots.len(), b.real);
        for t in roots {
            let lines = b.arrangement.iter().map(|l| l.coeffs().clone().map(|x| eval_at(&x, t))).collect();
            assert_eq!(lattice_f64(lines), s.lattice(), "root {t}");
            checked += 1;
        }
    }
    checked
}

type Shape = (&'static str, Option<usize>, Option<usize>, Vec<(usize, usize, usize)>, Option<usize>);

fn shape(v: &ModuliVerdict) -> Shape {
    let mut b: Vec<_> = v.branches().iter().map(|b| (b.degree, b.real, b.nonreal)).collect();
    b.sort();
    let free = match v.kind {
        VerdictKind::Parametric { free_count } => Some(free_count),
        _ => None,
    };
    (v.kind_name(), v.moduli_points, v.quotient_points, b, free)
}

#[test]
fn fano_plane_is_not_realizable() {
    let v = realize(&spec(7, &[&[1, 2, 3], &[1, 4, 5], &[1, 6, 7], &[2, 4, 6], &[2, 5, 7], &[3, 4, 7], &[3, 5, 6]])).unwrap();
    assert!(v.is_empty());
    assert!(!v.certificates.is_empty());
}

#[test]
fn mobius_kantor_needs_sixth_roots_of_unity() {
    let v = realize(&cyclic(8, [0, 1, 3])).unwrap();
    assert_eq!(shape(&v), ("Finite", Some(2), Some(1), vec![(2, 0, 2)], None));
    let f = v.branches()[0].ctx.modulus().unwrap();
    let disc = &f.coeff(1) * &f.coeff(1) - arrmod::algebra::rational::rat(4) * f.coeff(0) * f.coeff(2);
    // Q(sqrt(-3)) is the field of the primitive cube roots of unity.
    let ratio = disc / (arrmod::algebra::rational::rat(-3) * f.coeff(2) * f.coeff(2));
    let (n, d) = (ratio.numer().clone(), ratio.denom().clone());
    let is_square = |x: &num_bigint::BigInt| x.sqrt().pow(2) == *x;
    assert!(n > 0.into() && is_square(&n) && is_square(&d), "{f:?}");
}

#[test]
fn pappus_has_two_moduli() {
    let a = [QPoint::ints(0, 0, 1), QPoint::ints(1, 0, 1), QPoint::ints(3, 0, 1)];
    let b = [QPoint::ints(0, 1, 1), QPoint::ints(2, 1, 1), QPoint::ints(5, 1, 1)];
    let mut lines = vec![join(&a[0], &a[1]).unwrap(), join(&b[0], &b[1]).unwrap()];
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                lines.push(join(&a[i], &b[j]).unwrap());
            }
        }
    }
    let c = |i: usize, j: usize| meet(&join(&a[i], &b[j]).unwrap(), &join(&a[j], &b[i]).unwrap()).unwrap();
    lines.push(join(&c(0, 1), &c(0, 2)).unwrap());
    let l = compute_lattice(&Arrangement::new(lines).unwrap()).unwrap();
    assert_eq!(l.profile().count(3), 9);
    let v = realize(&IncidenceSpec::from_lattice(&l)).unwrap();
    assert_eq!(v.kind_name(), "Parametric");
    assert!(matches!(v.kind, VerdictKind::Parametric { free_count: 2 }));
}

#[test]
fn cyclic_nine_three_terminates() {
    let s = cyclic(9, [0, 1, 3]);
    let v = realize(&s).unwrap();
    assert!(matches!(v.kind, VerdictKind::Parametric { free_count: 1 }));
}

#[test]
fn pencil_alone_is_out_of_scope() {
    assert_eq!(realize(&spec(3, &[&[1, 2, 3]])).unwrap_err(), ModuliError::NoPencilPair);
    assert_eq!(realize(&spec(4, &[&[1, 2, 3]])).unwrap_err(), ModuliError::NoPencilPair);
}

#[test]
fn finite_branches_realize_the_lattice_numerically() {
    for id in ["fig42", "fig43"] {
        let s = figure(id);
        let v = realize(&s).unwrap();
        assert_eq!(v.moduli_points, Some(2), "{id}");
        assert_eq!(check_real_roots_numerically(&v, &s), 2, "{id}");
    }
}

#[test]
fn printed_quadratic_equation_in_floating_point() {
    // Lines of the two-point example with t a root of t^2 - 5t + 2,
    // t1 = t^2 - 4t, t2 = t, t3 = -t.
    let s = figure("fig43");
    for sign in [-1.0, 1.0] {
        let t = (5.0 + sign * 17f64.sqrt()) / 2.0;
        let (t1, t2, t3) = (t * t - 4.0 * t, t, -t);
        let lines = vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 0.0, -1.0],
            [0.0, 1.0, -1.0],
            [1.0, 0.0, -t1],
            [1.0, 0.0, -t2],
            [1.0, 0.0, -t3],
            [1.0, t2, -t2],
            [1.0, 1.0 - t2, -1.0],
            [1.0, -t3, 0.0],
            [1.0, t3 - t1, -t3],
        ];
        let l = lattice_f64(lines);
        assert!(l.is_nonreductive());
        assert!(lattice_isomorphic(&l, &s.lattice()).is_ok());
    }
}

#[test]
fn verdict_does_not_depend_on_labels() {
    for id in ["fig1", "fig12", "fig42", "fig43", "fig44"] {
        let s = figure(id);
        let base = shape(&realize(&s).unwrap());
        let n = s.n_lines();
        let perms: Vec<Vec<usize>> = vec![
            (0..n).rev().collect(),
            (0..n).map(|i| (i + 5) % n).collect(),
            (0..n).map(|i| (7 * i + 3) % n).collect(),
        ];
        for p in perms {
            let v = realize(&s.relabel(&p)).unwrap();
            assert_eq!(shape(&v), base, "{id} relabeled by {p:?}");
        }
    }
}
