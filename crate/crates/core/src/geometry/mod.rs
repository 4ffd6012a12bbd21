//! Points, lines and incidence in the projective plane.
//!
//! Everything is generic over a [`Scalar`]: exact rationals, elements of a
//! branch context, or `f64` for drawing.

mod text;

use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::algebra::{AlgebraError, CtxElem, Rat, Split, ZeroTest};

pub use text::{parse_line, parse_line_in, LineParseError, ParamEnv};

/// Field-like scalar with a zero test that may be undecided.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn zero_test(&self) -> ZeroTest;
    fn try_inv(&self) -> Result<Self, AlgebraError>;

    /// Whether two scalars can be combined (same branch context).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
}

impl Scalar for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn zero_test(&self) -> ZeroTest {
        if self.is_zero() {
            ZeroTest::Zero
        } else {
            ZeroTest::Nonzero
        }
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            Err(AlgebraError::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }
}

impl Scalar for CtxElem {
    fn zero_like(&self) -> Self {
        self.ctx().zero()
    }
    fn one_like(&self) -> Self {
        self.ctx().one()
    }
    fn zero_test(&self) -> ZeroTest {
        CtxElem::zero_test(self)
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        self.invert()
    }
    fn compatible(&self, other: &Self) -> bool {
        self.same_ctx(other)
    }
}

/// Absolute threshold below which a float counts as zero.
pub const F64_EPS: f64 = 1e-9;

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn zero_test(&self) -> ZeroTest {
        if self.abs() < F64_EPS {
            ZeroTest::Zero
        } else {
            ZeroTest::Nonzero
        }
    }
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        if self.abs() < F64_EPS {
            Err(AlgebraError::NotInvertible)
        } else {
            Ok(1.0 / self)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("lines coincide")]
    CoincidentLines,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("all homogeneous coordinates vanish")]
    ZeroVector,
    #[error("operands live in different branch contexts")]
    ContextMismatch,
    #[error("transform is singular")]
    SingularTransform,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl GeomError {
    pub fn split(&self) -> Option<&Split> {
        match self {
            GeomError::Algebra(e) => e.split(),
            _ => None,
        }
    }
}

/// Three-valued answer of an exact predicate over a branch context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Split(Split),
}

impl Verdict {
    fn from_zero_test(z: ZeroTest) -> Self {
        match z {
            ZeroTest::Zero => Verdict::Yes,
            ZeroTest::Nonzero => Verdict::No,
            ZeroTest::Split(s) => Verdict::Split(s),
        }
    }

    /// Decided answer, or `SplitRequired`.
    pub fn decided(self) -> Result<bool, AlgebraError> {
        match self {
            Verdict::Yes => Ok(true),
            Verdict::No => Ok(false),
            Verdict::Split(s) => Err(AlgebraError::SplitRequired(s)),
        }
    }
}

fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

/// Determinant of the 3x3 matrix with rows `a`, `b`, `c`.
pub fn det3<S: Scalar>(a: &[S; 3], b: &[S; 3], c: &[S; 3]) -> S {
    dot(a, &cross(b, c))
}

fn all_compatible<S: Scalar>(vs: &[&[S; 3]]) -> bool {
    let first = &vs[0][0];
    vs.iter().all(|v| v.iter().all(|x| first.compatible(x)))
}

/// Checks a homogeneous triple is nonzero at every root; an undecided case
/// reports the split.
fn nonzero_vector<S: Scalar>(v: &[S; 3], err: GeomError) -> Result<(), GeomError> {
    let mut pending = None;
    for x in v {
        match x.zero_test() {
            ZeroTest::Nonzero => return Ok(()),
            ZeroTest::Zero => {}
            ZeroTest::Split(s) => {
                pending.get_or_insert(s);
            }
        }
    }
    match pending {
        None => Err(err),
        Some(s) => Err(AlgebraError::SplitRequired(s).into()),
    }
}

fn canonical_triple<S: Scalar>(v: &[S; 3]) -> Result<[S; 3], GeomError> {
    for x in v {
        match x.zero_test() {
            ZeroTest::Zero => continue,
            ZeroTest::Split(s) => return Err(AlgebraError::SplitRequired(s).into()),
            ZeroTest::Nonzero => {
                let inv = x.try_inv()?;
                return Ok([
                    v[0].clone() * inv.clone(),
                    v[1].clone() * inv.clone(),
                    v[2].clone() * inv,
                ]);
            }
        }
    }
    Err(GeomError::ZeroVector)
}

macro_rules! homogeneous {
    ($name:ident, $field:ident) => {
        #[derive(Clone, PartialEq)]
        pub struct $name<S> {
            $field: [S; 3],
        }

        impl<S: Scalar> $name<S> {
            /// Rejects the zero triple (and triples that vanish at some root,
            /// via a split).
            pub fn new(a: S, b: S, c: S) -> Result<Self, GeomError> {
                let v = [a, b, c];
                if !all_compatible(&[&v]) {
                    return Err(GeomError::ContextMismatch);
                }
                nonzero_vector(&v, GeomError::ZeroVector)?;
                Ok($name { $field: v })
            }

            pub fn $field(&self) -> &[S; 3] {
                &self.$field
            }

            /// Scales the first nonzero entry to 1.
            pub fn canonical(&self) -> Result<Self, GeomError> {
                Ok($name { $field: canonical_triple(&self.$field)? })
            }

            /// Proportionality test.
            pub fn same_as(&self, o: &Self) -> Result<Verdict, GeomError> {
                if !all_compatible(&[&self.$field, &o.$field]) {
                    return Err(GeomError::ContextMismatch);
                }
                let c = cross(&self.$field, &o.$field);
                let mut pending = None;
                for x in &c {
                    match x.zero_test() {
                        ZeroTest::Nonzero => return Ok(Verdict::No),
                        ZeroTest::Zero => {}
                        ZeroTest::Split(s) => {
                            pending.get_or_insert(s);
                        }
                    }
                }
                Ok(pending.map_or(Verdict::Yes, Verdict::Split))
            }

            pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> $name<T> {
                $name { $field: [f(&self.$field[0]), f(&self.$field[1]), f(&self.$field[2])] }
            }
        }

        impl<S: Scalar + fmt::Display> fmt::Display for $name<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [a, b, c] = &self.$field;
                write!(f, "({a} : {b} : {c})")
            }
        }

        impl<S: Debug> Debug for $name<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [a, b, c] = &self.$field;
                write!(f, "{}({a:?}, {b:?}, {c:?})", stringify!($name))
            }
        }
    };
}

homogeneous!(ProjPoint, coords);
homogeneous!(ProjLine, coeffs);

pub type QPoint = ProjPoint<Rat>;
pub type QLine = ProjLine<Rat>;
pub type CtxPoint = ProjPoint<CtxElem>;
pub type CtxLine = ProjLine<CtxElem>;
pub type FPoint = ProjPoint<f64>;
pub type FLine = ProjLine<f64>;

impl QPoint {
    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        ProjPoint::new(Rat::from_integer(a.into()), Rat::from_integer(b.into()), Rat::from_integer(c.into()))
            .expect("nonzero integer triple")
    }
}

impl QLine {
    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        ProjLine::new(Rat::from_integer(a.into()), Rat::from_integer(b.into()), Rat::from_integer(c.into()))
            .expect("nonzero integer triple")
    }
}

pub fn incident<S: Scalar>(p: &ProjPoint<S>, l: &ProjLine<S>) -> Result<Verdict, GeomError> {
    if !all_compatible(&[&p.coords, &l.coeffs]) {
        return Err(GeomError::ContextMismatch);
    }
    Ok(Verdict::from_zero_test(dot(&p.coords, &l.coeffs).zero_test()))
}

/// The common point of two distinct lines.
pub fn meet<S: Scalar>(a: &ProjLine<S>, b: &ProjLine<S>) -> Result<ProjPoint<S>, GeomError> {
    if !all_compatible(&[&a.coeffs, &b.coeffs]) {
        return Err(GeomError::ContextMismatch);
    }
    let c = cross(&a.coeffs, &b.coeffs);
    nonzero_vector(&c, GeomError::CoincidentLines)?;
    Ok(ProjPoint { coords: c })
}

/// The line through two distinct points.
pub fn join<S: Scalar>(p: &ProjPoint<S>, q: &ProjPoint<S>) -> Result<ProjLine<S>, GeomError> {
    if !all_compatible(&[&p.coords, &q.coords]) {
        return Err(GeomError::ContextMismatch);
    }
    let c = cross(&p.coords, &q.coords);
    nonzero_vector(&c, GeomError::CoincidentPoints)?;
    Ok(ProjLine { coeffs: c })
}

pub fn collinear<S: Scalar>(
    p: &ProjPoint<S>,
    q: &ProjPoint<S>,
    r: &ProjPoint<S>,
) -> Result<Verdict, GeomError> {
    if !all_compatible(&[&p.coords, &q.coords, &r.coords]) {
        return Err(GeomError::ContextMismatch);
    }
    Ok(Verdict::from_zero_test(det3(&p.coords, &q.coords, &r.coords).zero_test()))
}

pub fn concurrent<S: Scalar>(
    a: &ProjLine<S>,
    b: &ProjLine<S>,
    c: &ProjLine<S>,
) -> Result<Verdict, GeomError> {
    if !all_compatible(&[&a.coeffs, &b.coeffs, &c.coeffs]) {
        return Err(GeomError::ContextMismatch);
    }
    Ok(Verdict::from_zero_test(det3(&a.coeffs, &b.coeffs, &c.coeffs).zero_test()))
}

/// An invertible 3x3 matrix acting on points by `p -> M p` and on lines by
/// the contragredient `l -> M^{-T} l` (up to scale).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjTransform<S> {
    m: [[S; 3]; 3],
}

pub type QTransform = ProjTransform<Rat>;

impl<S: Scalar> ProjTransform<S> {
    pub fn new(m: [[S; 3]; 3]) -> Result<Self, GeomError> {
        if !all_compatible(&[&m[0], &m[1], &m[2]]) {
            return Err(GeomError::ContextMismatch);
        }
        match det3(&m[0], &m[1], &m[2]).zero_test() {
            ZeroTest::Nonzero => Ok(ProjTransform { m }),
            ZeroTest::Zero => Err(GeomError::SingularTransform),
            ZeroTest::Split(s) => Err(AlgebraError::SplitRequired(s).into()),
        }
    }

    pub fn matrix(&self) -> &[[S; 3]; 3] {
        &self.m
    }

    pub fn apply_point(&self, p: &ProjPoint<S>) -> ProjPoint<S> {
        ProjPoint {
            coords: [dot(&self.m[0], &p.coords), dot(&self.m[1], &p.coords), dot(&self.m[2], &p.coords)],
        }
    }

    /// Uses the cofactor matrix, which is `det(M) * M^{-T}`.
    pub fn apply_line(&self, l: &ProjLine<S>) -> ProjLine<S> {
        let m = &self.m;
        // Rows of the cofactor matrix are cross products of row pairs.
        let cof = [cross(&m[1], &m[2]), cross(&m[2], &m[0]), cross(&m[0], &m[1])];
        ProjLine { coeffs: [dot(&cof[0], &l.coeffs), dot(&cof[1], &l.coeffs), dot(&cof[2], &l.coeffs)] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_upoly, BranchCtx, Var};
    use crate::algebra::rational::rat;

    fn qp(a: i64, b: i64, c: i64) -> QPoint {
        QPoint::ints(a, b, c)
    }

    fn ql(a: i64, b: i64, c: i64) -> QLine {
        QLine::ints(a, b, c)
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(incident(&qp(0, 0, 1), &ql(1, 0, 0)).unwrap(), Verdict::Yes);
        assert_eq!(incident(&qp(1, 1, 1), &ql(1, 0, -1)).unwrap(), Verdict::Yes);
        let c = BranchCtx::new(Var::T, &parse_upoly("t^2-t", Var::T).unwrap()).unwrap();
        let p = ProjPoint::new(c.generator(), c.zero(), c.one()).unwrap();
        let l = ProjLine::new(c.one(), c.zero(), -c.one()).unwrap();
        match incident(&p, &l).unwrap() {
            Verdict::Split(s) => {
                assert_eq!(s.zero_factor, parse_upoly("t-1", Var::T).unwrap());
                assert_eq!(s.nonzero_factor, parse_upoly("t", Var::T).unwrap());
            }
            v => panic!("expected split, got {v:?}"),
        }
    }

    #[test]
    fn meet_and_join() {
        let p = meet(&ql(1, 0, 0), &ql(0, 1, 0)).unwrap();
        assert_eq!(p.canonical().unwrap(), qp(0, 0, 1));
        let l = join(&qp(0, 0, 1), &qp(0, 1, 0)).unwrap();
        assert_eq!(l.same_as(&ql(1, 0, 0)).unwrap(), Verdict::Yes);
        let l = join(&qp(1, 1, 1), &qp(0, 0, 1)).unwrap();
        assert_eq!(l.same_as(&ql(1, -1, 0)).unwrap(), Verdict::Yes);
        assert_eq!(meet(&ql(1, 2, 3), &ql(2, 4, 6)), Err(GeomError::CoincidentLines));
        assert_eq!(join(&qp(1, 2, 3), &qp(-1, -2, -3)), Err(GeomError::CoincidentPoints));
    }

    #[test]
    fn collinearity_examples() {
        assert_eq!(collinear(&qp(0, 0, 1), &qp(0, 1, 0), &qp(0, 1, 1)).unwrap(), Verdict::Yes);
        assert_eq!(collinear(&qp(1, 0, 1), &qp(0, 1, 1), &qp(1, 1, 2)).unwrap(), Verdict::Yes);
        assert_eq!(collinear(&qp(1, 0, 0), &qp(0, 1, 0), &qp(1, 1, 1)).unwrap(), Verdict::No);
    }

    #[test]
    fn transform_preserves_incidence() {
        let r = |n| rat(n);
        let t = QTransform::new([[r(2), r(0), r(0)], [r(0), r(1), r(0)], [r(0), r(0), r(1)]]).unwrap();
        let p = t.apply_point(&qp(1, 0, 1));
        assert_eq!(p.same_as(&qp(2, 0, 1)).unwrap(), Verdict::Yes);
        let l = t.apply_line(&ql(1, 0, -1));
        assert_eq!(l.same_as(&ql(1, 0, -2)).unwrap(), Verdict::Yes);
        assert_eq!(incident(&p, &l).unwrap(), Verdict::Yes);
        let sing = QTransform::new([[r(1), r(2), r(3)], [r(2), r(4), r(6)], [r(0), r(0), r(1)]]);
        assert_eq!(sing, Err(GeomError::SingularTransform));
    }

    #[test]
    fn context_mismatch() {
        let a = BranchCtx::new(Var::T, &parse_upoly("t^2-2", Var::T).unwrap()).unwrap();
        let b = BranchCtx::new(Var::T, &parse_upoly("t^2-3", Var::T).unwrap()).unwrap();
        let p = ProjPoint::new(a.one(), a.zero(), a.zero()).unwrap();
        let l = ProjLine::new(b.one(), b.zero(), b.zero()).unwrap();
        assert_eq!(incident(&p, &l), Err(GeomError::ContextMismatch));
    }
}
