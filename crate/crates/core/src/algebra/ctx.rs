//! Arithmetic in Q[t]/(f) for squarefree f, with gcd splitting.
//!
//! A [`BranchCtx`] stands for all roots of its modulus at once. When a zero
//! test has different answers at different roots, the test reports a
//! [`Split`] and the caller reruns the computation in the two factor
//! contexts (see [`split_branches`]).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{AlgebraError, QPoly, Rat, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BranchCtx {
    var: Var,
    modulus: Option<QPoly>,
}

impl BranchCtx {
    /// Plain Q.
    pub fn trivial() -> Arc<Self> {
        Arc::new(BranchCtx { var: Var::T, modulus: None })
    }

    /// Q[var]/(f); `f` is made monic and must be squarefree of degree ≥ 1.
    pub fn new(var: Var, f: &QPoly) -> Result<Arc<Self>, AlgebraError> {
        match f.degree() {
            None => return Err(AlgebraError::ZeroPolynomial),
            Some(0) => return Err(AlgebraError::NotInvertible),
            _ => {}
        }
        if !f.is_squarefree() {
            return Err(AlgebraError::NotSquarefree);
        }
        Ok(Arc::new(BranchCtx { var, modulus: Some(f.monic()) }))
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn modulus(&self) -> Option<&QPoly> {
        self.modulus.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.modulus.is_none()
    }

    /// Number of roots represented (1 for plain Q).
    pub fn degree(&self) -> usize {
        self.modulus.as_ref().map_or(1, |f| f.degree().unwrap())
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        match &self.modulus {
            None => p.clone(),
            Some(f) => p.rem(f).expect("modulus is nonzero"),
        }
    }

    pub fn elem(self: &Arc<Self>, p: &QPoly) -> CtxElem {
        CtxElem { ctx: self.clone(), rep: self.reduce(p) }
    }

    pub fn constant(self: &Arc<Self>, c: Rat) -> CtxElem {
        CtxElem { ctx: self.clone(), rep: QPoly::constant(c) }
    }

    pub fn zero(self: &Arc<Self>) -> CtxElem {
        self.constant(Rat::zero())
    }

    pub fn one(self: &Arc<Self>) -> CtxElem {
        self.constant(Rat::one())
    }

    /// The class of the context variable itself.
    pub fn generator(self: &Arc<Self>) -> CtxElem {
        self.elem(&QPoly::x())
    }

    /// The two child contexts of a split, zero factor first.
    pub fn children(&self, s: &Split) -> (Arc<Self>, Arc<Self>) {
        let mk = |f: &QPoly| Arc::new(BranchCtx { var: self.var, modulus: Some(f.monic()) });
        (mk(&s.zero_factor), mk(&s.nonzero_factor))
    }

    /// Canonical text of the modulus, or `1` for plain Q.
    pub fn modulus_string(&self) -> String {
        match &self.modulus {
            None => "1".into(),
            Some(f) => f.display_in(self.var),
        }
    }
}

impl fmt::Display for BranchCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => f.write_str("Q"),
            Some(m) => write!(f, "Q[{}]/({})", self.var, m.display_in(self.var)),
        }
    }
}

/// A factorization `f = zero_factor * nonzero_factor` of the modulus: the
/// tested element vanishes at exactly the roots of `zero_factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub zero_factor: QPoly,
    pub nonzero_factor: QPoly,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) * ({})",
            self.zero_factor.display_in(Var::T),
            self.nonzero_factor.display_in(Var::T)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    Nonzero,
    Split(Split),
}

/// An element of a branch context, kept reduced modulo the modulus.
#[derive(Clone)]
pub struct CtxElem {
    ctx: Arc<BranchCtx>,
    rep: QPoly,
}

impl CtxElem {
    pub fn ctx(&self) -> &Arc<BranchCtx> {
        &self.ctx
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn same_ctx(&self, o: &CtxElem) -> bool {
        Arc::ptr_eq(&self.ctx, &o.ctx) || self.ctx == o.ctx
    }

    pub fn is_zero_rep(&self) -> bool {
        self.rep.is_zero()
    }

    /// The rational value, when the representative is constant.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.rep.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    pub fn zero_test(&self) -> ZeroTest {
        if self.rep.is_zero() {
            return ZeroTest::Zero;
        }
        let Some(f) = &self.ctx.modulus else {
            return ZeroTest::Nonzero;
        };
        let g = self.rep.gcd(f);
        if g.is_constant() {
            ZeroTest::Nonzero
        } else {
            let h = f.exact_div(&g).expect("gcd divides the modulus");
            ZeroTest::Split(Split { zero_factor: g, nonzero_factor: h.monic() })
        }
    }

    /// Decided zero test; undecided cases become `SplitRequired`.
    pub fn is_zero(&self) -> Result<bool, AlgebraError> {
        match self.zero_test() {
            ZeroTest::Zero => Ok(true),
            ZeroTest::Nonzero => Ok(false),
            ZeroTest::Split(s) => Err(AlgebraError::SplitRequired(s)),
        }
    }

    pub fn invert(&self) -> Result<CtxElem, AlgebraError> {
        match self.zero_test() {
            ZeroTest::Zero => Err(AlgebraError::NotInvertible),
            ZeroTest::Split(s) => Err(AlgebraError::SplitRequired(s)),
            ZeroTest::Nonzero => {
                let rep = match &self.ctx.modulus {
                    None => QPoly::constant(Rat::one() / self.rep.coeff(0)),
                    Some(f) => {
                        let e = QPoly::ext_gcd(&self.rep, f);
                        debug_assert!(e.gcd.is_constant());
                        e.s
                    }
                };
                Ok(CtxElem { ctx: self.ctx.clone(), rep: self.ctx.reduce(&rep) })
            }
        }
    }

    /// Moves the element into a context whose modulus divides this one's.
    pub fn restrict(&self, ctx: &Arc<BranchCtx>) -> CtxElem {
        ctx.elem(&self.rep)
    }

    pub fn pow(&self, e: u32) -> CtxElem {
        let mut acc = self.ctx.one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check(&self, o: &CtxElem) {
        assert!(self.same_ctx(o), "branch context mismatch: {} vs {}", self.ctx, o.ctx);
    }
}

impl PartialEq for CtxElem {
    fn eq(&self, o: &Self) -> bool {
        self.same_ctx(o) && self.rep == o.rep
    }
}

impl Eq for CtxElem {}

impl fmt::Debug for CtxElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.rep.display_in(self.ctx.var), self.ctx)
    }
}

impl fmt::Display for CtxElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rep.display_in(self.ctx.var))
    }
}

impl Add for &CtxElem {
    type Output = CtxElem;
    fn add(self, o: &CtxElem) -> CtxElem {
        self.check(o);
        CtxElem { ctx: self.ctx.clone(), rep: &self.rep + &o.rep }
    }
}

impl Sub for &CtxElem {
    type Output = CtxElem;
    fn sub(self, o: &CtxElem) -> CtxElem {
        self.check(o);
        CtxElem { ctx: self.ctx.clone(), rep: &self.rep - &o.rep }
    }
}

impl Mul for &CtxElem {
    type Output = CtxElem;
    fn mul(self, o: &CtxElem) -> CtxElem {
        self.check(o);
        CtxElem { ctx: self.ctx.clone(), rep: self.ctx.reduce(&(&self.rep * &o.rep)) }
    }
}

impl Neg for &CtxElem {
    type Output = CtxElem;
    fn neg(self) -> CtxElem {
        CtxElem { ctx: self.ctx.clone(), rep: -&self.rep }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CtxElem {
            type Output = CtxElem;
            fn $m(self, o: CtxElem) -> CtxElem {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CtxElem {
    type Output = CtxElem;
    fn neg(self) -> CtxElem {
        -&self
    }
}

/// Runs `f` in `ctx`, rerunning it in both factor contexts whenever it
/// reports `SplitRequired`. Results come back in depth-first order, zero
/// factor before nonzero factor. Other errors are returned tagged with the
/// context in which they occurred.
pub fn split_branches<T, E>(
    ctx: &Arc<BranchCtx>,
    mut f: impl FnMut(&Arc<BranchCtx>) -> Result<T, E>,
    as_split: impl Fn(&E) -> Option<Split>,
) -> Vec<(Arc<BranchCtx>, Result<T, E>)> {
    let mut out = Vec::new();
    let mut stack = vec![ctx.clone()];
    while let Some(c) = stack.pop() {
        match f(&c) {
            Err(e) => match as_split(&e) {
                Some(s) => {
                    let (z, n) = c.children(&s);
                    stack.push(n);
                    stack.push(z);
                }
                None => out.push((c, Err(e))),
            },
            ok => out.push((c, ok)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_upoly;
    use crate::algebra::rational::{rat, ratio};

    fn q(s: &str) -> QPoly {
        parse_upoly(s, Var::T).unwrap()
    }

    #[test]
    fn zero_tests() {
        let c = BranchCtx::new(Var::T, &q("t^2-2")).unwrap();
        assert_eq!(c.zero().zero_test(), ZeroTest::Zero);
        assert_eq!(c.generator().zero_test(), ZeroTest::Nonzero);
        let d = BranchCtx::new(Var::T, &q("(t-1)*(t+3)")).unwrap();
        assert_eq!(
            d.elem(&q("t-1")).zero_test(),
            ZeroTest::Split(Split { zero_factor: q("t-1"), nonzero_factor: q("t+3") })
        );
    }

    #[test]
    fn inverses() {
        let c = BranchCtx::new(Var::T, &q("t^2-2")).unwrap();
        assert_eq!(c.generator().invert().unwrap(), c.elem(&q("t/2")));
        let triv = BranchCtx::trivial();
        assert_eq!(triv.constant(rat(3)).invert().unwrap(), triv.constant(ratio(1, 3)));
        let f12 = BranchCtx::new(Var::T, &q("t^3+t^2+t-1")).unwrap();
        assert_eq!(f12.generator().invert().unwrap(), f12.elem(&q("t^2+t+1")));
        assert_eq!(c.zero().invert(), Err(AlgebraError::NotInvertible));
    }

    #[test]
    fn modulus_checks() {
        assert_eq!(BranchCtx::new(Var::T, &q("(t-1)^2")), Err(AlgebraError::NotSquarefree));
        assert_eq!(BranchCtx::new(Var::T, &QPoly::zero()), Err(AlgebraError::ZeroPolynomial));
        let c = BranchCtx::new(Var::T, &q("2t^2-1")).unwrap();
        assert_eq!(c.modulus().unwrap(), &q("t^2-1/2"));
    }

    #[test]
    fn driver_splits_until_decided() {
        // Is t = 1? Decided separately on (t-1) and (t+3).
        let c = BranchCtx::new(Var::T, &q("(t-1)*(t+3)*(t^2+1)")).unwrap();
        let out = split_branches(
            &c,
            |cx| (&cx.generator() - &cx.one()).is_zero(),
            |e: &AlgebraError| e.split().cloned(),
        );
        let got: Vec<(String, bool)> = out
            .into_iter()
            .map(|(cx, r)| (cx.modulus_string(), r.unwrap()))
            .collect();
        assert_eq!(got, vec![("t-1".into(), true), ("t^3+3*t^2+t+3".into(), false)]);
    }
}
