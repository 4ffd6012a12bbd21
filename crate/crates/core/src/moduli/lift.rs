//! Polynomials over a branch context, enough to recover one variable at a
//! time above the roots of a modulus.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraError, BranchCtx, CtxElem, MultiPoly, Var};

/// Value of `p` at the given assignment, `None` if a variable is missing.
pub(crate) fn eval_ctx(p: &MultiPoly, vals: &BTreeMap<Var, CtxElem>, ctx: &Arc<BranchCtx>) -> Option<CtxElem> {
    let mut acc = ctx.zero();
    for (m, c) in p.terms() {
        let mut t = ctx.constant(c.clone());
        for &(v, e) in m.pairs() {
            t = &t * &vals.get(&v)?.pow(e);
        }
        acc = &acc + &t;
    }
    Some(acc)
}

/// `p` as a polynomial in `w` (low degree first) with coefficients
/// evaluated in the context.
pub(crate) fn specialize(
    p: &MultiPoly,
    w: Var,
    vals: &BTreeMap<Var, CtxElem>,
    ctx: &Arc<BranchCtx>,
) -> Option<Vec<CtxElem>> {
    p.coefficients_in(w).iter().map(|c| eval_ctx(c, vals, ctx)).collect()
}

/// Drops vanishing leading coefficients; undecided ones require a split.
fn trim(mut a: Vec<CtxElem>) -> Result<Vec<CtxElem>, AlgebraError> {
    while let Some(l) = a.last() {
        if l.is_zero()? {
            a.pop();
        } else {
            break;
        }
    }
    Ok(a)
}

fn rem(a: Vec<CtxElem>, b: &[CtxElem]) -> Result<Vec<CtxElem>, AlgebraError> {
    let mut a = trim(a)?;
    let inv = b.last().expect("nonzero divisor").invert()?;
    while a.len() >= b.len() {
        let q = &a[a.len() - 1] * &inv;
        let shift = a.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] = &a[shift + i] - &(&q * bi);
        }
        a.pop();
        a = trim(a)?;
    }
    Ok(a)
}

/// Monic gcd; the empty vector stands for the zero polynomial.
pub(crate) fn gcd(a: Vec<CtxElem>, b: Vec<CtxElem>) -> Result<Vec<CtxElem>, AlgebraError> {
    let mut a = trim(a)?;
    let mut b = trim(b)?;
    while !b.is_empty() {
        let r = rem(a, &b)?;
        a = b;
        b = r;
    }
    if let Some(l) = a.last() {
        let inv = l.invert()?;
        a = a.iter().map(|x| x * &inv).collect();
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, parse_upoly};

    #[test]
    fn gcd_over_extension() {
        let f = parse_upoly("t^2-2", Var::T).unwrap();
        let ctx = BranchCtx::new(Var::T, &f).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(Var::T, ctx.generator());
        let w = Var::u(1);
        let a = specialize(&parse_poly("u1^2-2").unwrap(), w, &vals, &ctx).unwrap();
        let b = specialize(&parse_poly("u1^2-t*u1").unwrap(), w, &vals, &ctx).unwrap();
        let g = gcd(a, b).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(-&g[0], ctx.generator());
    }

    #[test]
    fn undecided_leading_coefficient_splits() {
        let f = parse_upoly("t^2-1", Var::T).unwrap();
        let ctx = BranchCtx::new(Var::T, &f).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(Var::T, ctx.generator());
        let a = specialize(&parse_poly("(t-1)*u1+1").unwrap(), Var::u(1), &vals, &ctx).unwrap();
        assert!(matches!(gcd(a, vec![]), Err(AlgebraError::SplitRequired(_))));
    }
}
