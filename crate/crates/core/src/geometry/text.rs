//! Lines written as linear forms, e.g. `X+(t3-t4)*Y-t3*Z`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::{GeomError, ProjLine, QLine};
use crate::algebra::parse::EvalOps;
use crate::algebra::{AlgebraError, BranchCtx, CtxElem, Expr, ParseError, Rat, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LineParseError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("not linear in X, Y, Z")]
    NonLinear,
    #[error("constant term in a homogeneous linear form")]
    NotHomogeneous,
    #[error("division by an expression involving X, Y or Z")]
    DivisionByCoordinate,
    #[error("unknown parameter {0}")]
    UnknownParameter(Var),
    #[error("{0}")]
    Algebra(#[from] AlgebraError),
    #[error("{0}")]
    Geom(#[from] GeomError),
}

impl LineParseError {
    pub fn split(&self) -> Option<&crate::algebra::Split> {
        match self {
            LineParseError::Algebra(e) => e.split(),
            LineParseError::Geom(e) => e.split(),
            _ => None,
        }
    }
}

/// Values of the named parameters inside a branch context. The context
/// variable itself (normally `t`) is always bound to the generator.
#[derive(Clone, Debug)]
pub struct ParamEnv {
    ctx: Arc<BranchCtx>,
    values: BTreeMap<Var, CtxElem>,
}

impl ParamEnv {
    pub fn new(ctx: Arc<BranchCtx>) -> Self {
        let mut values = BTreeMap::new();
        if !ctx.is_trivial() {
            values.insert(ctx.var(), ctx.generator());
        }
        ParamEnv { ctx, values }
    }

    pub fn ctx(&self) -> &Arc<BranchCtx> {
        &self.ctx
    }

    pub fn get(&self, v: Var) -> Option<&CtxElem> {
        self.values.get(&v)
    }

    pub fn set(&mut self, v: Var, x: CtxElem) {
        self.values.insert(v, x);
    }

    /// Binds `v` to the value of a scalar expression in the parameters
    /// bound so far.
    pub fn define(&mut self, v: Var, text: &str) -> Result<(), LineParseError> {
        let x = self.eval_scalar(&Expr::parse(text)?)?;
        self.values.insert(v, x);
        Ok(())
    }

    pub fn eval_scalar(&self, e: &Expr) -> Result<CtxElem, LineParseError> {
        let form = self.eval_form(e)?;
        if form[1..].iter().any(|c| !c.is_zero_rep()) {
            return Err(LineParseError::NonLinear);
        }
        Ok(form[0].clone())
    }

    /// `[constant, X, Y, Z]` coefficients.
    fn eval_form(&self, e: &Expr) -> Result<[CtxElem; 4], LineParseError> {
        let ctx = &self.ctx;
        let unit = |i: usize| {
            let mut f = [ctx.zero(), ctx.zero(), ctx.zero(), ctx.zero()];
            f[i] = ctx.one();
            f
        };
        e.eval(
            &|v| match v {
                Var::X => Ok(unit(1)),
                Var::Y => Ok(unit(2)),
                Var::Z => Ok(unit(3)),
                _ => {
                    let x = self.values.get(&v).ok_or(LineParseError::UnknownParameter(v))?;
                    Ok([x.clone(), ctx.zero(), ctx.zero(), ctx.zero()])
                }
            },
            &|r| [ctx.constant(r.clone()), ctx.zero(), ctx.zero(), ctx.zero()],
            &FormOps,
        )
    }
}

struct FormOps;

fn is_scalar(f: &[CtxElem; 4]) -> bool {
    f[1..].iter().all(CtxElem::is_zero_rep)
}

impl EvalOps<[CtxElem; 4], LineParseError> for FormOps {
    fn add(&self, a: [CtxElem; 4], b: [CtxElem; 4]) -> [CtxElem; 4] {
        std::array::from_fn(|i| &a[i] + &b[i])
    }
    fn sub(&self, a: [CtxElem; 4], b: [CtxElem; 4]) -> [CtxElem; 4] {
        std::array::from_fn(|i| &a[i] - &b[i])
    }
    fn neg(&self, a: [CtxElem; 4]) -> [CtxElem; 4] {
        std::array::from_fn(|i| -&a[i])
    }
    fn mul(&self, a: [CtxElem; 4], b: [CtxElem; 4]) -> Result<[CtxElem; 4], LineParseError> {
        if is_scalar(&a) {
            Ok(std::array::from_fn(|i| &a[0] * &b[i]))
        } else if is_scalar(&b) {
            Ok(std::array::from_fn(|i| &a[i] * &b[0]))
        } else {
            Err(LineParseError::NonLinear)
        }
    }
    fn div(&self, a: [CtxElem; 4], b: [CtxElem; 4]) -> Result<[CtxElem; 4], LineParseError> {
        if !is_scalar(&b) {
            return Err(LineParseError::DivisionByCoordinate);
        }
        let inv = b[0].invert()?;
        Ok(std::array::from_fn(|i| &a[i] * &inv))
    }
}

/// Parses a linear form into a line over the environment's context.
pub fn parse_line_in(text: &str, env: &ParamEnv) -> Result<ProjLine<CtxElem>, LineParseError> {
    let f = env.eval_form(&Expr::parse(text)?)?;
    if !f[0].is_zero_rep() {
        return Err(LineParseError::NotHomogeneous);
    }
    let [_, a, b, c] = f;
    Ok(ProjLine::new(a, b, c)?)
}

/// Parses a linear form with rational coefficients.
pub fn parse_line(text: &str) -> Result<QLine, LineParseError> {
    let env = ParamEnv::new(BranchCtx::trivial());
    let l = parse_line_in(text, &env)?;
    Ok(l.map(|x| x.as_rat().unwrap_or_else(Rat::one)))
}
