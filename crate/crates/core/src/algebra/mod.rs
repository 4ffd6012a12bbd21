//! Exact arithmetic over Q and over Q[t]/(f) for squarefree f.

pub mod ctx;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod resultant;
pub mod sturm;
pub mod upoly;
pub mod var;

pub use ctx::{BranchCtx, CtxElem, Split, ZeroTest};
pub use mpoly::{Monomial, MultiPoly};
pub use parse::{parse_poly, parse_upoly, Expr, ExprError, ParseError};
pub use rational::Rat;
pub use resultant::resultant;
pub use sturm::{real_root_count, real_root_count_in, RootInterval};
pub use upoly::{Coeff, ExtendedGcd, UniPoly};
pub use var::Var;

pub type QPoly = UniPoly<Rat>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("variable {0} occurs in neither polynomial")]
    VarAbsentFromBoth(Var),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("zero test is undecided across the roots of the modulus; split into {0}")]
    SplitRequired(Split),
    #[error("operands live in different branch contexts")]
    ContextMismatch,
}

impl AlgebraError {
    pub fn split(&self) -> Option<&Split> {
        match self {
            AlgebraError::SplitRequired(s) => Some(s),
            _ => None,
        }
    }
}
