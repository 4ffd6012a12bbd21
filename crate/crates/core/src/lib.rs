//! Exact computation with complex projective line arrangements: intersection
//! lattices, combinatorial profile screening and realizability of incidence
//! specifications by elimination.

pub mod algebra;
pub mod casebook;
pub mod geometry;
pub mod lattice;
pub mod moduli;

pub use algebra::{BranchCtx, CtxElem, MultiPoly, Rat, UniPoly, Var};
