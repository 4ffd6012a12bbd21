//! Reading a given arrangement in the coordinates of a normalization frame.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::lift::eval_ctx;
use super::normalize::{NormalizationFrame, PencilSide, Slot};
use super::propagate::ConstraintSystem;
use crate::algebra::{AlgebraError, CtxElem, Rat, Var};
use crate::geometry::det3;
use crate::lattice::CtxArrangement;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GaugeError {
    #[error("arrangement has {got} lines, frame has {want}")]
    LineCount { got: usize, want: usize },
    #[error("frame lines are not in general position in the arrangement")]
    Degenerate,
    #[error("L{0} does not pass through its pencil center")]
    OffPencil(usize),
    #[error("{0} is not fixed by the frame")]
    Unbound(Var),
    #[error("zero test needs a case split over the minimal polynomial")]
    Split,
}

impl From<AlgebraError> for GaugeError {
    fn from(_: AlgebraError) -> Self {
        GaugeError::Split
    }
}

/// Values of the frame's pencil parameters for an arrangement whose line
/// `i` plays the role of the specification's line `i`.
pub fn frame_values(frame: &NormalizationFrame, arr: &CtxArrangement) -> Result<BTreeMap<Var, CtxElem>, GaugeError> {
    let lines = arr.lines();
    if lines.len() != frame.slots.len() {
        return Err(GaugeError::LineCount { got: lines.len(), want: frame.slots.len() });
    }
    let ctx = arr.ctx().clone();
    let fixed: Vec<usize> = frame
        .slots
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, Slot::Fixed(l) if !l.coeffs()[0].is_zero() || !l.coeffs()[1].is_zero()))
        .map(|(i, _)| i)
        .collect();
    let src: Vec<[CtxElem; 3]> = fixed.iter().map(|&i| lines[i].coeffs().clone()).collect();
    let dst: Vec<[CtxElem; 3]> = fixed
        .iter()
        .map(|&i| match &frame.slots[i] {
            Slot::Fixed(l) => l.coeffs().clone().map(|c: Rat| ctx.constant(c)),
            _ => unreachable!(),
        })
        .collect();
    let (sw, dw) = (basis_weights(&src)?, basis_weights(&dst)?);
    let mut vals = BTreeMap::new();
    for (i, slot) in frame.slots.iter().enumerate() {
        let Slot::Pencil { side, var } = slot else { continue };
        let x = coords_in(&src, &lines[i].coeffs().clone())?;
        let mut img = [ctx.zero(), ctx.zero(), ctx.zero()];
        for k in 0..3 {
            let w = &(&x[k] * &sw[k].invert()?) * &dw[k];
            for (c, d) in img.iter_mut().zip(&dst[k]) {
                *c = &*c + &(&w * d);
            }
        }
        let (lead, off) = match side {
            PencilSide::A => (&img[0], &img[1]),
            PencilSide::B => (&img[1], &img[0]),
        };
        if !off.is_zero()? {
            return Err(GaugeError::OffPencil(i + 1));
        }
        vals.insert(*var, -&(&img[2] * &lead.invert()?));
    }
    Ok(vals)
}

/// Weights `w` with `p4 = w1 p1 + w2 p2 + w3 p3`.
fn basis_weights(p: &[[CtxElem; 3]]) -> Result<[CtxElem; 3], GaugeError> {
    if p.len() != 4 {
        return Err(GaugeError::Degenerate);
    }
    let w = coords_in(p, &p[3])?;
    for x in &w {
        if x.is_zero()? {
            return Err(GaugeError::Degenerate);
        }
    }
    Ok(w)
}

/// Coordinates of `v` in the basis `p[0..3]`, by Cramer's rule.
fn coords_in(p: &[[CtxElem; 3]], v: &[CtxElem; 3]) -> Result<[CtxElem; 3], GaugeError> {
    let d = det3(&p[0], &p[1], &p[2]);
    if d.is_zero()? {
        return Err(GaugeError::Degenerate);
    }
    let inv = d.invert()?;
    Ok([
        &det3(v, &p[1], &p[2]) * &inv,
        &det3(&p[0], v, &p[2]) * &inv,
        &det3(&p[0], &p[1], v) * &inv,
    ])
}

/// Outcome of substituting a parametrization into a constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationCheck {
    pub total: usize,
    /// Origins of the equations that do not vanish.
    pub failing: Vec<String>,
}

impl EquationCheck {
    pub fn holds(&self) -> bool {
        self.failing.is_empty()
    }
}

impl fmt::Display for EquationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} equations vanish", self.total - self.failing.len(), self.total)
    }
}

/// Evaluates every equation of the system at the given values; the
/// remainder modulo the minimal polynomial must be zero.
pub fn check_equations(sys: &ConstraintSystem, vals: &BTreeMap<Var, CtxElem>) -> Result<EquationCheck, GaugeError> {
    let Some(ctx) = vals.values().next().map(|x| x.ctx().clone()) else {
        return Ok(EquationCheck {
            total: sys.equations.len(),
            failing: sys.equations.iter().filter(|e| !e.poly.is_zero()).map(|e| e.origin.clone()).collect(),
        });
    };
    let mut failing = Vec::new();
    for e in &sys.equations {
        if let Some(v) = e.poly.vars().into_iter().find(|v| !vals.contains_key(v)) {
            return Err(GaugeError::Unbound(v));
        }
        let x = eval_ctx(&e.poly, vals, &ctx).expect("variables checked");
        if !x.rep().is_zero() {
            failing.push(e.origin.clone());
        }
    }
    Ok(EquationCheck { total: sys.equations.len(), failing })
}
