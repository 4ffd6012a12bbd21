use std::fmt;

use serde::Serialize;

use super::{IncidenceSpec, ModuliError};
use crate::algebra::{MultiPoly, Rat, Var};
use crate::geometry::QLine;

/// The pencil a parametrized line belongs to: `A` lines are `X = vZ`
/// through (0:1:0), `B` lines are `Y = vZ` through (1:0:0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PencilSide {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Fixed(QLine),
    Pencil { side: PencilSide, var: Var },
    /// Not placed by the normalization.
    Free,
}

/// Coordinates fixed by sending the first anchor point to (0:1:0), the
/// second to (1:0:0), and two cross points of the pencils to (0:0:1) and
/// (1:1:1).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationFrame {
    pub anchor_a: Vec<usize>,
    pub anchor_b: Vec<usize>,
    pub shared: Option<usize>,
    pub slots: Vec<Slot>,
    pub unknowns: Vec<Var>,
}

impl NormalizationFrame {
    /// Coefficient vector of a placed line.
    pub fn line_poly(&self, i: usize) -> Option<[MultiPoly; 3]> {
        match &self.slots[i] {
            Slot::Fixed(l) => Some(l.coeffs().clone().map(MultiPoly::constant)),
            Slot::Pencil { side, var } => {
                let v = -MultiPoly::var(*var);
                Some(match side {
                    PencilSide::A => [MultiPoly::one(), MultiPoly::zero(), v],
                    PencilSide::B => [MultiPoly::zero(), MultiPoly::one(), v],
                })
            }
            Slot::Free => None,
        }
    }

    pub fn pencil_vars(&self, side: PencilSide) -> Vec<Var> {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Pencil { side: sd, var } if *sd == side => Some(*var),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for NormalizationFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Slot::Fixed(l) => writeln!(f, "L{}: {}", i + 1, show_fixed(l))?,
                Slot::Pencil { side: PencilSide::A, var } => writeln!(f, "L{}: X={var}Z", i + 1)?,
                Slot::Pencil { side: PencilSide::B, var } => writeln!(f, "L{}: Y={var}Z", i + 1)?,
                Slot::Free => writeln!(f, "L{}: free", i + 1)?,
            }
        }
        Ok(())
    }
}

fn show_fixed(l: &QLine) -> &'static str {
    let c = l.coeffs();
    let z = Rat::from_integer(0.into());
    let o = Rat::from_integer(1.into());
    let m = -o.clone();
    match (&c[0], &c[1], &c[2]) {
        (a, b, cc) if *a == o && *b == z && *cc == z => "X=0",
        (a, b, cc) if *a == o && *b == z && *cc == m => "X=Z",
        (a, b, cc) if *a == z && *b == o && *cc == z => "Y=0",
        (a, b, cc) if *a == z && *b == o && *cc == m => "Y=Z",
        _ => "Z=0",
    }
}

/// Admissible anchor pairs in the order they are tried: the first anchor
/// has the highest multiplicity, the second shares one line with it if
/// possible, larger points first.
pub fn anchor_choices(spec: &IncidenceSpec) -> Vec<(usize, usize)> {
    let pts = spec.points();
    let mut firsts: Vec<usize> = (0..pts.len()).collect();
    firsts.sort_by_key(|&i| (std::cmp::Reverse(pts[i].len()), i));
    let mut out = Vec::new();
    for &a in &firsts {
        let mut seconds: Vec<usize> = (0..pts.len()).filter(|&b| b != a).collect();
        seconds.sort_by_key(|&b| {
            let shared = pts[b].iter().filter(|i| pts[a].contains(i)).count();
            (usize::from(shared != 1), std::cmp::Reverse(pts[b].len()), b)
        });
        out.extend(seconds.into_iter().map(|b| (a, b)));
    }
    out
}

/// Normalizes with the first anchor choice.
pub fn normalize(spec: &IncidenceSpec) -> Result<NormalizationFrame, ModuliError> {
    let &(a, b) = anchor_choices(spec).first().ok_or(ModuliError::NoPencilPair)?;
    normalize_with(spec, a, b)
}

/// Places the lines through points `a` and `b` of the specification. The
/// lowest-indexed lines become `X=0, X=Z` and `Y=0, Y=Z`; further pencil
/// lines get parameters, those of the `b` pencil numbered first. A shared
/// line becomes `Z=0`.
pub fn normalize_with(spec: &IncidenceSpec, a: usize, b: usize) -> Result<NormalizationFrame, ModuliError> {
    let pts = spec.points();
    if a == b || a >= pts.len() || b >= pts.len() {
        return Err(ModuliError::NoPencilPair);
    }
    let (pa, pb) = (&pts[a], &pts[b]);
    let shared = pa.iter().copied().find(|i| pb.contains(i));
    let side_a: Vec<usize> = pa.iter().copied().filter(|&i| Some(i) != shared).collect();
    let side_b: Vec<usize> = pb.iter().copied().filter(|&i| Some(i) != shared).collect();
    if side_a.len() < 2 || side_b.len() < 2 {
        return Err(ModuliError::NoPencilPair);
    }
    let mut slots = vec![Slot::Free; spec.n_lines()];
    if let Some(s) = shared {
        slots[s] = Slot::Fixed(QLine::ints(0, 0, 1));
    }
    slots[side_a[0]] = Slot::Fixed(QLine::ints(1, 0, 0));
    slots[side_a[1]] = Slot::Fixed(QLine::ints(1, 0, -1));
    slots[side_b[0]] = Slot::Fixed(QLine::ints(0, 1, 0));
    slots[side_b[1]] = Slot::Fixed(QLine::ints(0, 1, -1));
    let mut unknowns = Vec::new();
    let mut next = 1;
    for (side, lines) in [(PencilSide::B, &side_b), (PencilSide::A, &side_a)] {
        for &i in &lines[2..] {
            let var = Var::t(next);
            next += 1;
            unknowns.push(var);
            slots[i] = Slot::Pencil { side, var };
        }
    }
    Ok(NormalizationFrame { anchor_a: pa.clone(), anchor_b: pb.clone(), shared, slots, unknowns })
}
