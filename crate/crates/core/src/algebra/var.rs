use std::fmt;
use std::str::FromStr;

/// A polynomial variable.
///
/// The symbol set is closed: the homogeneous coordinates `X`, `Y`, `Z`, the
/// residual parameter `t`, the pencil unknowns `t1, t2, ...` and the auxiliary
/// line unknowns `u1, u2, ...`. Ordering follows that listing, which is also
/// the variable order used by the graded lexicographic term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u16);

const T_BASE: u16 = 16;
const U_BASE: u16 = 1024;
const MAX_INDEX: u16 = 999;

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    pub const Z: Var = Var(2);
    pub const T: Var = Var(3);

    /// `t<i>`, `i >= 1`.
    pub fn t(i: u16) -> Var {
        assert!((1..=MAX_INDEX).contains(&i), "t index out of range: {i}");
        Var(T_BASE + i)
    }

    /// `u<i>`, `i >= 1`.
    pub fn u(i: u16) -> Var {
        assert!((1..=MAX_INDEX).contains(&i), "u index out of range: {i}");
        Var(U_BASE + i)
    }

    pub fn is_coordinate(self) -> bool {
        self.0 <= 2
    }

    pub fn code(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("X"),
            1 => f.write_str("Y"),
            2 => f.write_str("Z"),
            3 => f.write_str("t"),
            c if c >= U_BASE => write!(f, "u{}", c - U_BASE),
            c => write!(f, "t{}", c - T_BASE),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown variable `{0}`")]
pub struct UnknownVar(pub String);

impl FromStr for Var {
    type Err = UnknownVar;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" => return Ok(Var::X),
            "Y" => return Ok(Var::Y),
            "Z" => return Ok(Var::Z),
            "t" => return Ok(Var::T),
            _ => {}
        }
        let bad = || UnknownVar(s.to_string());
        if s.is_empty() || !s.is_char_boundary(1) {
            return Err(bad());
        }
        let (head, digits) = s.split_at(1);
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let i: u16 = digits.parse().map_err(|_| bad())?;
        if !(1..=MAX_INDEX).contains(&i) {
            return Err(bad());
        }
        match head {
            "t" => Ok(Var::t(i)),
            "u" => Ok(Var::u(i)),
            _ => Err(bad()),
        }
    }
}
