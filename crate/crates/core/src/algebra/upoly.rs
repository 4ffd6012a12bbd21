use std::fmt::{self, Debug};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::rational::{denominator_lcm, numerator_gcd, Rat};
use super::{AlgebraError, Var};

/// Coefficient field for [`UniPoly`].
///
/// Exact work uses [`Rat`]; `f64` is only used to draw real arrangements.
pub trait Coeff: num_traits::Num + Clone + Debug + Neg<Output = Self> {}

impl<T: num_traits::Num + Clone + Debug + Neg<Output = T>> Coeff for T {}

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of degree `i`.
///
/// The coefficient list is empty for the zero polynomial and otherwise ends in
/// a nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        UniPoly { coeffs: vec![T::zero(), T::one()] }
    }

    /// `c * x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::ZeroPolynomial)?;
        let lead = d.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - c.clone() * di.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, AlgebraError> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Scales to leading coefficient one. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
            }
        }
    }

    /// Composition `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * g) + &Self::constant(c.clone()))
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Coeff> Debug for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}

impl<T: Coeff> Add for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn add(self, o: &UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn sub(self, o: &UniPoly<T>) -> UniPoly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn mul(self, o: &UniPoly<T>) -> UniPoly<T> {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<T: Coeff> Neg for &UniPoly<T> {
    type Output = UniPoly<T>;
    fn neg(self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr for UniPoly<T> {
            type Output = UniPoly<T>;
            fn $m(self, o: UniPoly<T>) -> UniPoly<T> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Coeff> Neg for UniPoly<T> {
    type Output = UniPoly<T>;
    fn neg(self) -> UniPoly<T> {
        -&self
    }
}

/// Result of the extended Euclidean algorithm: `s*a + t*b = gcd`, gcd monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedGcd {
    pub gcd: UniPoly<Rat>,
    pub s: UniPoly<Rat>,
    pub t: UniPoly<Rat>,
}

impl UniPoly<Rat> {
    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| super::rational::rat(c)).collect())
    }

    /// Integer-coefficient primitive associate with positive leading
    /// coefficient, as a rational polynomial.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = denominator_lcm(&self.coeffs);
        let scaled: Vec<Rat> = self
            .coeffs
            .iter()
            .map(|c| c * Rat::from_integer(l.clone()))
            .collect();
        let g = numerator_gcd(&scaled);
        let mut g = Rat::from_integer(g);
        if scaled.last().unwrap().is_negative() {
            g = -g;
        }
        Self::new(scaled.into_iter().map(|c| c / g.clone()).collect())
    }

    /// Pseudo-remainder `prem(a, b)`: `lc(b)^(deg a - deg b + 1) * a mod b`,
    /// computed without division.
    pub fn pseudo_rem(&self, b: &Self) -> Result<Self, AlgebraError> {
        let db = b.degree().ok_or(AlgebraError::ZeroPolynomial)?;
        let lb = b.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().unwrap().clone();
            let t = Self::monomial(lr, dr - db);
            r = &r.scale(&lb) - &(&t * b);
        }
        Ok(r)
    }

    /// Monic gcd via the primitive polynomial remainder sequence over the
    /// integers. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("nonzero divisor").primitive();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid over Q.
    pub fn ext_gcd(a: &Self, b: &Self) -> ExtendedGcd {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => ExtendedGcd { gcd: r0, s: s0, t: t0 },
            Some(l) => {
                let inv = Rat::one() / l;
                ExtendedGcd {
                    gcd: r0.scale(&inv),
                    s: s0.scale(&inv),
                    t: t0.scale(&inv),
                }
            }
        }
    }

    /// `f / gcd(f, f')`, monic.
    pub fn squarefree_part(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        let (q, _) = self.div_rem(&g)?;
        Ok(q.monic())
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Exact quotient; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Integer coefficients of the primitive associate (for display and
    /// hashing).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive()
            .coeffs
            .iter()
            .map(|c| c.numer().clone())
            .collect()
    }

    /// Renders with the given variable name, highest degree first, in the
    /// canonical polynomial text syntax.
    pub fn display_in(&self, var: Var) -> String {
        super::mpoly::MultiPoly::from_univariate(self, var).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn p(cs: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_ints(cs)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn gcd_shared_root() {
        // t^2-1, t^2-2t+1 -> t-1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -2, 1])), p(&[-1, 1]));
    }

    #[test]
    fn gcd_figure12_cubic_with_derivative() {
        let f = p(&[-1, 1, 1, 1]);
        assert_eq!(f.gcd(&f.derivative()), p(&[1]));
        assert_eq!(f.derivative(), p(&[1, 2, 3]));
    }

    #[test]
    fn gcd_with_zero() {
        assert_eq!(UniPoly::zero().gcd(&p(&[2, 1])), p(&[2, 1]));
        assert_eq!(p(&[4, 2]).gcd(&UniPoly::zero()), p(&[2, 1]));
        assert!(UniPoly::<Rat>::zero().gcd(&UniPoly::zero()).is_zero());
    }

    #[test]
    fn squarefree_examples() {
        // (t-1)^2 (t+2) -> (t-1)(t+2)
        let f = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(f.squarefree_part().unwrap(), &p(&[-1, 1]) * &p(&[2, 1]));
        let c = p(&[-1, 1, 1, 1]);
        assert_eq!(c.squarefree_part().unwrap(), c);
        assert_eq!(p(&[0, 0, 4]).squarefree_part().unwrap(), p(&[0, 1]));
        assert_eq!(
            UniPoly::<Rat>::zero().squarefree_part(),
            Err(AlgebraError::ZeroPolynomial)
        );
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[3, -1, 0, 2, 5]);
        let b = p(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[0, 1]);
        let e = UniPoly::ext_gcd(&a, &b);
        assert_eq!(e.gcd, p(&[1]));
        assert_eq!(&(&e.s * &a) + &(&e.t * &b), p(&[1]));
    }

    #[test]
    fn primitive_associate() {
        let f = UniPoly::new(vec![ratio(1, 2), ratio(-3, 4)]);
        assert_eq!(f.primitive(), p(&[-2, 3]));
    }

    #[test]
    fn compose_and_eval() {
        let f = p(&[1, 0, 1]);
        let g = p(&[1, 1]);
        assert_eq!(f.compose(&g), p(&[2, 2, 1]));
        assert_eq!(f.eval(&rat(3)), rat(10));
    }

    #[test]
    fn float_coefficients() {
        let f: UniPoly<f64> = UniPoly::new(vec![-2.0, 0.0, 1.0]);
        assert!((f.eval(&2f64.sqrt())).abs() < 1e-12);
        assert_eq!(f.derivative().coeffs(), &[0.0, 2.0]);
    }
}
