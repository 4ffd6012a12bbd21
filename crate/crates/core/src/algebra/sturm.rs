//! Real root counting and isolation by Sturm sequences.

use num_traits::{One, Signed, Zero};

use super::rational::{sign, to_f64, Rat};
use super::{AlgebraError, QPoly};

fn chain(f: &QPoly) -> Result<Vec<QPoly>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !f.is_squarefree() {
        return Err(AlgebraError::NotSquarefree);
    }
    let mut seq = vec![positive_scale(f), positive_scale(&f.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1])?;
        if r.is_zero() {
            break;
        }
        seq.push(-positive_scale(&r));
    }
    Ok(seq)
}

/// Divides by the absolute value of the leading coefficient, which keeps
/// every sign in the chain.
fn positive_scale(p: &QPoly) -> QPoly {
    match p.lead() {
        Some(l) => p.scale(&(Rat::one() / l.abs())),
        None => p.clone(),
    }
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn var_at(seq: &[QPoly], x: &Rat) -> usize {
    variations(seq.iter().map(|p| sign(&p.eval(x))))
}

fn var_at_infinity(seq: &[QPoly], positive: bool) -> usize {
    variations(seq.iter().map(|p| {
        let s = sign(p.lead().unwrap());
        let odd = p.degree().unwrap() % 2 == 1;
        if !positive && odd {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of a squarefree `f`.
pub fn real_root_count(f: &QPoly) -> Result<usize, AlgebraError> {
    let seq = chain(f)?;
    Ok(var_at_infinity(&seq, false) - var_at_infinity(&seq, true))
}

/// Number of distinct real roots of a squarefree `f` in the open interval
/// `(a, b)`.
pub fn real_root_count_in(f: &QPoly, a: &Rat, b: &Rat) -> Result<usize, AlgebraError> {
    let seq = chain(f)?;
    if a >= b {
        return Ok(0);
    }
    Ok(count_open(&seq, a, b))
}

/// Sturm counts `V(a) - V(b)` roots in `(a, b]`.
fn count_half_open(seq: &[QPoly], a: &Rat, b: &Rat) -> usize {
    var_at(seq, a) - var_at(seq, b)
}

fn count_open(seq: &[QPoly], a: &Rat, b: &Rat) -> usize {
    let c = count_half_open(seq, a, b);
    if seq[0].eval(b).is_zero() {
        c - 1
    } else {
        c
    }
}

/// A real root `r` with `lo < r <= hi`, alone in that interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RootInterval {
    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / Rat::from_integer(2.into())))
    }
}

/// Strict bound on the absolute value of every root (Cauchy).
pub fn root_bound(f: &QPoly) -> Rat {
    let lead = f.lead().expect("nonzero").abs();
    let m = f
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a });
    m + Rat::one()
}

/// Isolating intervals for all real roots of a squarefree `f`, ascending.
pub fn isolate_real_roots(f: &QPoly) -> Result<Vec<RootInterval>, AlgebraError> {
    let seq = chain(f)?;
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let b = root_bound(f);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    let two = Rat::from_integer(2.into());
    while let Some((lo, hi)) = stack.pop() {
        let c = count_half_open(&seq, &lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(RootInterval { lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / &two;
        // Upper half first so the lower half pops first.
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Shrinks an isolating interval until its width is below `width`.
pub fn refine(f: &QPoly, iv: &RootInterval, width: &Rat) -> Result<RootInterval, AlgebraError> {
    let seq = chain(f)?;
    let two = Rat::from_integer(2.into());
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    if seq[0].eval(&hi).is_zero() {
        return Ok(RootInterval { lo: hi.clone(), hi });
    }
    while &hi - &lo >= *width {
        let mid = (&lo + &hi) / &two;
        if count_half_open(&seq, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if seq[0].eval(&hi).is_zero() {
            return Ok(RootInterval { lo: hi.clone(), hi });
        }
    }
    Ok(RootInterval { lo, hi })
}

/// The real roots of a squarefree `f` as `f64`, ascending, refined by
/// bisection to double precision. For drawing only.
pub fn real_roots_f64(f: &QPoly) -> Result<Vec<f64>, AlgebraError> {
    let tiny = Rat::new(1.into(), num_bigint::BigInt::one() << 64);
    isolate_real_roots(f)?
        .iter()
        .map(|iv| {
            let mag = iv.hi.abs().max(iv.lo.abs()).max(Rat::one());
            refine(f, iv, &(&tiny * mag)).map(|r| r.midpoint_f64())
        })
        .collect()
}
