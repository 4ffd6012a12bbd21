use super::{AlgebraError, MultiPoly, QPoly, Var};

/// Resultant of `f` and `g` with respect to `v`: the determinant of the
/// Sylvester matrix with the `deg g` rows of `f` coefficients first.
///
/// The determinant is computed by fraction-free (Bareiss) elimination over
/// the polynomial ring in the remaining variables.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, v: Var) -> Result<MultiPoly, AlgebraError> {
    let df = f.degree_in(v) as usize;
    let dg = g.degree_in(v) as usize;
    if df == 0 && dg == 0 {
        return Err(AlgebraError::VarAbsentFromBoth(v));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MultiPoly::zero());
    }
    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    let n = df + dg;
    let mut m = vec![vec![MultiPoly::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate().take(dg) {
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
    }
    for i in 0..df {
        for (k, c) in gc.iter().rev().enumerate() {
            m[dg + i][i + k] = c.clone();
        }
    }
    Ok(bareiss_det(m))
}

/// Univariate resultant, via the multivariate routine.
pub fn resultant_uni(f: &QPoly, g: &QPoly) -> Result<super::Rat, AlgebraError> {
    let r = resultant(
        &MultiPoly::from_univariate(f, Var::T),
        &MultiPoly::from_univariate(g, Var::T),
        Var::T,
    )?;
    Ok(r.as_constant().expect("univariate resultant is constant"))
}

/// Determinant of a square matrix of polynomials by Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<MultiPoly>>) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut negate = false;
    let mut prev = MultiPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Prefer the sparsest available pivot.
            let swap = (k + 1..n)
                .filter(|&i| !m[i][k].is_zero())
                .min_by_key(|&i| m[i][k].num_terms());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return MultiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            m[i][k] = MultiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(resultant(&p("t-2"), &p("t^2-3"), Var::T).unwrap(), MultiPoly::int(1));
        // f-rows first: Res(t-a, t-b) = g(a) = a-b
        let r = resultant(&p("t-t1"), &p("t-t2"), Var::T).unwrap();
        assert_eq!(r, p("t1-t2"));
        assert_eq!(resultant(&p("t^2+1"), &p("t^2-1"), Var::T).unwrap(), MultiPoly::int(4));
    }

    #[test]
    fn absent_variable() {
        assert_eq!(
            resultant(&p("t1"), &p("t2"), Var::T),
            Err(AlgebraError::VarAbsentFromBoth(Var::T))
        );
        // constant in v: Res(f, c) = c^deg f
        assert_eq!(resultant(&p("t^3+1"), &p("2"), Var::T).unwrap(), MultiPoly::int(8));
    }

    #[test]
    fn common_factor_gives_zero() {
        let f = p("(t-t1)*(t+3)");
        let g = p("(t-t1)*(t^2+t2)");
        assert!(resultant(&f, &g, Var::T).unwrap().is_zero());
        let h = p("t^2+t2");
        assert!(!resultant(&f, &h, Var::T).unwrap().is_zero());
    }

    #[test]
    fn determinant_by_hand() {
        let m = vec![
            vec![MultiPoly::int(2), MultiPoly::int(0), MultiPoly::int(1)],
            vec![MultiPoly::int(1), MultiPoly::int(3), MultiPoly::int(2)],
            vec![MultiPoly::int(1), MultiPoly::int(1), MultiPoly::int(1)],
        ];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(bareiss_det(m), MultiPoly::zero());
        let m = vec![
            vec![MultiPoly::int(0), MultiPoly::int(1)],
            vec![MultiPoly::int(1), MultiPoly::int(0)],
        ];
        assert_eq!(bareiss_det(m), MultiPoly::int(-1));
    }
}
