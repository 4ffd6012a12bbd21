use std::fmt;

use serde::Serialize;

use super::normalize::{NormalizationFrame, PencilSide};
use super::IncidenceSpec;
use crate::algebra::{MultiPoly, Monomial, Rat, Var};

/// A polynomial with a human-readable origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeled {
    #[serde(serialize_with = "as_string")]
    pub poly: MultiPoly,
    pub origin: String,
}

fn as_string<S: serde::Serializer>(p: &MultiPoly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Equations and non-degeneracy conditions for a normalized specification.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub variables: Vec<Var>,
    /// Coefficient vectors of all lines in terms of `variables`.
    pub lines: Vec<[MultiPoly; 3]>,
    /// How each line was obtained.
    pub derivation: Vec<String>,
    pub equations: Vec<Labeled>,
    pub inequations: Vec<Labeled>,
    /// Small polynomials known to be nonzero on every valid solution; used
    /// to strip factors.
    pub atoms: Vec<MultiPoly>,
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (l, d)) in self.lines.iter().zip(&self.derivation).enumerate() {
            writeln!(f, "L{}: ({}, {}, {})  [{d}]", i + 1, l[0], l[1], l[2])?;
        }
        for e in &self.equations {
            writeln!(f, "{} = 0  [{}]", e.poly, e.origin)?;
        }
        Ok(())
    }
}

pub(crate) type PVec = [MultiPoly; 3];

pub(crate) fn cross(a: &PVec, b: &PVec) -> PVec {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub(crate) fn dot(a: &PVec, b: &PVec) -> MultiPoly {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

fn is_zero_vec(v: &PVec) -> bool {
    v.iter().all(MultiPoly::is_zero)
}

/// Removes common monomial and rational factors, and common atoms.
pub(crate) fn tidy(v: PVec, atoms: &[MultiPoly]) -> PVec {
    if is_zero_vec(&v) {
        return v;
    }
    let mut g: Option<Monomial> = None;
    for p in v.iter().filter(|p| !p.is_zero()) {
        let m = p.monomial_content();
        g = Some(match g {
            None => m,
            Some(h) => h.gcd(&m),
        });
    }
    let mono = MultiPoly::term(Rat::from_integer(1.into()), g.unwrap());
    let mut v = v.map(|p| p.exact_div(&mono).expect("monomial content divides"));
    for a in atoms {
        loop {
            let q: Vec<Option<MultiPoly>> = v.iter().map(|p| p.exact_div(a)).collect();
            if a.is_constant() || q.iter().any(Option::is_none) {
                break;
            }
            let mut it = q.into_iter().map(Option::unwrap);
            v = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
        }
    }
    let lead = v.iter().find(|p| !p.is_zero()).unwrap().leading().unwrap().1.clone();
    let scale = Rat::from_integer(1.into()) / lead;
    v.map(|p| p.scale(&scale))
}

pub(crate) fn det3(a: &PVec, b: &PVec, c: &PVec) -> MultiPoly {
    dot(a, &cross(b, c))
}

/// Determines the lines left free by the normalization. A line through two
/// known points is their join; when no line can be determined, the one
/// through the most known points gets parameters `u_i`. Each further
/// required incidence becomes an equation, and every triple of lines not
/// meant to be concurrent yields an inequation.
pub fn propagate(frame: &NormalizationFrame, spec: &IncidenceSpec) -> ConstraintSystem {
    let n = spec.n_lines();
    let mut atoms = Vec::new();
    for side in [PencilSide::A, PencilSide::B] {
        let vars = frame.pencil_vars(side);
        for (i, &v) in vars.iter().enumerate() {
            let x = MultiPoly::var(v);
            atoms.push(x.clone());
            atoms.push(&x - &MultiPoly::one());
            for &w in &vars[i + 1..] {
                atoms.push(&x - &MultiPoly::var(w));
            }
        }
    }
    let mut lines: Vec<Option<PVec>> = (0..n).map(|i| frame.line_poly(i)).collect();
    let mut derivation: Vec<String> = (0..n)
        .map(|i| if lines[i].is_some() { "normalized".to_string() } else { String::new() })
        .collect();
    let mut rank: Vec<usize> = vec![usize::MAX; n];
    let mut next_rank = 0;
    for i in 0..n {
        if lines[i].is_some() {
            rank[i] = next_rank;
            next_rank += 1;
        }
    }
    let mut variables = frame.unknowns.clone();
    let mut next_u = 1;

    // Known points on line k: meets of the two earliest lines of each
    // multiple point through k.
    let known_points = |k: usize, lines: &[Option<PVec>], rank: &[usize]| -> Vec<(PVec, String)> {
        let mut out = Vec::new();
        for s in spec.points().iter().filter(|s| s.contains(&k)) {
            let mut others: Vec<usize> = s.iter().copied().filter(|&i| i != k && lines[i].is_some()).collect();
            if others.len() < 2 {
                continue;
            }
            others.sort_by_key(|&i| rank[i]);
            let (a, b) = (others[0], others[1]);
            let p = tidy(cross(lines[a].as_ref().unwrap(), lines[b].as_ref().unwrap()), &atoms);
            if !is_zero_vec(&p) {
                out.push((p, format!("L{}∩L{}", a + 1, b + 1)));
            }
        }
        out
    };

    while lines.iter().any(Option::is_none) {
        let mut done = false;
        for k in 0..n {
            if lines[k].is_some() {
                continue;
            }
            let pts = known_points(k, &lines, &rank);
            'pairs: for x in 0..pts.len() {
                for y in x + 1..pts.len() {
                    let l = tidy(cross(&pts[x].0, &pts[y].0), &atoms);
                    if !is_zero_vec(&l) {
                        lines[k] = Some(l);
                        derivation[k] = format!("through {} and {}", pts[x].1, pts[y].1);
                        done = true;
                        break 'pairs;
                    }
                }
            }
            if done {
                rank[k] = next_rank;
                next_rank += 1;
                break;
            }
        }
        if done {
            continue;
        }
        let (k, pts) = (0..n)
            .filter(|&k| lines[k].is_none())
            .map(|k| (k, known_points(k, &lines, &rank)))
            .max_by_key(|(k, p)| (p.len(), std::cmp::Reverse(*k)))
            .unwrap();
        let u = Var::u(next_u);
        next_u += 1;
        variables.push(u);
        let (l, how) = match pts.first() {
            Some((p, name)) => {
                let aux = if p[2].is_zero() {
                    [MultiPoly::var(u), MultiPoly::zero(), MultiPoly::one()]
                } else {
                    [MultiPoly::one(), MultiPoly::var(u), MultiPoly::zero()]
                };
                (tidy(cross(p, &aux), &atoms), format!("through {name}, parameter {u}"))
            }
            None => {
                let w = Var::u(next_u);
                next_u += 1;
                variables.push(w);
                ([MultiPoly::var(u), MultiPoly::one(), MultiPoly::var(w)], format!("parameters {u}, {w}"))
            }
        };
        lines[k] = Some(l);
        derivation[k] = how;
        rank[k] = next_rank;
        next_rank += 1;
    }
    let lines: Vec<PVec> = lines.into_iter().map(Option::unwrap).collect();

    let mut equations = Vec::new();
    for s in spec.points() {
        let mut by_rank = s.clone();
        by_rank.sort_by_key(|&i| rank[i]);
        let (a, b) = (by_rank[0], by_rank[1]);
        let p = tidy(cross(&lines[a], &lines[b]), &atoms);
        for &k in &by_rank[2..] {
            let e = dot(&p, &lines[k]);
            if !e.is_zero() {
                equations.push(Labeled {
                    poly: e.primitive(),
                    origin: format!("L{} through L{}∩L{}", k + 1, a + 1, b + 1),
                });
            }
        }
    }

    let mut inequations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let together = spec.points().iter().any(|s| s.contains(&i) && s.contains(&j) && s.contains(&k));
                if together {
                    continue;
                }
                let d = det3(&lines[i], &lines[j], &lines[k]);
                inequations.push(Labeled {
                    poly: if d.is_zero() { d } else { d.primitive() },
                    origin: format!("L{},L{},L{} not concurrent", i + 1, j + 1, k + 1),
                });
            }
        }
    }

    ConstraintSystem { variables, lines, derivation, equations, inequations, atoms }
}
