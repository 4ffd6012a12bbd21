use std::collections::BTreeSet;

use super::propagate::{ConstraintSystem, Labeled};
use super::verdict::Certificate;
use num_traits::One;

use crate::algebra::{resultant, MultiPoly, QPoly, Rat, Var};

/// `var = num / den`, with `den` nonzero on the branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    pub var: Var,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LeafKind {
    /// Every equation was used up by substitutions.
    Solved,
    /// The remaining equations project onto `var` with squarefree
    /// `modulus`; the other variables are recovered above each root.
    Algebraic { var: Var, modulus: QPoly, equations: Vec<MultiPoly> },
    /// The remaining equations could not be projected onto one variable.
    Stuck { equations: Vec<MultiPoly>, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    /// Case distinctions leading here.
    pub path: Vec<String>,
    pub subs: Vec<Substitution>,
    pub kind: LeafKind,
    /// Variables constrained by nothing.
    pub free: Vec<Var>,
    /// Variables fixed to a generic rational value because no single
    /// variable eliminant was found.
    pub specialized: Vec<Var>,
    /// Inequations still undecided, by index into the system's list.
    pub open_inequations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Elimination {
    pub leaves: Vec<Leaf>,
    pub dead: Vec<Certificate>,
    /// Dead ends below a specialization; they do not prove emptiness.
    pub inconclusive: Vec<Certificate>,
    pub nodes: usize,
}

const NODE_BUDGET: usize = 20_000;

#[derive(Clone)]
struct Node {
    eqs: Vec<Labeled>,
    ineqs: Vec<(MultiPoly, usize)>,
    atoms: Vec<MultiPoly>,
    subs: Vec<Substitution>,
    path: Vec<String>,
    specialized: Vec<Var>,
}

/// Divides out every atom factor.
fn saturate(mut p: MultiPoly, atoms: &[MultiPoly]) -> MultiPoly {
    if p.is_zero() {
        return p;
    }
    let mono = p.monomial_content();
    if !mono.is_one() {
        // A bare variable factor is only removable when it is an atom.
        for &(v, _) in mono.pairs() {
            let x = MultiPoly::var(v);
            if atoms.contains(&x) {
                while let Some(q) = p.exact_div(&x) {
                    p = q;
                    if !p.contains_var(v) {
                        break;
                    }
                }
            }
        }
    }
    for a in atoms {
        if a.is_constant() {
            continue;
        }
        while p.total_degree() >= a.total_degree() {
            match p.exact_div(a) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    p.primitive()
}

/// A polynomial that is a product of atoms up to a constant.
fn known_nonzero(p: &MultiPoly, atoms: &[MultiPoly]) -> bool {
    saturate(p.clone(), atoms).is_constant() && !p.is_zero()
}

impl Node {
    fn clean(&mut self) -> Result<(), Certificate> {
        self.atoms.retain(|a| !a.is_constant() || a.is_zero());
        if self.atoms.iter().any(MultiPoly::is_zero) {
            return Err(self.cert("a non-degeneracy factor vanishes identically".into()));
        }
        for (g, idx) in &self.ineqs {
            if g.is_zero() {
                return Err(self.cert(format!("inequation #{idx} vanishes identically")));
            }
        }
        self.ineqs.retain(|(g, _)| !g.is_constant());
        let mut seen = BTreeSet::new();
        let mut eqs = Vec::new();
        for e in std::mem::take(&mut self.eqs) {
            let p = saturate(e.poly, &self.atoms);
            if p.is_zero() {
                continue;
            }
            if p.is_constant() {
                return Err(self.cert(format!("{} reduces to a nonzero constant", e.origin)));
            }
            if seen.insert(p.to_string()) {
                eqs.push(Labeled { poly: p, origin: e.origin });
            }
        }
        self.eqs = eqs;
        Ok(())
    }

    fn cert(&self, reason: String) -> Certificate {
        Certificate { path: self.path.clone(), reason }
    }

    fn substitute(&mut self, v: Var, num: &MultiPoly, den: &MultiPoly) {
        for e in &mut self.eqs {
            e.poly = e.poly.substitute_fraction(v, num, den);
        }
        for (g, _) in &mut self.ineqs {
            *g = g.substitute_fraction(v, num, den);
        }
        for a in &mut self.atoms {
            *a = a.substitute_fraction(v, num, den).primitive();
        }
        self.subs.push(Substitution { var: v, num: num.clone(), den: den.clone() });
    }

    fn vars(&self) -> BTreeSet<Var> {
        self.eqs.iter().flat_map(|e| e.poly.vars()).collect()
    }
}

/// Solves the equations of a system by linear substitution with case
/// splits on vanishing pivots, then projects what is left onto a single
/// variable with resultants. Branches killed by an inequation or a
/// constant equation leave a certificate.
pub fn eliminate(sys: &ConstraintSystem) -> Elimination {
    let root = Node {
        eqs: sys.equations.clone(),
        ineqs: sys.inequations.iter().enumerate().map(|(i, g)| (g.poly.clone(), i)).collect(),
        atoms: sys.atoms.clone(),
        subs: Vec::new(),
        path: Vec::new(),
        specialized: Vec::new(),
    };
    let mut stack = vec![root];
    let mut leaves = Vec::new();
    let mut dead = Vec::new();
    let mut inconclusive = Vec::new();
    let mut nodes = 0;
    while let Some(mut node) = stack.pop() {
        nodes += 1;
        let leaf_of = |node: &Node, kind: LeafKind| {
            let used: BTreeSet<Var> = node.subs.iter().map(|s| s.var).chain(node.vars()).collect();
            Leaf {
                path: node.path.clone(),
                subs: node.subs.clone(),
                kind,
                free: sys.variables.iter().copied().filter(|v| !used.contains(v)).collect(),
                open_inequations: node.ineqs.iter().map(|(_, i)| *i).collect(),
                specialized: node.specialized.clone(),
            }
        };
        if nodes > NODE_BUDGET {
            let eqs = node.eqs.iter().map(|e| e.poly.clone()).collect();
            leaves.push(leaf_of(&node, LeafKind::Stuck { equations: eqs, reason: "case budget exhausted".into() }));
            continue;
        }
        if let Err(c) = node.clean() {
            if node.specialized.is_empty() { &mut dead } else { &mut inconclusive }.push(c);
            continue;
        }
        if node.eqs.is_empty() {
            leaves.push(leaf_of(&node, LeafKind::Solved));
            continue;
        }
        if let Some((ei, v, a, b)) = pick_linear(&node) {
            let origin = node.eqs[ei].origin.clone();
            if !known_nonzero(&a, &node.atoms) && !a.is_constant() {
                let mut zero = node.clone();
                zero.path.push(format!("coefficient of {v} in [{origin}] vanishes: {a} = 0"));
                zero.eqs[ei] = Labeled { poly: b.clone(), origin: format!("remainder ({origin})") };
                zero.eqs.push(Labeled { poly: a.clone(), origin: format!("vanishing coefficient ({origin})") });
                stack.push(zero);
                node.path.push(format!("{a} ≠ 0"));
                node.atoms.push(a.primitive());
            }
            node.substitute(v, &-b, &a);
            stack.push(node);
            continue;
        }
        let vars = node.vars();
        let eqs: Vec<MultiPoly> = node.eqs.iter().map(|e| e.poly.clone()).collect();
        if vars.len() == 1 {
            let s = *vars.iter().next().unwrap();
            match univariate_modulus(&eqs, s, &node.atoms) {
                Ok(f) => leaves.push(leaf_of(&node, LeafKind::Algebraic { var: s, modulus: f, equations: Vec::new() })),
                Err(reason) => if node.specialized.is_empty() { &mut dead } else { &mut inconclusive }.push(node.cert(reason)),
            }
            continue;
        }
        let mut order: Vec<Var> = vars.iter().copied().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(eqs.iter().filter(|e| e.contains_var(v)).count()), v));
        let mut result = None;
        for &s in &order {
            let projected = project(&eqs, s, &node.atoms);
            if projected.is_empty() {
                continue;
            }
            result = Some(match univariate_modulus(&projected, s, &node.atoms) {
                Ok(f) => Ok(LeafKind::Algebraic { var: s, modulus: f, equations: eqs.clone() }),
                Err(reason) => Err(format!("projection onto {s}: {reason}")),
            });
            break;
        }
        match result {
            Some(Ok(kind)) => leaves.push(leaf_of(&node, kind)),
            Some(Err(reason)) => if node.specialized.is_empty() { &mut dead } else { &mut inconclusive }.push(node.cert(reason)),
            None => {
                let s = order[0];
                let k = node.specialized.len() as i64;
                let c = MultiPoly::constant(Rat::new((31 + 10 * k).into(), (7 + 2 * k).into()));
                node.path.push(format!("no eliminant; {s} specialized to {c}"));
                node.specialized.push(s);
                node.substitute(s, &c, &MultiPoly::constant(Rat::one()));
                stack.push(node);
            }
        }
    }
    Elimination { leaves, dead, inconclusive, nodes }
}

/// The best equation linear in some variable: constant pivots first, then
/// pivots known to be nonzero, then the rest.
fn pick_linear(node: &Node) -> Option<(usize, Var, MultiPoly, MultiPoly)> {
    let mut best: Option<((u8, usize, usize, u32, Var), (usize, Var, MultiPoly, MultiPoly))> = None;
    for (i, e) in node.eqs.iter().enumerate() {
        for v in e.poly.vars() {
            if e.poly.degree_in(v) != 1 {
                continue;
            }
            let c = e.poly.coefficients_in(v);
            let (b, a) = (c[0].clone(), c[1].clone());
            let cost = if a.is_constant() {
                0
            } else if known_nonzero(&a, &node.atoms) {
                1
            } else {
                2
            };
            let key = (cost, a.num_terms(), e.poly.num_terms(), e.poly.total_degree(), v);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (i, v, a, b)));
            }
        }
    }
    best.map(|(_, x)| x)
}

fn univariate_modulus(eqs: &[MultiPoly], s: Var, atoms: &[MultiPoly]) -> Result<QPoly, String> {
    let mut g = QPoly::zero();
    for e in eqs {
        if let Some(u) = e.to_univariate(s) {
            g = g.gcd(&u);
        }
    }
    if g.is_zero() {
        return Err(format!("no condition on {s}"));
    }
    if g.is_constant() {
        return Err(format!("conditions on {s} have no common root"));
    }
    let mut f = g.squarefree_part().map_err(|e| e.to_string())?;
    for a in atoms {
        if let Some(u) = a.to_univariate(s) {
            if u.is_constant() {
                continue;
            }
            let h = f.gcd(&u);
            if !h.is_constant() {
                f = f.exact_div(&h).unwrap();
            }
        }
    }
    if f.is_constant() {
        return Err(format!("every root of the condition on {s} is degenerate"));
    }
    Ok(f.monic())
}

/// Eliminates every variable but `s` by successive resultants. Variables
/// occurring in a single equation are dropped with it.
fn project(eqs: &[MultiPoly], s: Var, atoms: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut cur: Vec<MultiPoly> = eqs.to_vec();
    loop {
        let vars: BTreeSet<Var> = cur.iter().flat_map(|e| e.vars()).filter(|&v| v != s).collect();
        let Some(&v) = vars.iter().min_by_key(|&&v| {
            let n = cur.iter().filter(|e| e.contains_var(v)).count();
            let d = cur.iter().map(|e| e.degree_in(v)).max().unwrap_or(0);
            (n, d, v)
        }) else {
            return cur.into_iter().filter(|e| e.to_univariate(s).is_some()).collect();
        };
        let (with, mut without): (Vec<MultiPoly>, Vec<MultiPoly>) = cur.into_iter().partition(|e| e.contains_var(v));
        if with.len() > 1 {
            let pi = (0..with.len()).min_by_key(|&i| (with[i].degree_in(v), with[i].num_terms())).unwrap();
            for (j, g) in with.iter().enumerate() {
                if j == pi {
                    continue;
                }
                if let Ok(r) = resultant(&with[pi], g, v) {
                    let r = saturate(r, atoms);
                    if !r.is_zero() && !without.contains(&r) {
                        without.push(r);
                    }
                }
            }
        }
        cur = without;
    }
}
