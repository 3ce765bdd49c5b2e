//! Division algorithm, Buchberger's algorithm with Gebauer-Moeller pair
//! pruning and sugar selection, initial ideals, and the ideal operations
//! (colon, intersection, membership) built on top of them.
//!
//! All computations carry an explicit [`Budget`]; exceeding it is a distinct
//! status, never a wrong answer.

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::Scalar;
use crate::monomial::{minimize_monomials, Monomial};
use crate::order::TermOrder;
use crate::poly::{PolyError, Polynomial};
use crate::vars::VariableSet;

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 1_000_000, max_degree: 60 }
    }
}

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A generator list, optionally remembering the order it was computed under.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    pub gens: Vec<Polynomial>,
    pub order: Option<TermOrder>,
}

impl IdealBasis {
    pub fn new(gens: Vec<Polynomial>) -> IdealBasis {
        IdealBasis { gens: gens.into_iter().filter(|g| !g.is_zero()).collect(), order: None }
    }
}

/// f = sum quotients\[i\] * divisors\[i\] + remainder, with no remainder term
/// divisible by any divisor's leading monomial.
#[derive(Clone, Debug)]
pub struct DivisionResult {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

// --- order-sorted term lists -------------------------------------------------

/// Terms sorted descending under a fixed order. Multiplying by a term
/// preserves sortedness, so reduction steps are linear merges.
#[derive(Clone, Debug)]
struct OPoly {
    terms: Vec<(Monomial, Scalar)>,
}

impl OPoly {
    fn from_poly(p: &Polynomial, order: &TermOrder) -> OPoly {
        let mut terms: Vec<(Monomial, Scalar)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        OPoly { terms }
    }

    fn to_poly(&self, vars: &Arc<VariableSet>) -> Polynomial {
        Polynomial::from_terms(vars, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> &(Monomial, Scalar) {
        &self.terms[0]
    }

    /// self - c * m * other, as a sorted merge.
    fn sub_mul(&self, c: &Scalar, m: &Monomial, other: &OPoly, order: &TermOrder) -> OPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < other.terms.len() {
            let om = other.terms[j].0.mul(m);
            match order.compare(&self.terms[i].0, &om) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((om, other.terms[j].1.mul(c).neg()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = self.terms[i].1.sub(&other.terms[j].1.mul(c));
                    if !s.is_zero() {
                        out.push((om, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        while j < other.terms.len() {
            out.push((other.terms[j].0.mul(m), other.terms[j].1.mul(c).neg()));
            j += 1;
        }
        OPoly { terms: out }
    }

    fn mul_scalar(&self, c: &Scalar) -> OPoly {
        OPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect() }
    }
}

// --- division ---------------------------------------------------------------

/// Multivariate division with the divisors scanned in the given sequence.
/// Deterministic; when the divisors are a Groebner basis the remainder is the
/// unique normal form.
pub fn divide(f: &Polynomial, divisors: &[Polynomial], order: &TermOrder) -> DivisionResult {
    let vars = f.vars().clone();
    let ops: Vec<OPoly> = divisors.iter().map(|g| OPoly::from_poly(g, order)).collect();
    for g in &ops {
        assert!(!g.is_zero(), "zero divisor in division");
    }
    let mut quotients = vec![Polynomial::zero(&vars); divisors.len()];
    let mut remainder = Polynomial::zero(&vars);
    let mut work = OPoly::from_poly(f, order);
    'outer: while !work.is_zero() {
        let (lm, lc) = work.leading().clone();
        for (i, g) in ops.iter().enumerate() {
            let (gm, gc) = g.leading();
            if gm.divides(&lm) {
                let qm = gm.div_into(&lm);
                let qc = lc.div(gc);
                quotients[i] = quotients[i].add(&Polynomial::term(&vars, qm.clone(), qc.clone()));
                work = work.sub_mul(&qc, &qm, g, order);
                continue 'outer;
            }
        }
        // irreducible leading term moves to the remainder
        remainder = remainder.add(&Polynomial::term(&vars, lm, lc));
        work.terms.remove(0);
    }
    DivisionResult { quotients, remainder }
}

/// Remainder-only reduction on the sorted representation.
fn reduce_full(p: OPoly, basis: &[OPoly], order: &TermOrder) -> OPoly {
    let mut rem: Vec<(Monomial, Scalar)> = Vec::new();
    let mut work = p;
    'outer: while !work.is_zero() {
        let (lm, lc) = work.leading().clone();
        for g in basis {
            let (gm, gc) = g.leading();
            if gm.divides(&lm) {
                let qm = gm.div_into(&lm);
                let qc = lc.div(gc);
                work = work.sub_mul(&qc, &qm, g, order);
                continue 'outer;
            }
        }
        rem.push((lm, lc));
        work.terms.remove(0);
    }
    OPoly { terms: rem }
}

fn s_poly_direct(f: &OPoly, g: &OPoly, order: &TermOrder) -> OPoly {
    let (fm, fc) = f.leading();
    let (gm, gc) = g.leading();
    let l = fm.lcm(gm);
    let uf = fm.div_into(&l);
    let ug = gm.div_into(&l);
    let zero = OPoly { terms: Vec::new() };
    let uf_f = zero.sub_mul(&fc.inv().neg(), &uf, f, order); // (1/lc f) * uf * f
    uf_f.sub_mul(&gc.inv(), &ug, g, order)
}

// --- Buchberger ---------------------------------------------------------------

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Certificate of a failed S-pair test.
#[derive(Clone, Debug)]
pub struct SPairFailure {
    pub i: usize,
    pub j: usize,
    pub remainder_lm: Monomial,
}

#[derive(Clone, Debug)]
pub enum GbCheck {
    Pass,
    Fail(SPairFailure),
}

/// Buchberger with normal selection (smallest lcm), sugar tie-break, and
/// Gebauer-Moeller pair elimination. Returns the unique reduced basis,
/// sorted by increasing leading monomial, with monic generators.
pub fn buchberger(
    gens: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let nonzero: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let vars = nonzero[0].vars().clone();
    let mut basis: Vec<OPoly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let add_element = |basis: &mut Vec<OPoly>,
                           sugars: &mut Vec<u32>,
                           pairs: &mut Vec<Pair>,
                           h: OPoly,
                           sugar: u32| {
        let t = basis.len();
        let hm = h.leading().0.clone();
        // Gebauer-Moeller update of the pending pair set
        let mut fresh: Vec<Pair> = (0..t)
            .map(|i| {
                let im = basis[i].leading().0.clone();
                let lcm = im.lcm(&hm);
                let s = (sugars[i] + lcm.degree() - im.degree())
                    .max(sugar + lcm.degree() - hm.degree());
                Pair { i, j: t, lcm, sugar: s }
            })
            .collect();
        // M: drop pairs whose lcm is strictly divisible by another new lcm
        let mut keep = vec![true; fresh.len()];
        for a in 0..fresh.len() {
            for b in 0..fresh.len() {
                if a != b
                    && keep[a]
                    && keep[b]
                    && fresh[b].lcm.divides(&fresh[a].lcm)
                    && fresh[b].lcm != fresh[a].lcm
                {
                    keep[a] = false;
                }
            }
        }
        // F: among equal lcms keep the first
        for a in 0..fresh.len() {
            if !keep[a] {
                continue;
            }
            for b in (a + 1)..fresh.len() {
                if keep[b] && fresh[a].lcm == fresh[b].lcm {
                    keep[b] = false;
                }
            }
        }
        // B: drop coprime leading monomials
        for (a, pair) in fresh.iter().enumerate() {
            if keep[a] && basis[pair.i].leading().0.coprime(&hm) {
                keep[a] = false;
            }
        }
        let mut kept: Vec<Pair> = fresh
            .drain(..)
            .zip(keep)
            .filter_map(|(p, k)| if k { Some(p) } else { None })
            .collect();
        // chain criterion on the old pairs
        pairs.retain(|p| {
            let div = hm.divides(&p.lcm);
            if !div {
                return true;
            }
            let li = basis[p.i].leading().0.lcm(&hm);
            let lj = basis[p.j].leading().0.lcm(&hm);
            !(li != p.lcm && lj != p.lcm)
        });
        pairs.append(&mut kept);
        basis.push(h);
        sugars.push(sugar);
    };

    for g in nonzero {
        let op = OPoly::from_poly(g, order);
        let sugar = op.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0);
        let lc = op.leading().1.clone();
        add_element(&mut basis, &mut sugars, &mut pairs, op.mul_scalar(&lc.inv()), sugar);
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm under the order, sugar first
        let mut best = 0;
        for k in 1..pairs.len() {
            let a = &pairs[k];
            let b = &pairs[best];
            let c = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| order.compare(&a.lcm, &b.lcm))
                .then_with(|| a.i.cmp(&b.i))
                .then_with(|| a.j.cmp(&b.j));
            if c == Ordering::Less {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        processed += 1;
        if processed > budget.max_pairs {
            return Err(GroebnerError::Budget(format!(
                "more than {} S-pairs processed",
                budget.max_pairs
            )));
        }
        if pair.lcm.degree() > budget.max_degree {
            return Err(GroebnerError::Budget(format!(
                "S-pair lcm degree {} exceeds cap {}",
                pair.lcm.degree(),
                budget.max_degree
            )));
        }
        let s = s_poly_direct(&basis[pair.i], &basis[pair.j], order);
        let red = reduce_full(s, &basis, order);
        if !red.is_zero() {
            let lc = red.leading().1.clone();
            add_element(&mut basis, &mut sugars, &mut pairs, red.mul_scalar(&lc.inv()), pair.sugar);
        }
    }

    // minimize: drop generators whose lm is divisible by another's
    let lms: Vec<Monomial> = basis.iter().map(|g| g.leading().0.clone()).collect();
    let mut alive: Vec<bool> = vec![true; basis.len()];
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            if a != b && alive[a] && alive[b] && lms[b].divides(&lms[a]) && lms[a] != lms[b] {
                alive[a] = false;
            }
        }
    }
    for a in 0..basis.len() {
        if !alive[a] {
            continue;
        }
        for b in (a + 1)..basis.len() {
            if alive[b] && lms[a] == lms[b] {
                alive[b] = false;
            }
        }
    }
    let minimal: Vec<OPoly> = basis
        .into_iter()
        .zip(alive)
        .filter_map(|(g, k)| if k { Some(g) } else { None })
        .collect();
    // tail-reduce every element against the others
    let mut reduced: Vec<OPoly> = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<OPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, g)| g.clone())
            .collect();
        let r = reduce_full(minimal[k].clone(), &others, order);
        let lc = r.leading().1.clone();
        reduced.push(r.mul_scalar(&lc.inv()));
    }
    reduced.sort_by(|a, b| order.compare(&a.leading().0, &b.leading().0));
    Ok(reduced.into_iter().map(|g| g.to_poly(&vars)).collect())
}

/// Check Buchberger's criterion for a given generator set: every S-pair
/// (coprime leading monomials skipped) must reduce to zero.
pub fn is_groebner(
    gens: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<GbCheck, GroebnerError> {
    let ops: Vec<OPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OPoly::from_poly(g, order))
        .collect();
    let mut todo: Vec<(usize, usize)> = Vec::new();
    for i in 0..ops.len() {
        for j in (i + 1)..ops.len() {
            let (im, _) = ops[i].leading();
            let (jm, _) = ops[j].leading();
            if im.coprime(jm) {
                continue;
            }
            if im.lcm(jm).degree() > budget.max_degree {
                return Err(GroebnerError::Budget(format!(
                    "S-pair lcm degree exceeds cap {}",
                    budget.max_degree
                )));
            }
            todo.push((i, j));
        }
    }
    if todo.len() > budget.max_pairs {
        return Err(GroebnerError::Budget(format!("{} pairs exceed budget", todo.len())));
    }
    let failures: Vec<SPairFailure> = todo
        .par_iter()
        .filter_map(|&(i, j)| {
            let s = s_poly_direct(&ops[i], &ops[j], order);
            let r = reduce_full(s, &ops, order);
            if r.is_zero() {
                None
            } else {
                Some(SPairFailure { i, j, remainder_lm: r.leading().0.clone() })
            }
        })
        .collect();
    match failures.into_iter().min_by_key(|f| (f.i, f.j)) {
        None => Ok(GbCheck::Pass),
        Some(f) => Ok(GbCheck::Fail(f)),
    }
}

/// Minimal monomial generators of the initial ideal.
pub fn initial_ideal(
    gens: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<Vec<Monomial>, GroebnerError> {
    let gb = buchberger(gens, order, budget)?;
    let lms: Vec<Monomial> = gb
        .iter()
        .map(|g| g.leading_monomial(order))
        .collect::<Result<_, _>>()?;
    Ok(minimize_monomials(&lms))
}

/// Normal form with respect to a (not necessarily Groebner) generator list.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &TermOrder) -> Polynomial {
    divide(f, basis, order).remainder
}

/// Ideal membership against a certified Groebner basis.
pub fn reduces_to_zero(f: &Polynomial, gb: &[Polynomial], order: &TermOrder) -> bool {
    normal_form(f, gb, order).is_zero()
}

/// Mutual-inclusion ideal equality via Groebner bases.
pub fn ideal_eq(
    a: &[Polynomial],
    b: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<bool, GroebnerError> {
    let ga = buchberger(a, order, budget)?;
    let gb = buchberger(b, order, budget)?;
    Ok(a.iter().all(|f| reduces_to_zero(f, &gb, order))
        && b.iter().all(|f| reduces_to_zero(f, &ga, order)))
}

/// Generators of the intersection of two ideals, by eliminating a tag
/// variable from tag*I + (1-tag)*J.
pub fn intersect(
    i_gens: &[Polynomial],
    j_gens: &[Polynomial],
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let vars = i_gens
        .iter()
        .chain(j_gens)
        .next()
        .expect("intersect needs at least one generator")
        .vars()
        .clone();
    let field = i_gens
        .iter()
        .chain(j_gens)
        .find_map(|g| g.field_kind())
        .expect("intersect of zero ideals");
    let (ext, tag) = vars.with_tag();
    let t = Polynomial::var(&ext, tag, field);
    let one_minus_t = Polynomial::one(&ext, field).sub(&t);
    let mut gens: Vec<Polynomial> = Vec::new();
    for g in i_gens {
        gens.push(g.map_to(&ext)?.mul(&t));
    }
    for g in j_gens {
        gens.push(g.map_to(&ext)?.mul(&one_minus_t));
    }
    let order = TermOrder::elimination(ext.len(), &[tag]);
    let gb = buchberger(&gens, &order, budget)?;
    let mut out = Vec::new();
    for g in gb {
        let uses_tag = g.terms().any(|(m, _)| m.exp(tag) > 0);
        if !uses_tag {
            out.push(g.map_to(&vars)?);
        }
    }
    Ok(out)
}

/// Generators of I : f = { g : g f in I }, via intersection with (f).
pub fn colon(
    i_gens: &[Polynomial],
    f: &Polynomial,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    assert!(!f.is_zero(), "colon by zero");
    let inter = intersect(i_gens, std::slice::from_ref(f), budget)?;
    let order = TermOrder::grevlex(f.vars().len());
    let mut out = Vec::new();
    for h in inter {
        let d = divide(&h, std::slice::from_ref(f), &order);
        assert!(d.remainder.is_zero(), "intersection element not divisible by f");
        out.push(d.quotients.into_iter().next().unwrap());
    }
    out.retain(|g| !g.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;

    fn pq(s: &str, vars: &Arc<VariableSet>) -> Polynomial {
        Polynomial::parse(s, vars, FieldKind::Q).unwrap()
    }

    #[test]
    fn divide_by_one_gives_zero_remainder() {
        let vars = VariableSet::xy();
        let f = pq("x^3 + 2*x*y - 7", &vars);
        let one = Polynomial::one(&vars, FieldKind::Q);
        let d = divide(&f, &[one], &TermOrder::grevlex(2));
        assert!(d.remainder.is_zero());
        assert_eq!(d.quotients[0], f);
    }

    #[test]
    fn divide_hand_simulated_lex() {
        // x^2 y against {x^2 - y, y^2 - 1} under lex x > y:
        // x^2 y -> y^2 (quotient y) -> 1 (quotient 1)
        let vars = VariableSet::xy();
        let f = pq("x^2*y", &vars);
        let g1 = pq("x^2 - y", &vars);
        let g2 = pq("y^2 - 1", &vars);
        let order = TermOrder::lex(2);
        let d = divide(&f, &[g1.clone(), g2.clone()], &order);
        assert_eq!(d.remainder, pq("1", &vars));
        assert_eq!(d.quotients[0], pq("y", &vars));
        assert_eq!(d.quotients[1], pq("1", &vars));
        // the division identity holds
        let back = d.quotients[0]
            .mul(&g1)
            .add(&d.quotients[1].mul(&g2))
            .add(&d.remainder);
        assert_eq!(back, f);
    }

    #[test]
    fn buchberger_coprime_is_identity() {
        let vars = VariableSet::xy();
        let gens = vec![pq("x", &vars), pq("y^2", &vars)];
        let gb = buchberger(&gens, &TermOrder::grevlex(2), &Budget::default()).unwrap();
        assert_eq!(gb, gens);
    }

    #[test]
    fn buchberger_lex_example() {
        let vars = VariableSet::xy();
        let gens = vec![pq("x^2 - y", &vars), pq("y^2 - 1", &vars)];
        let gb = buchberger(&gens, &TermOrder::lex(2), &Budget::default()).unwrap();
        assert!(gb.contains(&pq("y^2 - 1", &vars)));
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn buchberger_principal() {
        let vars = VariableSet::xy();
        let gens = vec![pq("2*x^2 - 2*y", &vars)];
        let gb = buchberger(&gens, &TermOrder::grevlex(2), &Budget::default()).unwrap();
        assert_eq!(gb, vec![pq("x^2 - y", &vars)]);
    }

    #[test]
    fn is_groebner_detects_failure() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let gens = vec![pq("x + y", &vars), pq("x", &vars)];
        match is_groebner(&gens, &order, &Budget::default()).unwrap() {
            GbCheck::Fail(f) => {
                assert_eq!((f.i, f.j), (0, 1));
            }
            GbCheck::Pass => panic!("{{x+y, x}} is not a Groebner basis"),
        }
        let single = vec![pq("x^2 + y", &vars)];
        assert!(matches!(
            is_groebner(&single, &order, &Budget::default()).unwrap(),
            GbCheck::Pass
        ));
    }

    #[test]
    fn initial_ideal_simple() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let init = initial_ideal(&[pq("x + y", &vars)], &order, &Budget::default()).unwrap();
        assert_eq!(init, vec![Monomial(vec![1, 0])]);
    }

    #[test]
    fn colon_examples() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let budget = Budget::default();
        // (x^2, xy) : x = (x, y)
        let i = vec![pq("x^2", &vars), pq("x*y", &vars)];
        let c = colon(&i, &pq("x", &vars), &budget).unwrap();
        assert!(ideal_eq(&c, &[pq("x", &vars), pq("y", &vars)], &order, &budget).unwrap());
        // (x, y^3) : y = (x, y^2)
        let i = vec![pq("x", &vars), pq("y^3", &vars)];
        let c = colon(&i, &pq("y", &vars), &budget).unwrap();
        assert!(ideal_eq(&c, &[pq("x", &vars), pq("y^2", &vars)], &order, &budget).unwrap());
        // I : 1 = I
        let i = vec![pq("x^2 - y", &vars)];
        let c = colon(&i, &pq("1", &vars), &budget).unwrap();
        assert!(ideal_eq(&c, &i, &order, &budget).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let budget = Budget::default();
        let inter = intersect(&[pq("x", &vars)], &[pq("y", &vars)], &budget).unwrap();
        assert!(ideal_eq(&inter, &[pq("x*y", &vars)], &order, &budget).unwrap());
        // (x, y^2) cap (x^2, y) = (x^2, xy, y^2)
        let a = vec![pq("x", &vars), pq("y^2", &vars)];
        let b = vec![pq("x^2", &vars), pq("y", &vars)];
        let inter = intersect(&a, &b, &budget).unwrap();
        let expect = vec![pq("x^2", &vars), pq("x*y", &vars), pq("y^2", &vars)];
        assert!(ideal_eq(&inter, &expect, &order, &budget).unwrap());
        // I cap I = I
        let i = vec![pq("x + y^2", &vars), pq("x*y", &vars)];
        let inter = intersect(&i, &i, &budget).unwrap();
        assert!(ideal_eq(&inter, &i, &order, &budget).unwrap());
    }
}
