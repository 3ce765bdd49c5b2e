//! Hilbert functions and series of homogeneous ideals.
//!
//! The series of a monomial ideal is computed by pivot recursion (split on a
//! most-shared variable); the general case reduces to the initial ideal by
//! Macaulay's principle. Codimension and multiplicity are read off the
//! numerator after clearing (1-t) factors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::groebner::{initial_ideal, Budget, GroebnerError};
use crate::monomial::{minimize_monomials, Monomial};
use crate::order::TermOrder;
use crate::poly::Polynomial;

#[derive(Debug, Error)]
pub enum HilbertError {
    #[error("ideal is not homogeneous for the standard grading")]
    NonHomogeneous,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Graded data of R/I: dimension function up to a cutoff, the numerator of
/// the series over (1-t)^nvars, and the invariants extracted from it.
#[derive(Clone, Debug)]
pub struct HilbertData {
    pub nvars: usize,
    /// numerator coefficients, index = degree
    pub numerator: Vec<BigInt>,
    /// dim_k (R/I)_d for d = 0..=cutoff
    pub dims: Vec<BigInt>,
    pub codim: usize,
    pub multiplicity: BigInt,
}

// polynomial-in-t helpers on coefficient vectors

fn poly_trim(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_trim(&mut out);
    out
}

/// a * t^s
fn poly_shift(a: &[BigInt], s: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); s];
    out.extend_from_slice(a);
    out
}

/// a * (1 - t^d)
fn poly_mul_one_minus_td(a: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = a.to_vec();
    out.resize(a.len() + d, BigInt::zero());
    for (i, c) in a.iter().enumerate() {
        out[i + d] -= c;
    }
    poly_trim(&mut out);
    out
}

fn poly_eval_at_one(a: &[BigInt]) -> BigInt {
    a.iter().sum()
}

/// divide by (1 - t); caller guarantees divisibility (value 0 at t=1)
fn poly_div_one_minus_t(a: &[BigInt]) -> Vec<BigInt> {
    // q(t) = a(t)/(1-t): q_i = a_0 + a_1 + ... + a_i
    let mut out = Vec::with_capacity(a.len());
    let mut acc = BigInt::zero();
    for c in a {
        acc += c;
        out.push(acc.clone());
    }
    poly_trim(&mut out);
    out
}

/// Numerator of the Hilbert series of R/(gens) over (1-t)^nvars.
pub fn monomial_numerator(gens: &[Monomial]) -> Vec<BigInt> {
    let min = minimize_monomials(gens);
    let mut memo: HashMap<Vec<Monomial>, Vec<BigInt>> = HashMap::new();
    numerator_rec(&min, &mut memo)
}

fn numerator_rec(
    gens: &[Monomial],
    memo: &mut HashMap<Vec<Monomial>, Vec<BigInt>>,
) -> Vec<BigInt> {
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new(); // unit ideal
    }
    if let Some(hit) = memo.get(gens) {
        return hit.clone();
    }
    // disjoint supports form a regular sequence
    let disjoint = (0..gens.len()).all(|a| {
        ((a + 1)..gens.len()).all(|b| gens[a].coprime(&gens[b]))
    });
    let result = if disjoint {
        let mut num = vec![BigInt::one()];
        for g in gens {
            num = poly_mul_one_minus_td(&num, g.degree() as usize);
        }
        num
    } else {
        // pivot: variable shared by the most generators
        let nvars = gens[0].nvars();
        let mut counts = vec![0usize; nvars];
        for g in gens {
            for k in 0..nvars {
                if g.exp(k) > 0 {
                    counts[k] += 1;
                }
            }
        }
        let pivot = (0..nvars).max_by_key(|&k| counts[k]).unwrap();
        debug_assert!(counts[pivot] >= 2);
        // I + (x_pivot)
        let mut plus: Vec<Monomial> = gens
            .iter()
            .filter(|g| g.exp(pivot) == 0)
            .cloned()
            .collect();
        plus.push(Monomial::var(nvars, pivot));
        let plus = minimize_monomials(&plus);
        // I : x_pivot
        let quot: Vec<Monomial> = gens
            .iter()
            .map(|g| {
                let mut e = g.clone();
                if e.0[pivot] > 0 {
                    e.0[pivot] -= 1;
                }
                e
            })
            .collect();
        let quot = minimize_monomials(&quot);
        let a = numerator_rec(&plus, memo);
        let b = numerator_rec(&quot, memo);
        poly_add(&a, &poly_shift(&b, 1))
    };
    memo.insert(gens.to_vec(), result.clone());
    result
}

/// Hilbert data for a monomial ideal.
pub fn hilbert_of_monomial(gens: &[Monomial], nvars: usize, cutoff: usize) -> HilbertData {
    let numerator = monomial_numerator(gens);
    // dims: numerator * sum_i C(nvars-1+i, nvars-1) t^i
    let mut binom = Vec::with_capacity(cutoff + 1);
    let mut acc = BigInt::one();
    for i in 0..=cutoff {
        if i > 0 {
            acc = acc * BigInt::from(nvars - 1 + i) / BigInt::from(i);
        }
        binom.push(acc.clone());
    }
    let mut dims = vec![BigInt::zero(); cutoff + 1];
    for (i, c) in numerator.iter().enumerate() {
        if i > cutoff {
            break;
        }
        for d in i..=cutoff {
            dims[d] += c * &binom[d - i];
        }
    }
    // strip (1-t)^codim from the numerator
    let mut reduced = numerator.clone();
    let mut codim = 0usize;
    while !reduced.is_empty() && poly_eval_at_one(&reduced).is_zero() {
        reduced = poly_div_one_minus_t(&reduced);
        codim += 1;
    }
    let multiplicity = if reduced.is_empty() {
        BigInt::zero()
    } else {
        poly_eval_at_one(&reduced)
    };
    HilbertData { nvars, numerator, dims, codim, multiplicity }
}

/// Hilbert data of R/I via the initial ideal. Requires standard-graded
/// homogeneous generators.
pub fn hilbert(
    gens: &[Polynomial],
    order: &TermOrder,
    cutoff: usize,
    budget: &Budget,
) -> Result<HilbertData, HilbertError> {
    for g in gens {
        if !g.is_homogeneous() {
            return Err(HilbertError::NonHomogeneous);
        }
    }
    let nvars = order.nvars();
    let init = initial_ideal(gens, order, budget)?;
    Ok(hilbert_of_monomial(&init, nvars, cutoff))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

/// Colength of a monomial ideal: the number of standard monomials.
pub fn colength_of_monomial(gens: &[Monomial], nvars: usize) -> Colength {
    let min = minimize_monomials(gens);
    if min.iter().any(|g| g.is_one()) {
        return Colength::Finite(0);
    }
    // a pure power of every variable must be present
    let mut bound = vec![None::<u32>; nvars];
    for g in &min {
        let sup = g.support();
        if sup.len() == 1 {
            let k = sup[0];
            let e = g.exp(k);
            bound[k] = Some(bound[k].map_or(e, |b: u32| b.min(e)));
        }
    }
    if bound.iter().any(|b| b.is_none()) {
        return Colength::Infinite;
    }
    let bound: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();
    // count exponent vectors below the staircase
    fn rec(k: usize, cur: &mut Monomial, bound: &[u32], min: &[Monomial], count: &mut u64) {
        if k == bound.len() {
            if !min.iter().any(|g| g.divides(cur)) {
                *count += 1;
            }
            return;
        }
        for e in 0..bound[k] {
            cur.0[k] = e;
            rec(k + 1, cur, bound, min, count);
        }
        cur.0[k] = 0;
    }
    let mut count = 0u64;
    let mut cur = Monomial::one(nvars);
    rec(0, &mut cur, &bound, &min, &mut count);
    Colength::Finite(count)
}

/// Colength of an arbitrary ideal via its initial ideal.
pub fn colength(
    gens: &[Polynomial],
    order: &TermOrder,
    budget: &Budget,
) -> Result<Colength, GroebnerError> {
    let init = initial_ideal(gens, order, budget)?;
    Ok(colength_of_monomial(&init, order.nvars()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;
    use crate::vars::VariableSet;
    use std::sync::Arc;

    fn pq(s: &str, vars: &Arc<VariableSet>) -> Polynomial {
        Polynomial::parse(s, vars, FieldKind::Q).unwrap()
    }

    #[test]
    fn zero_ideal_full_ring() {
        let h = hilbert_of_monomial(&[], 3, 5);
        assert_eq!(h.numerator, vec![BigInt::one()]);
        // dims are C(2+d, 2)
        let expect: Vec<BigInt> = [1, 3, 6, 10, 15, 21].map(BigInt::from).to_vec();
        assert_eq!(h.dims, expect);
        assert_eq!(h.codim, 0);
        assert_eq!(h.multiplicity, BigInt::one());
    }

    #[test]
    fn powers_of_the_maximal_ideal() {
        // (x,y)^3 in k[x,y]: colength 6
        let gens = vec![
            Monomial(vec![3, 0]),
            Monomial(vec![2, 1]),
            Monomial(vec![1, 2]),
            Monomial(vec![0, 3]),
        ];
        assert_eq!(colength_of_monomial(&gens, 2), Colength::Finite(6));
        let h = hilbert_of_monomial(&gens, 2, 6);
        assert_eq!(h.codim, 2);
        // dims 1,2,3,0,0,...
        assert_eq!(h.dims[..4], [1, 2, 3, 0].map(BigInt::from));
    }

    #[test]
    fn colength_examples() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let b = Budget::default();
        let i = vec![pq("x", &vars), pq("y^2", &vars)];
        assert_eq!(colength(&i, &order, &b).unwrap(), Colength::Finite(2));
        let i = vec![pq("x", &vars)];
        assert_eq!(colength(&i, &order, &b).unwrap(), Colength::Infinite);
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let i = vec![pq("x^2 - y", &vars)];
        assert!(matches!(
            hilbert(&i, &order, 4, &Budget::default()),
            Err(HilbertError::NonHomogeneous)
        ));
    }

    #[test]
    fn macaulay_invariance_small() {
        // hilbert(I) computed from a GB initial ideal agrees with direct
        // monomial data for an already-monomial ideal
        let vars = VariableSet::xy();
        let order = TermOrder::grevlex(2);
        let b = Budget::default();
        let i = vec![pq("x^2 + x*y", &vars), pq("y^3", &vars)];
        let h = hilbert(&i, &order, 8, &b).unwrap();
        assert_eq!(h.codim, 2);
        // colength matches the dimension count
        let total: BigInt = h.dims.iter().sum();
        match colength(&i, &order, &b).unwrap() {
            Colength::Finite(c) => assert_eq!(BigInt::from(c), total),
            _ => panic!("expected finite"),
        }
    }
}
