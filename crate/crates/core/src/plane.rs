//! Truncated linear-algebra models of the local ring at the origin of the
//! plane, shared by the tangent-space and deformation computations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::field::{FieldKind, Scalar};
use crate::groebner::{buchberger, reduces_to_zero, Budget, GroebnerError};
use crate::linalg::RowSpace;
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::vars::VariableSet;

pub fn monomial_poly(vars: &Arc<VariableSet>, a: u32, b: u32) -> Polynomial {
    Polynomial::term(vars, Monomial(vec![a, b]), FieldKind::Q.one())
}

/// Monomial basis x^a y^b with a + b < d, ordered by (degree, a); the
/// ordering makes echelon pivots detect initial forms.
pub struct Trunc {
    pub d: u32,
    index: HashMap<(u32, u32), usize>,
    pub monos: Vec<(u32, u32)>,
}

impl Trunc {
    pub fn new(d: u32) -> Trunc {
        let mut monos = Vec::new();
        for deg in 0..d {
            for a in 0..=deg {
                monos.push((a, deg - a));
            }
        }
        let index = monos.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        Trunc { d, index, monos }
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn vector_of(&self, p: &Polynomial) -> Vec<Scalar> {
        let mut v = vec![FieldKind::Q.zero(); self.dim()];
        for (m, c) in p.terms() {
            let key = (m.exp(0), m.exp(1));
            if key.0 + key.1 < self.d {
                v[self.index[&key]] = c.clone();
            }
        }
        v
    }

    pub fn poly_of(&self, vars: &Arc<VariableSet>, v: &[Scalar]) -> Polynomial {
        Polynomial::from_terms(
            vars,
            v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                let (a, b) = self.monos[k];
                (Monomial(vec![a, b]), c.clone())
            }),
        )
    }

    /// Multiplication by x (var = 0) or y (var = 1), truncated.
    pub fn shift(&self, v: &[Scalar], var: usize) -> Vec<Scalar> {
        let mut out = vec![FieldKind::Q.zero(); self.dim()];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = self.monos[k];
            let t = if var == 0 { (a + 1, b) } else { (a, b + 1) };
            if t.0 + t.1 < self.d {
                out[self.index[&t]] = out[self.index[&t]].add(c);
            }
        }
        out
    }

    pub fn degree_of_col(&self, k: usize) -> u32 {
        let (a, b) = self.monos[k];
        a + b
    }
}

/// Row space spanned by all monomial multiples (of degree at least
/// `min_mult_degree`) of the generators, inside the truncation.
pub fn ideal_span(tr: &Trunc, gens: &[Polynomial], min_mult_degree: u32) -> RowSpace {
    let vars = gens[0].vars().clone();
    let mut space = RowSpace::empty(tr.dim(), FieldKind::Q);
    for g in gens {
        for &(a, b) in &tr.monos {
            if a + b < min_mult_degree {
                continue;
            }
            let mult = monomial_poly(&vars, a, b).mul(g);
            space.insert(tr.vector_of(&mult));
        }
    }
    space
}

/// An ideal of finite colength c is primary to the origin iff it contains
/// every monomial of degree c.
pub fn is_m_primary(
    gens: &[Polynomial],
    colength: u64,
    budget: &Budget,
) -> Result<bool, GroebnerError> {
    let vars = gens[0].vars().clone();
    let order = TermOrder::grevlex(2);
    let gb = buchberger(gens, &order, budget)?;
    for a in 0..=colength {
        let m = monomial_poly(&vars, a as u32, (colength - a) as u32);
        if !reduces_to_zero(&m, &gb, &order) {
            return Ok(false);
        }
    }
    Ok(true)
}
