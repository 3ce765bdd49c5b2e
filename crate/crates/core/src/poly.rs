//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are stored in a canonical map keyed by the structural order on
//! exponent vectors, so equal polynomials are structurally equal; zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::field::{FieldKind, Scalar};
use crate::monomial::Monomial;
use crate::order::TermOrder;
use crate::vars::{VarName, VariableSet};

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
    #[error("variable {0} is missing from the target ring")]
    MissingVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Bidegree of a polynomial under a fixed pair of weight functionals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bidegree {
    /// The zero polynomial is bihomogeneous of every degree.
    Zero,
    /// Bihomogeneous of the given bidegree.
    Of(i64, i64),
    /// Not bihomogeneous.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<VariableSet>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(vars: &Arc<VariableSet>) -> Polynomial {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<VariableSet>, c: Scalar) -> Polynomial {
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VariableSet>, field: FieldKind) -> Polynomial {
        Polynomial::constant(vars, field.one())
    }

    pub fn var(vars: &Arc<VariableSet>, k: usize, field: FieldKind) -> Polynomial {
        Polynomial::term(vars, Monomial::var(vars.len(), k), field.one())
    }

    pub fn var_named(vars: &Arc<VariableSet>, n: VarName, field: FieldKind) -> Polynomial {
        let k = vars.position(n).expect("variable not in ring");
        Polynomial::var(vars, k, field)
    }

    pub fn term(vars: &Arc<VariableSet>, m: Monomial, c: Scalar) -> Polynomial {
        assert_eq!(m.nvars(), vars.len());
        let mut p = Polynomial::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        vars: &Arc<VariableSet>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Polynomial {
        let mut p = Polynomial::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Standard-graded homogeneity.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn is_homogeneous_weighted(&self, w: &[i64]) -> bool {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.vars.as_ref() != other.vars.as_ref() {
            return Err(PolyError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other).expect("ring mismatch in add");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_ring(other).expect("ring mismatch in mul");
        let mut out = Polynomial::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul(c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m0, a)| (m0.mul(m), a.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let field = self.field_kind().unwrap_or(FieldKind::Q);
        let mut acc = Polynomial::one(&self.vars, field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The field of the coefficients, if there are any.
    pub fn field_kind(&self) -> Option<FieldKind> {
        self.terms.values().next().map(|c| c.kind())
    }

    /// Order-maximal term.
    pub fn leading_term(&self, order: &TermOrder) -> Result<(Monomial, Scalar), PolyError> {
        let mut best: Option<&Monomial> = None;
        for m in self.terms.keys() {
            best = Some(match best {
                None => m,
                Some(b) => order.max(b, m),
            });
        }
        match best {
            None => Err(PolyError::ZeroPolynomial),
            Some(m) => Ok((m.clone(), self.terms[m].clone())),
        }
    }

    pub fn leading_monomial(&self, order: &TermOrder) -> Result<Monomial, PolyError> {
        Ok(self.leading_term(order)?.0)
    }

    /// Bidegree under the given pair of weight functionals.
    pub fn bidegree(&self, deg1: &[i64], deg2: &[i64]) -> Bidegree {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Bidegree::Zero,
            Some(m) => m,
        };
        let d = (first.weighted_degree(deg1), first.weighted_degree(deg2));
        for m in it {
            if (m.weighted_degree(deg1), m.weighted_degree(deg2)) != d {
                return Bidegree::Mixed;
            }
        }
        Bidegree::Of(d.0, d.1)
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, k: usize, value: &Polynomial) -> Polynomial {
        assert_eq!(self.vars.as_ref(), value.vars().as_ref());
        let field = match self.field_kind() {
            None => return Polynomial::zero(&self.vars),
            Some(f) => f,
        };
        // cache powers of the replacement
        let max_e = self.terms.keys().map(|m| m.exp(k)).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(max_e as usize + 1);
        pows.push(Polynomial::one(&self.vars, field));
        for e in 1..=max_e {
            let prev = pows[(e - 1) as usize].clone();
            pows.push(prev.mul(value));
        }
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exp(k);
            let mut rest = m.clone();
            rest.0[k] = 0;
            let part = pows[e as usize].mul_term(&rest, c);
            out = out.add(&part);
        }
        out
    }

    pub fn substitute_scalar(&self, k: usize, value: &Scalar) -> Polynomial {
        let v = Polynomial::constant(&self.vars, value.clone());
        self.substitute(k, &v)
    }

    /// Re-express over another variable set, matching variables by name.
    /// Fails if a variable with a nonzero exponent has no counterpart.
    pub fn map_to(&self, target: &Arc<VariableSet>) -> Result<Polynomial, PolyError> {
        let mut table: Vec<Option<usize>> = Vec::with_capacity(self.vars.len());
        for &n in self.vars.names() {
            table.push(target.position(n));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (k, &exp) in m.0.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                match table[k] {
                    Some(k2) => e[k2] += exp,
                    None => {
                        return Err(PolyError::MissingVariable(
                            self.vars.name(k).to_string(),
                        ))
                    }
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self, order: &TermOrder) -> Polynomial {
        match self.leading_term(order) {
            Err(_) => self.clone(),
            Ok((_, lc)) => self.mul_scalar(&lc.inv()),
        }
    }

    pub fn parse(
        input: &str,
        vars: &Arc<VariableSet>,
        field: FieldKind,
    ) -> Result<Polynomial, PolyError> {
        Parser { input: input.as_bytes(), pos: 0, vars, field }.parse_polynomial(input)
    }
}

// ---------------------------------------------------------------------------
// Text grammar
//
//   polynomial = ['-'] term (('+'|'-') term)*
//   term       = coef ['*' factors] | factors
//   factors    = factor ('*' factor)*
//   factor     = varname ['^' uint]
//   coef       = int | int '/' int
//
// Whitespace is insignificant. Display output re-parses bit-exactly.
// ---------------------------------------------------------------------------

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    vars: &'a Arc<VariableSet>,
    field: FieldKind,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn parse_polynomial(&mut self, raw: &str) -> Result<Polynomial, PolyError> {
        let _ = raw;
        let mut out = Polynomial::zero(self.vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(_) => false,
            None => return self.err("empty input"),
        };
        loop {
            let (m, c) = self.parse_term()?;
            let c = if sign { c.neg() } else { c };
            out.add_term(m, c);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = true;
                }
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(Monomial, Scalar), PolyError> {
        let mut coef = self.field.one();
        let mut mono = Monomial::one(self.vars.len());
        if let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                coef = self.parse_coef()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                } else {
                    return Ok((mono, coef));
                }
            }
        }
        loop {
            let (k, e) = self.parse_factor()?;
            mono.0[k] += e;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((mono, coef))
    }

    fn parse_coef(&mut self) -> Result<Scalar, PolyError> {
        let num = self.parse_uint_big()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.parse_uint_big()?;
            if den == BigInt::from(0) {
                return self.err("zero denominator");
            }
            Ok(self.field.from_ratio(num, den))
        } else {
            Ok(self.field.from_ratio(num, BigInt::from(1)))
        }
    }

    fn parse_uint_big(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn parse_factor(&mut self) -> Result<(usize, u32), PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len()
            && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a variable name");
        }
        let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let var = match VarName::parse(name) {
            Some(v) => v,
            None => {
                self.pos = start;
                return self.err(format!("unknown variable '{}'", name));
            }
        };
        let k = match self.vars.position(var) {
            Some(k) => k,
            None => {
                self.pos = start;
                return self.err(format!("variable '{}' not in this ring", name));
            }
        };
        let mut e = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let big = self.parse_uint_big()?;
            e = match big.try_into() {
                Ok(v) => v,
                Err(_) => return self.err("exponent too large"),
            };
        }
        Ok((k, e))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // descending structural order: stable, ring-independent
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = match c {
                Scalar::Q(r) => {
                    if r < &num_rational::BigRational::from_integer(0.into()) {
                        (true, Scalar::Q(-r))
                    } else {
                        (false, c.clone())
                    }
                }
                Scalar::Fp { .. } => (false, c.clone()),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coef_is_one = abs.is_one();
            if !coef_is_one || m.is_one() {
                write!(f, "{}", abs)?;
            }
            let mut first_factor = coef_is_one && !m.is_one();
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_factor {
                    write!(f, "*")?;
                } else {
                    first_factor = false;
                }
                write!(f, "{}", self.vars.name(k))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(s: &str, vars: &Arc<VariableSet>) -> Polynomial {
        Polynomial::parse(s, vars, FieldKind::Q).unwrap()
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let vars = VariableSet::xyz();
        for s in [
            "x", "x + y", "x^2*y - z", "2*x - 1/3*y^4", "-x + z", "5", "0",
            "x*y*z + x*y + 1",
        ] {
            let p = pq(s, &vars);
            let shown = p.to_string();
            let again = pq(&shown, &vars);
            assert_eq!(p, again, "roundtrip failed for {s}");
            assert_eq!(shown, pq(&shown, &vars).to_string());
        }
    }

    #[test]
    fn arithmetic_identities() {
        let vars = VariableSet::xyz();
        let f = pq("x + 2*y - z^2", &vars);
        assert!(f.add(&f.neg()).is_zero());
        let lhs = pq("x + y", &vars).mul(&pq("x - y", &vars));
        assert_eq!(lhs, pq("x^2 - y^2", &vars));
    }

    #[test]
    fn substitution() {
        let vars = VariableSet::xy();
        let f = pq("x^2 + y", &vars);
        let g = f.substitute(0, &pq("y + 1", &vars));
        assert_eq!(g, pq("y^2 + 3*y + 1", &vars));
    }

    #[test]
    fn parse_errors_carry_position() {
        let vars = VariableSet::xy();
        match Polynomial::parse("x + q", &vars, FieldKind::Q) {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
