//! Term orders: graded reverse lexicographic and lexicographic with arbitrary
//! variable permutations, the bigraded-lex order of the family ring, and
//! weight-refined orders (which also cover elimination orders).

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::monomial::Monomial;
use crate::vars::{VarName, VariableSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermOrder {
    /// Graded reverse lexicographic. `desc` lists variable indices from most
    /// significant to least significant.
    Grevlex { desc: Vec<usize> },
    /// Pure lexicographic on the `desc` significance list.
    Lex { desc: Vec<usize> },
    /// Compare deg1, then deg2, then pure lex on `desc`.
    BigradedLex {
        deg1: Vec<i64>,
        deg2: Vec<i64>,
        desc: Vec<usize>,
    },
    /// Compare a weight functional first, break ties with `tie`.
    /// With a 0/1 weight vector this is an elimination order for the
    /// weight-1 block.
    WeightRefined { weight: Vec<i64>, tie: Box<TermOrder> },
}

impl TermOrder {
    /// Grevlex where the variable storage order is also the significance
    /// order (first variable largest).
    pub fn grevlex(nvars: usize) -> TermOrder {
        TermOrder::Grevlex { desc: (0..nvars).collect() }
    }

    /// Grevlex on the *opposite* of the storage order: the last listed
    /// variable is the largest. With the row-major matrix ring this is the
    /// antidiagonal order w_{1,1} < w_{1,2} < ... < w_{n+1,n}.
    pub fn grevlex_opposite(nvars: usize) -> TermOrder {
        TermOrder::Grevlex { desc: (0..nvars).rev().collect() }
    }

    pub fn lex(nvars: usize) -> TermOrder {
        TermOrder::Lex { desc: (0..nvars).collect() }
    }

    /// The order of the family ring: total x,y,z-degree, then the second
    /// grading, then pure lex with x > y > z > w > v.
    pub fn bigraded_lex(vars: &Arc<VariableSet>) -> TermOrder {
        let (deg1, deg2) = family_bigrading(vars);
        TermOrder::BigradedLex { deg1, deg2, desc: (0..vars.len()).collect() }
    }

    /// Eliminate the given variables: weight 1 on them, grevlex tie-break.
    pub fn elimination(nvars: usize, eliminate: &[usize]) -> TermOrder {
        let mut weight = vec![0i64; nvars];
        for &k in eliminate {
            weight[k] = 1;
        }
        TermOrder::WeightRefined { weight, tie: Box::new(TermOrder::grevlex(nvars)) }
    }

    pub fn nvars(&self) -> usize {
        match self {
            TermOrder::Grevlex { desc } | TermOrder::Lex { desc } => desc.len(),
            TermOrder::BigradedLex { deg1, .. } => deg1.len(),
            TermOrder::WeightRefined { weight, .. } => weight.len(),
        }
    }

    /// Total order on monomials; `Greater` means `u` is the larger monomial.
    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Ordering {
        debug_assert_eq!(u.nvars(), self.nvars());
        debug_assert_eq!(v.nvars(), self.nvars());
        match self {
            TermOrder::Grevlex { desc } => {
                let du: u32 = u.degree();
                let dv: u32 = v.degree();
                match du.cmp(&dv) {
                    Ordering::Equal => {}
                    o => return o,
                }
                // least significant differing variable: smaller exponent wins
                for &k in desc.iter().rev() {
                    match u.exp(k).cmp(&v.exp(k)) {
                        Ordering::Equal => {}
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            TermOrder::Lex { desc } => lex_cmp(desc, u, v),
            TermOrder::BigradedLex { deg1, deg2, desc } => {
                match u.weighted_degree(deg1).cmp(&v.weighted_degree(deg1)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                match u.weighted_degree(deg2).cmp(&v.weighted_degree(deg2)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                lex_cmp(desc, u, v)
            }
            TermOrder::WeightRefined { weight, tie } => {
                match u.weighted_degree(weight).cmp(&v.weighted_degree(weight)) {
                    Ordering::Equal => tie.compare(u, v),
                    o => o,
                }
            }
        }
    }

    pub fn max<'a>(&self, u: &'a Monomial, v: &'a Monomial) -> &'a Monomial {
        if self.compare(u, v) == Ordering::Less {
            v
        } else {
            u
        }
    }
}

fn lex_cmp(desc: &[usize], u: &Monomial, v: &Monomial) -> Ordering {
    for &k in desc {
        match u.exp(k).cmp(&v.exp(k)) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

/// The two degree functionals of the family ring:
/// deg1 is 1 on x,y,z and 0 elsewhere; deg2 is 1 on x, y, every w and on
/// v2, v3, is 0 on z and v1, and is 2 on v4.
pub fn family_bigrading(vars: &Arc<VariableSet>) -> (Vec<i64>, Vec<i64>) {
    let mut deg1 = vec![0i64; vars.len()];
    let mut deg2 = vec![0i64; vars.len()];
    for (k, &n) in vars.names().iter().enumerate() {
        match n {
            VarName::X | VarName::Y => {
                deg1[k] = 1;
                deg2[k] = 1;
            }
            VarName::Z => {
                deg1[k] = 1;
            }
            VarName::W(_, _) => {
                deg2[k] = 1;
            }
            VarName::V(1) => {}
            VarName::V(2) | VarName::V(3) => {
                deg2[k] = 1;
            }
            VarName::V(4) => {
                deg2[k] = 2;
            }
            _ => {}
        }
    }
    (deg1, deg2)
}

/// deg2 restricted to a w/v ring (used for homogeneity checks of the
/// intermediate ideals).
pub fn deg2_weights(vars: &Arc<VariableSet>) -> Vec<i64> {
    let mut w = vec![0i64; vars.len()];
    for (k, &n) in vars.names().iter().enumerate() {
        match n {
            VarName::W(_, _) | VarName::V(2) | VarName::V(3) => w[k] = 1,
            VarName::V(4) => w[k] = 2,
            _ => {}
        }
    }
    w
}

/// Grevlex on the ascending variable list v_{j+1} < .. < v4 < w_{1,1} < ...
/// for the intermediate rings; with no v's this is the antidiagonal order.
pub fn tail_ring_order(vars: &Arc<VariableSet>) -> TermOrder {
    let mut vs: Vec<usize> = Vec::new();
    let mut ws: Vec<usize> = Vec::new();
    for (k, &n) in vars.names().iter().enumerate() {
        match n {
            VarName::V(_) => vs.push(k),
            VarName::W(_, _) => ws.push(k),
            _ => panic!("tail ring may only contain w and v variables"),
        }
    }
    // descending significance: w's from last to first, then v's from v4 down
    let mut desc: Vec<usize> = ws.into_iter().rev().collect();
    desc.extend(vs.into_iter().rev());
    TermOrder::Grevlex { desc }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_standard() {
        // x > y > z with x,y,z storage order
        let o = TermOrder::grevlex(3);
        assert_eq!(o.compare(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        assert_eq!(o.compare(&m(&[1, 1, 0]), &m(&[2, 0, 0])), Ordering::Less);
        // classic grevlex vs lex separation: x y^2 z vs x^2 z^2
        assert_eq!(o.compare(&m(&[1, 2, 1]), &m(&[2, 0, 2])), Ordering::Greater);
    }

    #[test]
    fn grevlex_opposite_antidiagonal() {
        // 2x2 minor of a matrix with ascending variable order: the
        // antidiagonal w12*w21 beats the diagonal w11*w22.
        let o = TermOrder::grevlex_opposite(4);
        let diag = m(&[1, 0, 0, 1]);
        let anti = m(&[0, 1, 1, 0]);
        assert_eq!(o.compare(&anti, &diag), Ordering::Greater);
    }

    #[test]
    fn elimination_blocks() {
        let o = TermOrder::elimination(3, &[2]);
        // any positive power of the tag beats anything without it
        assert_eq!(o.compare(&m(&[0, 0, 1]), &m(&[5, 5, 0])), Ordering::Greater);
    }
}
