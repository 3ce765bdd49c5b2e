//! Tangent spaces of nested pairs of finite subschemes of the plane.
//!
//! The tangent space at a pair \[V(I1) >= V(I2)\] (so I1 <= I2 as ideals) is
//! the fiber product of Hom(I1, R/I1) and Hom(I2, R/I2) over Hom(I1, R/I2).
//! All Hom spaces are computed by exact linear algebra inside the truncation
//! R/m^D: a hom out of an m-primary ideal kills m^N * I once m^N annihilates
//! the target, so I/m^N I is a faithful finite-dimensional model.

use thiserror::Error;

use crate::field::{FieldKind, Scalar};
use crate::groebner::{buchberger, reduces_to_zero, Budget, GroebnerError};
use crate::hilbert::{colength, Colength};
use crate::linalg::{Mat, RowSpace};
use crate::order::TermOrder;
use crate::plane::{ideal_span, monomial_poly, Trunc};
use crate::poly::Polynomial;
use crate::vars::VariableSet;

#[derive(Debug, Error)]
pub enum TangentError {
    #[error("ideal has infinite colength")]
    InfiniteColength,
    #[error("ideal is not primary to the origin (m^colength not contained)")]
    NotLocal,
    #[error("the pair is not nested: I1 is not contained in I2")]
    NotNested,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// A nested pair of finite-colength ideals I1 <= I2 in k\[x,y\], i.e. a pair
/// of subschemes V(I1) >= V(I2), both supported at the origin.
pub struct PairPoint {
    pub i1: Vec<Polynomial>,
    pub i2: Vec<Polynomial>,
    pub colength1: u64,
    pub colength2: u64,
}

impl PairPoint {
    pub fn new(i1: Vec<Polynomial>, i2: Vec<Polynomial>) -> Result<PairPoint, TangentError> {
        let vars = i1.first().expect("empty ideal").vars().clone();
        assert_eq!(vars.as_ref(), VariableSet::xy().as_ref());
        let order = TermOrder::grevlex(2);
        let budget = Budget::default();
        let c1 = match colength(&i1, &order, &budget)? {
            Colength::Finite(c) => c,
            Colength::Infinite => return Err(TangentError::InfiniteColength),
        };
        let c2 = match colength(&i2, &order, &budget)? {
            Colength::Finite(c) => c,
            Colength::Infinite => return Err(TangentError::InfiniteColength),
        };
        let gb2 = buchberger(&i2, &order, &budget)?;
        if !i1.iter().all(|g| reduces_to_zero(g, &gb2, &order)) {
            return Err(TangentError::NotNested);
        }
        // m-primary test: every degree-c monomial lies in the ideal
        let gb1 = buchberger(&i1, &order, &budget)?;
        for (gb, c) in [(&gb1, c1), (&gb2, c2)] {
            for a in 0..=c {
                let m = monomial_poly(&vars, a as u32, (c - a) as u32);
                if !reduces_to_zero(&m, gb, &order) {
                    return Err(TangentError::NotLocal);
                }
            }
        }
        Ok(PairPoint { i1, i2, colength1: c1, colength2: c2 })
    }
}

/// A finite quotient Big/Small of row spaces, with coset representatives.
struct Quotient {
    small: RowSpace,
    /// representative rows, reduced against `small` and echelon among
    /// themselves
    reps: RowSpace,
}

impl Quotient {
    fn new(big: &RowSpace, small: RowSpace) -> Quotient {
        let mut reps = RowSpace::empty(small.cols, FieldKind::Q);
        for row in &big.rows {
            let r = small.reduce(row.clone());
            reps.insert(r);
        }
        Quotient { small, reps }
    }

    fn dim(&self) -> usize {
        self.reps.dim()
    }

    /// Coordinates of a vector (must lie in Big) with respect to the
    /// representative basis.
    fn coords(&self, v: Vec<Scalar>) -> Vec<Scalar> {
        let mut r = self.small.reduce(v);
        let mut out = vec![FieldKind::Q.zero(); self.reps.dim()];
        for (k, (row, &p)) in self.reps.rows.iter().zip(&self.reps.pivots).enumerate() {
            let c = r[p].clone();
            if !c.is_zero() {
                for j in 0..r.len() {
                    if !row[j].is_zero() {
                        r[j] = r[j].sub(&c.mul(&row[j]));
                    }
                }
            }
            out[k] = c;
        }
        assert!(r.iter().all(|c| c.is_zero()), "vector outside the subquotient");
        out
    }

    /// Matrix of multiplication by x or y in the representative basis.
    fn mult_matrix(&self, tr: &Trunc, var: usize) -> Vec<Vec<Scalar>> {
        // columns indexed by basis, rows by basis
        let mu = self.dim();
        let mut cols = Vec::with_capacity(mu);
        for row in &self.reps.rows {
            let shifted = tr.shift(row, var);
            cols.push(self.coords(shifted));
        }
        // transpose into row-major
        let mut m = vec![vec![FieldKind::Q.zero(); mu]; mu];
        for (j, col) in cols.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                m[i][j] = c.clone();
            }
        }
        m
    }
}

/// dim of the tangent space at the pair, by the fiber-product description.
pub fn tangent_dim(pair: &PairPoint) -> Result<usize, TangentError> {
    let c1 = pair.colength1 as u32;
    let big_n = c1 + 2;
    let d = big_n + c1;
    let tr = Trunc::new(d.max(2));

    // models M_i = I_i / m^N I_i and quotients R/I_i
    let span1 = ideal_span(&tr, &pair.i1, 0);
    let span2 = ideal_span(&tr, &pair.i2, 0);
    let m1 = Quotient::new(&span1, ideal_span(&tr, &pair.i1, big_n));
    let m2 = Quotient::new(&span2, ideal_span(&tr, &pair.i2, big_n));
    let q1 = QuotientRing::new(&tr, span1);
    let q2 = QuotientRing::new(&tr, span2);

    let mu1 = m1.dim();
    let mu2 = m2.dim();
    let nu1 = q1.dim();
    let nu2 = q2.dim();
    assert_eq!(nu1 as u64, pair.colength1);
    assert_eq!(nu2 as u64, pair.colength2);

    // commuting conditions for each Hom space, then the compatibility block
    let unknowns = mu1 * nu1 + mu2 * nu2;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let zero = FieldKind::Q.zero();

    let hom_conditions =
        |m: &Quotient, q: &QuotientRing, offset: usize, mu: usize, nu: usize, rows: &mut Vec<Vec<Scalar>>| {
            for var in 0..2usize {
                let tm = m.mult_matrix(&tr, var);
                let tq = q.mult_matrix(&tr, var);
                // Phi * TM - TQ * Phi = 0, unknown Phi is nu x mu,
                // variable (i, j) at offset + j*nu + i
                for i in 0..nu {
                    for k in 0..mu {
                        let mut row = vec![zero.clone(); unknowns];
                        for j in 0..mu {
                            if !tm[j][k].is_zero() {
                                row[offset + j * nu + i] =
                                    row[offset + j * nu + i].add(&tm[j][k]);
                            }
                        }
                        for l in 0..nu {
                            if !tq[i][l].is_zero() {
                                row[offset + k * nu + l] =
                                    row[offset + k * nu + l].sub(&tq[i][l]);
                            }
                        }
                        rows.push(row);
                    }
                }
            }
        };

    hom_conditions(&m1, &q1, 0, mu1, nu1, &mut rows);
    hom_conditions(&m2, &q2, mu1 * nu1, mu2, nu2, &mut rows);

    // compatibility: pi . phi1 = phi2 . incl on the basis of M1
    // pi: R/I1 -> R/I2 in monomial coordinates, incl: M1 -> M2
    for k in 0..mu1 {
        let rep = &m1.reps.rows[k];
        let incl = m2.coords(rep.clone()); // M1 basis vector seen in M2
        // phi1 column k mapped by pi, as a vector in R/I2 coords
        // pi of each R/I1 basis monomial
        for i in 0..nu2 {
            let mut row = vec![zero.clone(); unknowns];
            for l in 0..nu1 {
                // coefficient of phi1[l,k]: (pi e_l)[i]
                let e = q1.basis_monomial_vector(&tr, l);
                let pe = q2.coords(e);
                if !pe[i].is_zero() {
                    row[k * nu1 + l] = row[k * nu1 + l].add(&pe[i]);
                }
            }
            for m in 0..mu2 {
                if !incl[m].is_zero() {
                    let idx = mu1 * nu1 + m * nu2 + i;
                    row[idx] = row[idx].sub(&incl[m]);
                }
            }
            rows.push(row);
        }
    }

    let mat = Mat::from_rows(rows);
    Ok(unknowns - mat.rank())
}

/// R/I in the truncation: standard-monomial coordinates against the RREF of
/// the ideal span.
struct QuotientRing {
    span: RowSpace,
    basis_cols: Vec<usize>,
}

impl QuotientRing {
    fn new(tr: &Trunc, span: RowSpace) -> QuotientRing {
        let pivot_set: std::collections::HashSet<usize> = span.pivots.iter().copied().collect();
        let basis_cols: Vec<usize> = (0..tr.dim()).filter(|c| !pivot_set.contains(c)).collect();
        QuotientRing { span, basis_cols }
    }

    fn dim(&self) -> usize {
        self.basis_cols.len()
    }

    fn coords(&self, v: Vec<Scalar>) -> Vec<Scalar> {
        let r = self.span.reduce(v);
        self.basis_cols.iter().map(|&c| r[c].clone()).collect()
    }

    fn basis_monomial_vector(&self, tr: &Trunc, l: usize) -> Vec<Scalar> {
        let mut v = vec![FieldKind::Q.zero(); tr.dim()];
        v[self.basis_cols[l]] = FieldKind::Q.one();
        v
    }

    fn mult_matrix(&self, tr: &Trunc, var: usize) -> Vec<Vec<Scalar>> {
        let nu = self.dim();
        let mut m = vec![vec![FieldKind::Q.zero(); nu]; nu];
        for (j, &c) in self.basis_cols.iter().enumerate() {
            let mut e = vec![FieldKind::Q.zero(); tr.dim()];
            e[c] = FieldKind::Q.one();
            let col = self.coords(tr.shift(&e, var));
            for (i, x) in col.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(s: &str) -> Polynomial {
        Polynomial::parse(s, &VariableSet::xy(), FieldKind::Q).unwrap()
    }

    #[test]
    fn point_in_point() {
        // [V(m) >= V(m)]: the diagonal of the plane, dimension 2
        let p = PairPoint::new(vec![pq("x"), pq("y")], vec![pq("x"), pq("y")]).unwrap();
        assert_eq!(tangent_dim(&p).unwrap(), 2);
    }

    #[test]
    fn smooth_curvilinear_pairs() {
        // [V(x, y^r) >= V(x, y^2)] is smooth of dimension 2r
        for r in [3u32, 4] {
            let p = PairPoint::new(
                vec![pq("x"), pq(&format!("y^{r}"))],
                vec![pq("x"), pq("y^2")],
            )
            .unwrap();
            assert_eq!(tangent_dim(&p).unwrap(), 2 * r as usize, "r = {r}");
        }
    }

    #[test]
    fn curvilinear_over_point_is_smooth() {
        // pairs over a reduced point sit in a smooth parameter space of
        // dimension 2r
        for r in [2u32, 3] {
            let p = PairPoint::new(
                vec![pq("x"), pq(&format!("y^{r}"))],
                vec![pq("x"), pq("y")],
            )
            .unwrap();
            assert_eq!(tangent_dim(&p).unwrap(), 2 * r as usize);
        }
    }

    #[test]
    fn square_pair_dimension_eight() {
        let p = PairPoint::new(vec![pq("x^2"), pq("y^2")], vec![pq("x"), pq("y^2")]).unwrap();
        assert_eq!(tangent_dim(&p).unwrap(), 8);
    }

    #[test]
    fn fat_point_over_point_is_singular() {
        // [V(m^2) >= V(m)] in the (3,1) nested scheme: tangent dim > 6
        let p = PairPoint::new(
            vec![pq("x^2"), pq("x*y"), pq("y^2")],
            vec![pq("x"), pq("y")],
        )
        .unwrap();
        assert!(tangent_dim(&p).unwrap() > 6);
    }

    #[test]
    fn rejects_non_nested() {
        let r = PairPoint::new(vec![pq("x"), pq("y^2")], vec![pq("x^2"), pq("y^2")]);
        assert!(matches!(r, Err(TangentError::NotNested)));
    }
}
