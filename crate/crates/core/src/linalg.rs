//! Exact dense linear algebra over the coefficient fields, plus fraction-free
//! integer rank for boundary matrices.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::field::{FieldKind, Scalar};

/// Dense matrix of scalars (all of one field).
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, field: FieldKind) -> Mat {
        Mat { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: FieldKind) -> Mat {
        let mut m = Mat::zero(n, n, field);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let field = self.data.first().map(|s| s.kind()).unwrap_or(FieldKind::Q);
        let mut out = Mat::zero(self.rows, other.cols, field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j).add(&a.mul(other.at(k, j)));
                    *out.at_mut(i, j) = v;
                }
            }
        }
        out
    }

    pub fn stack(top: &Mat, bottom: &Mat) -> Mat {
        assert_eq!(top.cols, bottom.cols);
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        Mat { rows: top.rows + bottom.rows, cols: top.cols, data }
    }

    /// In-place reduction to row echelon form; returns the pivot columns.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            // normalize
            let inv = self.at(r, c).inv();
            for j in c..self.cols {
                let v = self.at(r, j).mul(&inv);
                *self.at_mut(r, j) = v;
            }
            // clear the column everywhere else
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = self.at(i, j).sub(&f.mul(self.at(r, j)));
                    *self.at_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Basis of the right kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let field = self.data.first().map(|s| s.kind()).unwrap_or(FieldKind::Q);
        let mut m = self.clone();
        let pivots = m.echelonize();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![field.zero(); self.cols];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, fc).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

/// A row space in reduced echelon form, supporting membership and reduction.
#[derive(Clone, Debug)]
pub struct RowSpace {
    pub field: FieldKind,
    pub cols: usize,
    /// echelonized rows, pivot columns strictly increasing
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl RowSpace {
    pub fn empty(cols: usize, field: FieldKind) -> RowSpace {
        RowSpace { field, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors(cols: usize, field: FieldKind, vecs: &[Vec<Scalar>]) -> RowSpace {
        let mut s = RowSpace::empty(cols, field);
        for v in vecs {
            s.insert(v.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce a vector against the space; the residue has zeros in all pivot
    /// columns.
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for j in p..self.cols {
                if !row[j].is_zero() {
                    v[j] = v[j].sub(&f.mul(&row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(|c| c.is_zero())
    }

    /// Insert a vector; returns true if the dimension grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = r[p].inv();
        for c in r.iter_mut() {
            *c = c.mul(&inv);
        }
        // back-substitute into existing rows
        for (row, &_rp) in self.rows.iter_mut().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.cols {
                    if !r[j].is_zero() {
                        row[j] = row[j].sub(&f.mul(&r[j]));
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank_int(rows: usize, cols: usize, data: &[BigInt]) -> usize {
    let mut m: Vec<BigInt> = data.to_vec();
    assert_eq!(m.len(), rows * cols);
    let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * cols + j].clone();
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    let mut r = 0usize;
    for c in 0..cols {
        // pick the smallest nonzero pivot in absolute value to slow growth
        let mut pick: Option<usize> = None;
        for i in r..rows {
            if !m[i * cols + c].is_zero() {
                pick = match pick {
                    None => Some(i),
                    Some(p) => {
                        if m[i * cols + c].abs() < m[p * cols + c].abs() {
                            Some(i)
                        } else {
                            Some(p)
                        }
                    }
                };
            }
        }
        let Some(p) = pick else { continue };
        if p != r {
            for j in 0..cols {
                m.swap(r * cols + j, p * cols + j);
            }
        }
        let pivot = at(&m, r, c);
        for i in (r + 1)..rows {
            let head = at(&m, i, c);
            for j in (c + 1)..cols {
                let v = (&pivot * at(&m, i, j) - &head * at(&m, r, j)) / &prev;
                m[i * cols + j] = v;
            }
            m[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        r += 1;
        if r == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        FieldKind::Q.from_i64(v)
    }

    #[test]
    fn rank_and_kernel() {
        let m = Mat::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        // check m * k = 0
        for k in &ker {
            for i in 0..m.rows {
                let mut acc = FieldKind::Q.zero();
                for j in 0..m.cols {
                    acc = acc.add(&m.at(i, j).mul(&k[j]));
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn rowspace_membership() {
        let mut s = RowSpace::empty(3, FieldKind::Q);
        assert!(s.insert(vec![q(1), q(1), q(0)]));
        assert!(s.insert(vec![q(0), q(2), q(2)]));
        assert!(!s.insert(vec![q(1), q(3), q(2)]));
        assert!(s.contains(&[q(2), q(2), q(0)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
    }

    #[test]
    fn bareiss_rank() {
        let data: Vec<BigInt> = [1, 2, 3, 4, 5, 6, 7, 8, 9].map(BigInt::from).to_vec();
        assert_eq!(rank_int(3, 3, &data), 2);
        let data: Vec<BigInt> = [2, 0, 0, 1].map(BigInt::from).to_vec();
        assert_eq!(rank_int(2, 2, &data), 2);
    }

    #[test]
    fn fp_rank() {
        let f = FieldKind::Fp(7);
        let m = Mat::from_rows(vec![
            vec![f.from_i64(3), f.from_i64(1)],
            vec![f.from_i64(6), f.from_i64(2)],
        ]);
        assert_eq!(m.rank(), 1);
    }
}
