//! Two independent membership oracles for the matrix variety underneath the
//! fiber ideal, used to cross-check each other on random and structured
//! samples: a minor-divisibility test and a kernel-dimension test.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldKind, Scalar};
use crate::linalg::Mat;

/// A univariate value truncated mod y^2: c0 + c1 * y.
#[derive(Clone, Debug)]
struct Jet(Scalar, Scalar);

impl Jet {
    fn zero(f: FieldKind) -> Jet {
        Jet(f.zero(), f.zero())
    }
    fn mul(&self, o: &Jet) -> Jet {
        Jet(
            self.0.mul(&o.0),
            self.0.mul(&o.1).add(&self.1.mul(&o.0)),
        )
    }
    fn add(&self, o: &Jet) -> Jet {
        Jet(self.0.add(&o.0), self.1.add(&o.1))
    }
    fn sub(&self, o: &Jet) -> Jet {
        Jet(self.0.sub(&o.0), self.1.sub(&o.1))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }
}

/// Determinant of a square matrix of jets (subset DP, exact mod y^2).
fn jet_det(m: &[Vec<Jet>], field: FieldKind) -> Jet {
    let k = m.len();
    if k == 0 {
        return Jet(field.one(), field.zero());
    }
    let full = (1usize << k) - 1;
    let mut dp: Vec<Jet> = vec![Jet::zero(field); 1 << k];
    dp[0] = Jet(field.one(), field.zero());
    for mask in 1usize..=full {
        let col = (mask.count_ones() - 1) as usize;
        let mut acc = Jet::zero(field);
        let mut idx = 0usize;
        for r in 0..k {
            if mask & (1 << r) == 0 {
                continue;
            }
            let term = m[r][col].mul(&dp[mask ^ (1 << r)]);
            if (idx + col).is_multiple_of(2) {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
            idx += 1;
        }
        dp[mask] = acc;
    }
    dp[full].clone()
}

/// Does every maximal minor of (Y + B) lie in (y^2)? Here Y is the
/// (n+1) x n matrix with y on the main diagonal, and B is a numeric
/// (n+1) x n matrix.
pub fn fiber_membership(b: &[Vec<Scalar>]) -> bool {
    let rows = b.len();
    let n = rows - 1;
    assert!(b.iter().all(|r| r.len() == n));
    let field = b[0][0].kind();
    // entries of Y + B as jets
    let entries: Vec<Vec<Jet>> = (0..rows)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let lin = if i == j { field.one() } else { field.zero() };
                    Jet(b[i][j].clone(), lin)
                })
                .collect()
        })
        .collect();
    for deleted in 0..rows {
        let sub: Vec<Vec<Jet>> = entries
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != deleted)
            .map(|(_, r)| r.clone())
            .collect();
        if !jet_det(&sub, field).is_zero() {
            return false;
        }
    }
    true
}

/// The kernel-dimension conditions: dim(ker A ∩ ker a) >= 1 and
/// dim(ker A^2 ∩ ker aA ∩ ker a) >= 2, by exact rank computation.
pub fn rank_conditions(a_mat: &[Vec<Scalar>], a_row: &[Scalar]) -> bool {
    let n = a_mat.len();
    assert!(a_mat.iter().all(|r| r.len() == n));
    assert_eq!(a_row.len(), n);
    let m = Mat::from_rows(a_mat.to_vec());
    let row = Mat::from_rows(vec![a_row.to_vec()]);
    let first = Mat::stack(&m, &row);
    if first.rank() + 1 > n {
        return false;
    }
    let m2 = m.mul(&m);
    let row_a = row.mul(&m);
    let second = Mat::stack(&Mat::stack(&m2, &row_a), &row);
    second.rank() + 2 <= n
}

/// Split a stacked (n+1) x n matrix into (A, a) and compare the two oracles.
pub fn oracles_agree(b: &[Vec<Scalar>]) -> bool {
    let n = b.len() - 1;
    let a_mat: Vec<Vec<Scalar>> = b[..n].to_vec();
    let a_row: Vec<Scalar> = b[n].clone();
    fiber_membership(b) == rank_conditions(&a_mat, &a_row)
}

/// Deterministic random matrix stream over F_p.
pub fn random_matrix(n: usize, p: u64, seed: u64) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n + 1)
        .map(|_| {
            (0..n)
                .map(|_| Scalar::Fp { val: rng.random_range(0..p), p })
                .collect()
        })
        .collect()
}

/// Run the oracle comparison on `samples` random matrices; returns the
/// indices of any disagreements.
pub fn oracle_equivalence_random(n: usize, p: u64, seed: u64, samples: usize) -> Vec<usize> {
    use rayon::prelude::*;
    (0..samples)
        .into_par_iter()
        .filter(|&k| {
            let sub = seed
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add(k as u64);
            !oracles_agree(&random_matrix(n, p, sub))
        })
        .collect()
}

/// All Jordan-type matrices of size n over F_p with eigenvalues in the given
/// list: block sizes run over compositions of n, each block gets one of the
/// eigenvalues.
pub fn jordan_matrices(n: usize, eigenvalues: &[Scalar]) -> Vec<Vec<Vec<Scalar>>> {
    let field = eigenvalues[0].kind();
    let mut out = Vec::new();
    let mut sizes = Vec::new();
    fn compositions(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for s in 1..=n {
            cur.push(s);
            compositions(n - s, cur, out);
            cur.pop();
        }
    }
    let mut comps = Vec::new();
    compositions(n, &mut sizes, &mut comps);
    for comp in comps {
        // assign eigenvalues to blocks
        let k = comp.len();
        let mut assign = vec![0usize; k];
        loop {
            let mut m = vec![vec![field.zero(); n]; n];
            let mut pos = 0usize;
            for (bi, &sz) in comp.iter().enumerate() {
                let ev = &eigenvalues[assign[bi]];
                for r in 0..sz {
                    m[pos + r][pos + r] = ev.clone();
                    if r + 1 < sz {
                        m[pos + r][pos + r + 1] = field.one();
                    }
                }
                pos += sz;
            }
            out.push(m);
            // increment the assignment counter
            let mut carry = 0usize;
            loop {
                if carry == k {
                    break;
                }
                assign[carry] += 1;
                if assign[carry] < eigenvalues.len() {
                    break;
                }
                assign[carry] = 0;
                carry += 1;
            }
            if carry == k {
                break;
            }
        }
    }
    out
}

/// Exhaustive comparison over Jordan-form top blocks with every possible
/// bottom row over F_p (meant for tiny p).
pub fn oracle_equivalence_jordan_exhaustive(n: usize, p: u64) -> usize {
    let evs: Vec<Scalar> = (0..p).map(|v| Scalar::Fp { val: v, p }).collect();
    let mats = jordan_matrices(n, &evs);
    let mut mismatches = 0usize;
    let total_rows = (p as usize).pow(n as u32);
    for a_mat in &mats {
        for code in 0..total_rows {
            let mut c = code;
            let row: Vec<Scalar> = (0..n)
                .map(|_| {
                    let v = (c % p as usize) as u64;
                    c /= p as usize;
                    Scalar::Fp { val: v, p }
                })
                .collect();
            let mut b = a_mat.clone();
            b.push(row.clone());
            if fiber_membership(&b) != rank_conditions(a_mat, &row) {
                mismatches += 1;
            }
        }
    }
    mismatches
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        FieldKind::Q.from_i64(v)
    }

    #[test]
    fn zero_matrix_is_member() {
        for n in [2usize, 3, 4] {
            let b = vec![vec![q(0); n]; n + 1];
            assert!(fiber_membership(&b));
        }
    }

    #[test]
    fn identity_over_zero_row_is_not() {
        let n = 3;
        let mut b = vec![vec![q(0); n]; n + 1];
        for i in 0..n {
            b[i][i] = q(1);
        }
        assert!(!fiber_membership(&b));
    }

    #[test]
    fn rank_conditions_basics() {
        let n = 3;
        let zero = vec![vec![q(0); n]; n];
        let any_row = vec![q(1), q(2), q(3)];
        assert!(rank_conditions(&zero, &any_row));
        let mut id = vec![vec![q(0); n]; n];
        for i in 0..n {
            id[i][i] = q(1);
        }
        assert!(!rank_conditions(&id, &vec![q(0); n]));
        // single nilpotent Jordan block, zero row
        let mut nilp = vec![vec![q(0); n]; n];
        for i in 0..n - 1 {
            nilp[i][i + 1] = q(1);
        }
        assert!(rank_conditions(&nilp, &vec![q(0); n]));
    }

    #[test]
    fn oracles_agree_on_random_samples() {
        let bad = oracle_equivalence_random(4, 32003, 7, 100);
        assert!(bad.is_empty(), "disagreements: {bad:?}");
    }

    #[test]
    fn oracles_agree_jordan_f2_n3() {
        assert_eq!(oracle_equivalence_jordan_exhaustive(3, 2), 0);
    }
}
