//! Reduced simplicial homology from boundary matrices: exact ranks over Q
//! (fraction-free) or F_p, Smith normal form over Z on demand, and the
//! Reisner criterion for Cohen-Macaulayness over a field.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;


use crate::linalg::{rank_int, Mat};
use crate::srcomplex::SimplicialComplex;
use thiserror::Error;

/// Exact elimination on the boundary matrices is only feasible at desk
/// scale; larger complexes are rejected with a distinct status.
pub const DEFAULT_FACE_BUDGET: usize = 50_000;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("size budget exceeded: {faces} faces, cap {cap}")]
    SizeBudget { faces: usize, cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coefficients {
    Q,
    Fp(u64),
    Z,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub coefficients: Coefficients,
    /// reduced betti numbers, index = dimension (0 = H~_0)
    pub betti: Vec<usize>,
    /// for Z coefficients: the nontrivial diagonal entries (torsion) of each
    /// boundary map's Smith form, index = dimension of the boundary's source
    pub torsion: Option<Vec<Vec<String>>>,
    pub face_counts: Vec<usize>,
    pub euler_ok: bool,
}

/// Cheap upper bound on the face count before any enumeration happens.
fn check_enumeration_bound(
    complex: &SimplicialComplex,
    face_budget: usize,
) -> Result<(), HomologyError> {
    let mut bound: usize = 0;
    for f in &complex.facets {
        if f.len() >= usize::BITS as usize - 1 {
            return Err(HomologyError::SizeBudget { faces: usize::MAX, cap: face_budget });
        }
        bound = bound.saturating_add(1usize << f.len());
    }
    if bound > face_budget.saturating_mul(128) {
        return Err(HomologyError::SizeBudget { faces: bound, cap: face_budget });
    }
    Ok(())
}

/// Boundary matrix from dim k faces to dim k-1 faces (signed incidence).
fn boundary_matrix(
    lower: &[Vec<usize>],
    upper: &[Vec<usize>],
) -> (usize, usize, Vec<BigInt>) {
    let index: HashMap<&[usize], usize> =
        lower.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let rows = lower.len();
    let cols = upper.len();
    let mut data = vec![BigInt::zero(); rows * cols];
    for (j, face) in upper.iter().enumerate() {
        for k in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(k);
            let i = index[&sub[..]];
            let sign = if k % 2 == 0 { 1 } else { -1 };
            data[i * cols + j] = BigInt::from(sign);
        }
    }
    (rows, cols, data)
}

fn rank_over(rows: usize, cols: usize, data: &[BigInt], coeffs: Coefficients) -> usize {
    match coeffs {
        Coefficients::Q | Coefficients::Z => rank_int(rows, cols, data),
        Coefficients::Fp(p) => {
            let m = Mat {
                rows,
                cols,
                data: data
                    .iter()
                    .map(|v| {
                        let r = v % BigInt::from(p);
                        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
                        let (_, digits) = r.to_u64_digits();
                        crate::field::Scalar::Fp {
                            val: digits.first().copied().unwrap_or(0),
                            p,
                        }
                    })
                    .collect(),
            };
            m.rank()
        }
    }
}

/// Smith normal form diagonal of an integer matrix (destructive, naive
/// pivoting; meant for small matrices).
pub fn smith_diagonal(rows: usize, cols: usize, data: &[BigInt]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| data[i * cols..(i + 1) * cols].to_vec())
        .collect();
    let mut diag = Vec::new();
    let mut r0 = 0usize;
    let mut c0 = 0usize;
    while r0 < rows && c0 < cols {
        // find the smallest nonzero entry in the remaining block
        let mut pick: Option<(usize, usize)> = None;
        for i in r0..rows {
            for j in c0..cols {
                if !m[i][j].is_zero()
                    && pick
                        .map(|(a, b)| m[i][j].abs() < m[a][b].abs())
                        .unwrap_or(true)
                {
                    pick = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pick else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        // clear row and column by division steps
        let mut again = true;
        while again {
            again = false;
            for i in (r0 + 1)..rows {
                if m[i][c0].is_zero() {
                    continue;
                }
                let q = &m[i][c0] / &m[r0][c0];
                for j in c0..cols {
                    let v = &m[i][j] - &q * &m[r0][j];
                    m[i][j] = v;
                }
                if !m[i][c0].is_zero() {
                    // remainder smaller than pivot: swap and repeat
                    m.swap(r0, i);
                    again = true;
                }
            }
            for j in (c0 + 1)..cols {
                if m[r0][j].is_zero() {
                    continue;
                }
                let q = &m[r0][j] / &m[r0][c0];
                for row in m.iter_mut().take(rows).skip(r0) {
                    let v = &row[j] - &q * &row[c0];
                    row[j] = v;
                }
                if !m[r0][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(c0, j);
                    }
                    again = true;
                }
            }
        }
        diag.push(m[r0][c0].abs());
        r0 += 1;
        c0 += 1;
    }
    // enforce the divisibility chain
    let mut changed = true;
    while changed {
        changed = false;
        for k in 1..diag.len() {
            if !diag[k - 1].is_zero() && !(&diag[k] % &diag[k - 1]).is_zero() {
                let g = gcd(&diag[k - 1], &diag[k]);
                let l = (&diag[k - 1] * &diag[k]) / &g;
                diag[k - 1] = g;
                diag[k] = l;
                changed = true;
            }
        }
    }
    diag
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Reduced homology of the complex (the empty simplex is included, so a
/// nonempty complex has betti\[0\] = #components - 1). Fails distinctly
/// when the face count exceeds the budget.
pub fn reduced_homology(
    complex: &SimplicialComplex,
    coeffs: Coefficients,
    face_budget: usize,
) -> Result<HomologyReport, HomologyError> {
    check_enumeration_bound(complex, face_budget)?;
    let faces = complex.faces_by_dim();
    let face_counts: Vec<usize> = faces.iter().map(|f| f.len()).collect();
    let total: usize = face_counts.iter().sum();
    if total > face_budget {
        return Err(HomologyError::SizeBudget { faces: total, cap: face_budget });
    }
    if faces.is_empty() || faces[0].is_empty() {
        return Ok(HomologyReport {
            coefficients: coeffs,
            betti: Vec::new(),
            torsion: None,
            face_counts,
            euler_ok: true,
        });
    }
    let maxd = faces.len() - 1;
    // boundary_k: C_k -> C_{k-1}, with the augmentation at k = 0
    let mut ranks = vec![0usize; maxd + 2];
    let mut torsion: Vec<Vec<String>> = Vec::new();
    let want_torsion = matches!(coeffs, Coefficients::Z);
    // augmentation: every vertex maps to the empty face
    ranks[0] = 1; // the all-ones row has rank 1 over any field
    if want_torsion {
        torsion.push(Vec::new()); // augmentation has no torsion
    }
    for k in 1..=maxd {
        let (r, c, data) = boundary_matrix(&faces[k - 1], &faces[k]);
        ranks[k] = rank_over(r, c, &data, coeffs);
        if want_torsion {
            let diag = smith_diagonal(r, c, &data);
            torsion.push(
                diag.iter()
                    .filter(|d| !d.is_zero() && **d != BigInt::from(1))
                    .map(|d| d.to_string())
                    .collect(),
            );
        }
    }
    ranks[maxd + 1] = 0;
    let mut betti = vec![0usize; maxd + 1];
    for k in 0..=maxd {
        betti[k] = face_counts[k] - ranks[k] - ranks[k + 1];
    }
    // Euler characteristic consistency: sum (-1)^k (betti_k) =
    // sum (-1)^k face_k - 1 (reduced)
    let lhs: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    let rhs: i64 = face_counts
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum::<i64>()
        - 1;
    Ok(HomologyReport {
        coefficients: coeffs,
        betti,
        torsion: if want_torsion { Some(torsion) } else { None },
        face_counts,
        euler_ok: lhs == rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReisnerReport {
    pub coefficients: Coefficients,
    pub pass: bool,
    /// faces whose links have low-dimensional reduced homology
    pub failures: Vec<Vec<usize>>,
    pub links_checked: usize,
}

/// Reisner criterion: the complex is Cohen-Macaulay over the field iff for
/// every face (including the empty one) the link has reduced homology only
/// in its top dimension.
pub fn reisner_check(
    complex: &SimplicialComplex,
    coeffs: Coefficients,
    face_budget: usize,
) -> Result<ReisnerReport, HomologyError> {
    assert!(!matches!(coeffs, Coefficients::Z), "Reisner needs a field");
    check_enumeration_bound(complex, face_budget)?;
    let mut all_faces: Vec<Vec<usize>> = vec![Vec::new()];
    for bucket in complex.faces_by_dim() {
        all_faces.extend(bucket);
    }
    if all_faces.len() > face_budget {
        return Err(HomologyError::SizeBudget { faces: all_faces.len(), cap: face_budget });
    }
    let results: Vec<(Vec<usize>, Result<bool, HomologyError>)> = all_faces
        .par_iter()
        .map(|face| {
            let link = complex.link(face);
            let ok = match link.dim() {
                None => Ok(true),
                Some(d) => reduced_homology(&link, coeffs, face_budget).map(|rep| {
                    rep.betti
                        .iter()
                        .enumerate()
                        .all(|(k, &b)| k as isize == d || b == 0)
                }),
            };
            (face.clone(), ok)
        })
        .collect();
    let results: Vec<(Vec<usize>, bool)> = results
        .into_iter()
        .map(|(f, r)| r.map(|ok| (f, ok)))
        .collect::<Result<_, _>>()?;
    let links_checked = results.len();
    let failures: Vec<Vec<usize>> = results
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(f, _)| f)
        .collect();
    Ok(ReisnerReport { coefficients: coeffs, pass: failures.is_empty(), failures, links_checked })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(facets: Vec<Vec<usize>>, nverts: usize) -> SimplicialComplex {
        SimplicialComplex { nverts, facets }
    }

    #[test]
    fn simplex_is_acyclic() {
        let c = complex(vec![vec![0, 1, 2, 3]], 4);
        let rep = reduced_homology(&c, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        assert!(rep.betti.iter().all(|&b| b == 0));
        assert!(rep.euler_ok);
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        let c = complex(vec![vec![0, 1], vec![0, 2], vec![1, 2]], 3);
        let rep = reduced_homology(&c, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(rep.betti, vec![0, 1]);
        let rep2 = reduced_homology(&c, Coefficients::Fp(2), DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(rep2.betti, vec![0, 1]);
    }

    #[test]
    fn two_points() {
        let c = complex(vec![vec![0], vec![1]], 2);
        let rep = reduced_homology(&c, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(rep.betti, vec![1]);
    }

    #[test]
    fn projective_plane_detects_characteristic() {
        // the 6-vertex triangulation of RP^2
        let facets = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 1, 5],
            vec![0, 4, 5],
            vec![0, 3, 4],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 3, 5],
            vec![2, 4, 5],
        ];
        let c = complex(facets, 6);
        let over_q = reduced_homology(&c, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(over_q.betti, vec![0, 0, 0]);
        let over_f2 = reduced_homology(&c, Coefficients::Fp(2), DEFAULT_FACE_BUDGET).unwrap();
        assert_eq!(over_f2.betti, vec![0, 1, 1]);
        let over_z = reduced_homology(&c, Coefficients::Z, DEFAULT_FACE_BUDGET).unwrap();
        let torsion = over_z.torsion.unwrap();
        // H_1 has a Z/2: the dim-2 boundary map has a 2 in its Smith form
        assert!(torsion[2].contains(&"2".to_string()));
    }

    #[test]
    fn snf_diagonal() {
        let data: Vec<BigInt> = [2, 4, 4, 6].map(BigInt::from).to_vec();
        let d = smith_diagonal(2, 2, &data);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn size_budget_is_a_distinct_error() {
        let c = complex(vec![vec![0, 1, 2, 3]], 4);
        match reduced_homology(&c, Coefficients::Q, 3) {
            Err(HomologyError::SizeBudget { .. }) => {}
            other => panic!("expected a size-budget error, got {other:?}"),
        }
    }

    #[test]
    fn reisner_on_the_grid_complex() {
        let c = SimplicialComplex::grid_complex(2);
        let rep = reisner_check(&c, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.links_checked > 0);
    }
}
