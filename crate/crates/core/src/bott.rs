//! Cohomology of homogeneous bundles on the two-step flag variety
//! Flag(1,2;E) by iterated Bott algorithm, the exterior-power decomposition
//! of the syzygy bundle, the resulting cohomology tables, and the degree
//! they compute.
//!
//! Conventions: every bundle is written as a Schur functor of the *dual* of
//! a tautological bundle, with weakly decreasing integer weights. For
//! cohomology on Gr(1, E) of S_a(R^v) (x) S_mu(Q^v), Bott's algorithm runs
//! on the concatenated weight (a | mu) with rho = (k-1, ..., 1, 0); the
//! output is S_dom(E^v) placed in the degree given by the inversion count.
//! This ordering (sub-weight first) is pinned by the two anchor outcomes
//! S_{0^{n-1},-1}E^v = E in degree 0 and S_{(-1)^n}E^v = wedge^n E in
//! degree n-1 for S_{-n}(R^v).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::field::FieldKind;
use crate::poly::Polynomial;
use crate::vars::{VarName, VariableSet};

/// An integer weight for GL_k; dominant means weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn zero(k: usize) -> Weight {
        Weight(vec![0; k])
    }
}

/// One step of Bott's algorithm: add rho = (k-1, ..., 1, 0), return None on a
/// repeat, otherwise sort decreasingly, counting the inversions, and
/// subtract rho. A dominant weight returns (0, itself).
pub fn bott_step(w: &Weight) -> Option<(usize, Weight)> {
    let k = w.rank();
    let mut v: Vec<i64> = w
        .0
        .iter()
        .enumerate()
        .map(|(i, &x)| x + (k - 1 - i) as i64)
        .collect();
    // detect repeats
    let mut sorted = v.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    // count inversions while sorting descending
    let mut inversions = 0usize;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] < v[j] {
            v.swap(j - 1, j);
            inversions += 1;
            j -= 1;
        }
    }
    let dom = Weight(
        v.into_iter()
            .enumerate()
            .map(|(i, x)| x - (k - 1 - i) as i64)
            .collect(),
    );
    Some((inversions, dom))
}

/// Weyl dimension formula: prod_{i<j} (l_i - l_j + j - i) / (j - i).
/// Valid for any dominant integer weight (determinant twists do not change
/// the dimension).
pub fn schur_dim(w: &Weight) -> BigUint {
    assert!(w.is_dominant(), "schur_dim needs a dominant weight");
    let k = w.rank();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        for j in (i + 1)..k {
            num *= BigInt::from(w.0[i] - w.0[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    let q = num / den;
    assert!(!q.is_negative());
    q.to_biguint().unwrap()
}

/// Pieri rule for a column: the summands of wedge^j V (x) S_mu V are the
/// dominant weights obtained from mu by adding a vertical strip of size j
/// (at most one box per row).
pub fn pieri_column(mu: &Weight, j: usize, rank: usize) -> Vec<Weight> {
    assert_eq!(mu.rank(), rank);
    assert!(mu.is_dominant());
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    fn rec(
        k: usize,
        left: usize,
        mu: &[i64],
        cur: &mut Vec<i64>,
        out: &mut Vec<Weight>,
    ) {
        if k == mu.len() {
            if left == 0 {
                out.push(Weight(cur.clone()));
            }
            return;
        }
        for add in 0..=1i64 {
            if add == 1 && left == 0 {
                continue;
            }
            let v = mu[k] + add;
            if k > 0 && v > cur[k - 1] {
                continue;
            }
            cur[k] = v;
            rec(k + 1, left - add as usize, mu, cur, out);
        }
    }
    rec(0, j, &mu.0, &mut cur, &mut out);
    out.sort();
    out.dedup();
    out
}

/// One cohomology contribution: total degree q and the weight of S_w(E^v).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomPiece {
    pub q: usize,
    pub weight: Weight,
}

impl CohomPiece {
    pub fn dim(&self) -> BigUint {
        schur_dim(&self.weight)
    }
}

/// H^q(Flag(1,2;E), S_a R1 (x) wedge^j Q_{n-1}^v (x) S_b (R2/R1)) for E of
/// rank n, computed by pushing down the relative Grassmannian Gr(1, Q_{n-1})
/// and then applying Bott on Gr(1, E). Returns every nonzero (q, weight).
pub fn cohomology_f(n: usize, a: usize, j: usize, b: usize) -> Vec<CohomPiece> {
    assert!(n >= 2);
    assert!(j < n);
    // stage 1: R^h of the relative Gr(1, Q_{n-1}) for S_b(R2/R1):
    // Bott weight (-b | 0^{n-2}) for GL(Q_{n-1}) with rho of length n-1
    let mut rel = vec![0i64; n - 1];
    rel[0] = -(b as i64);
    let Some((h, delta)) = bott_step(&Weight(rel)) else {
        return Vec::new();
    };
    // stage 2: merge wedge^j Q^v with S_delta Q^v by the column Pieri rule
    let merged = pieri_column(&delta, j, n - 1);
    // stage 3: Bott on Gr(1, E) for S_{-a}(R1^v) (x) S_lambda(Q^v)
    let mut out = Vec::new();
    for lambda in merged {
        let mut w = Vec::with_capacity(n);
        w.push(-(a as i64));
        w.extend_from_slice(&lambda.0);
        if let Some((l, dom)) = bott_step(&Weight(w)) {
            out.push(CohomPiece { q: h + l, weight: dom });
        }
    }
    out
}

/// Position of a summand of wedge^p xi' relative to the three blocks of the
/// exterior-power expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Extra {
    /// plain summand of wedge^p eta'
    None,
    /// from the R1 graded piece of the middle block
    R1,
    /// from the R2/R1 graded piece of the middle block
    R2OverR1,
    /// from wedge^{p-2} eta' (x) wedge^2 R2 = ... (x) R1 (x) R2/R1
    Wedge2R2,
}

/// A decomposable piece wedge^i E^v (x) Sym^a R1 (x) wedge^j Q_{n-1}^v (x)
/// Sym^b (R2/R1), with multiplicity binom(n, i).
#[derive(Clone, Debug, Serialize)]
pub struct BundleSummand {
    pub a: usize,
    pub j: usize,
    pub b: usize,
    pub mult: u64,
    pub extra: Extra,
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial fits in u64")
}

/// The summands of wedge^p xi' for xi' = eta' + R2, with eta' decomposed
/// over i + j = r and wedge^2 R2 rewritten as R1 (x) (R2/R1). The middle
/// block keeps its two graded pieces tagged, since only the alternating sum
/// over the connecting maps is determined.
pub fn xi_prime_decomposition(n: usize, p: usize) -> Vec<BundleSummand> {
    let mut out = Vec::new();
    let eta = |r: i64, extra: Extra, out: &mut Vec<BundleSummand>| {
        if r < 0 {
            return;
        }
        let r = r as usize;
        for i in 0..=n.min(r) {
            let j = r - i;
            if j > n - 1 {
                continue;
            }
            let (da, db) = match extra {
                Extra::None => (0, 0),
                Extra::R1 => (1, 0),
                Extra::R2OverR1 => (0, 1),
                Extra::Wedge2R2 => (1, 1),
            };
            out.push(BundleSummand {
                a: i + da,
                j,
                b: j + db,
                mult: binom(n, i),
                extra,
            });
        }
    };
    eta(p as i64, Extra::None, &mut out);
    eta(p as i64 - 1, Extra::R1, &mut out);
    eta(p as i64 - 1, Extra::R2OverR1, &mut out);
    eta(p as i64 - 2, Extra::Wedge2R2, &mut out);
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    /// contribution with a determined dimension
    pub certified: u64,
    /// equal-dimension amount shared with the neighbour degree whose
    /// connecting map is undetermined; cancels in the degree formula
    pub ambiguous: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub n: usize,
    /// (p, q) -> entry; only nonzero entries are stored
    pub entries: BTreeMap<(usize, usize), TableEntry>,
}

impl CohomologyTable {
    pub fn entry(&self, p: usize, q: usize) -> TableEntry {
        self.entries.get(&(p, q)).copied().unwrap_or_default()
    }
}

fn to_u64(b: &BigUint) -> u64 {
    use num_traits::ToPrimitive;
    b.to_u64().expect("table dimension fits in u64")
}

/// Assemble h^q(F, wedge^p xi') for all p, with the middle-block ambiguities
/// recorded as cancelling pairs.
pub fn cohomology_tables(n: usize) -> CohomologyTable {
    assert!(n >= 4, "the table analysis assumes n >= 4");
    let rank_xi = 2 * n + 1;
    let mut entries: BTreeMap<(usize, usize), TableEntry> = BTreeMap::new();
    for p in 0..=rank_xi {
        // certified blocks
        let mut cert: BTreeMap<usize, u64> = BTreeMap::new();
        // the two graded pieces of the middle block, kept separate
        let mut d1: BTreeMap<usize, u64> = BTreeMap::new();
        let mut d2: BTreeMap<usize, u64> = BTreeMap::new();
        for s in xi_prime_decomposition(n, p) {
            let mult = s.mult;
            for piece in cohomology_f(n, s.a, s.j, s.b) {
                let d = mult * to_u64(&piece.dim());
                let slot = match s.extra {
                    Extra::None | Extra::Wedge2R2 => &mut cert,
                    Extra::R1 => &mut d1,
                    Extra::R2OverR1 => &mut d2,
                };
                *slot.entry(piece.q).or_insert(0) += d;
            }
        }
        // long exact sequence bookkeeping for the middle block: the
        // connecting map H^q(R2/R1-piece) -> H^{q+1}(R1-piece) has unknown
        // rank r_q; equal amounts min(d2[q], d1[q+1]) at q and q+1 are
        // ambiguous, the rest is certified.
        let qs: Vec<usize> = d1.keys().chain(d2.keys()).copied().collect();
        for &q in &qs {
            let here_d1 = *d1.get(&q).unwrap_or(&0);
            let here_d2 = *d2.get(&q).unwrap_or(&0);
            let from_below = if q > 0 {
                (*d2.get(&(q - 1)).unwrap_or(&0)).min(here_d1)
            } else {
                0
            };
            let to_above = here_d2.min(*d1.get(&(q + 1)).unwrap_or(&0));
            let certified_amt = here_d1 + here_d2 - from_below - to_above;
            if certified_amt > 0 {
                *cert.entry(q).or_insert(0) += certified_amt;
            }
            if from_below > 0 || to_above > 0 {
                let e = entries.entry((p, q)).or_default();
                e.ambiguous += from_below + to_above;
            }
        }
        for (q, v) in cert {
            if v > 0 {
                let e = entries.entry((p, q)).or_default();
                e.certified += v;
            }
        }
    }
    entries.retain(|_, e| e.certified > 0 || e.ambiguous > 0);
    CohomologyTable { n, entries }
}

/// The degree computed from the table: sum over certified entries of
/// (-1)^(p-q) p^4 / 4! times the dimension. Ambiguous pair contributions
/// cancel (equal dimensions, adjacent degrees, fixed p).
pub fn klw_degree(n: usize) -> BigRational {
    let table = cohomology_tables(n);
    let mut acc = BigRational::zero();
    for (&(p, q), e) in &table.entries {
        if e.certified == 0 {
            continue;
        }
        let p4 = BigInt::from(p).pow(4);
        let sign = if (p as i64 - q as i64).rem_euclid(2) == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        acc += BigRational::new(sign * p4 * BigInt::from(e.certified), BigInt::from(24));
    }
    acc
}

/// The closed form the degree must match.
pub fn degree_formula(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from((n - 1) * n * (n + 1) * (3 * n - 2)))
        / BigRational::from_integer(BigInt::from(12))
}

/// The predicted maximal minor of the (l+1) x l nilpotent-block matrix
/// (y on the diagonal, 1 on the superdiagonal, a_1..a_l in the last row)
/// obtained by deleting row i:
/// (-y)^(l-i) (a_i y^(i-1) - a_{i-1} y^(i-2) + ... + (-1)^(i+1) a_1).
pub fn jordan_minor_expansion(l: usize, i: usize) -> Polynomial {
    assert!((1..=l).contains(&i));
    let vars = VariableSet::y_a_ring(l);
    let field = FieldKind::Q;
    let y = Polynomial::var_named(&vars, VarName::Y, field);
    let mut inner = Polynomial::zero(&vars);
    for k in 1..=i {
        let ak = Polynomial::var_named(&vars, VarName::A(k as u16), field);
        let term = ak.mul(&y.pow((k - 1) as u32));
        if (i - k).is_multiple_of(2) {
            inner = inner.add(&term);
        } else {
            inner = inner.sub(&term);
        }
    }
    let minus_y = y.neg();
    minus_y.pow((l - i) as u32).mul(&inner)
}

/// The matrix the expansion describes, for cross-checking by a symbolic
/// determinant.
pub fn jordan_block_matrix(l: usize) -> Vec<Vec<Polynomial>> {
    let vars = VariableSet::y_a_ring(l);
    let field = FieldKind::Q;
    let y = Polynomial::var_named(&vars, VarName::Y, field);
    let mut m = vec![vec![Polynomial::zero(&vars); l]; l + 1];
    for r in 0..l {
        m[r][r] = y.clone();
        if r + 1 < l {
            m[r][r + 1] = Polynomial::one(&vars, field);
        }
    }
    for c in 0..l {
        m[l][c] = Polynomial::var_named(&vars, VarName::A((c + 1) as u16), field);
    }
    m
}
