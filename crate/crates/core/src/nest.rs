//! The Hilbert-Burch family around a compressed pair: the matrices X, Y, W,
//! the minors of X + zW, the two remainder-coefficient ideals produced by the
//! division algorithm, the closed-form minor description of the fiber ideal,
//! leading-monomial verification under the antidiagonal order, the claimed
//! squarefree Groebner basis, and the intermediate initial-ideal checks.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::field::FieldKind;
use crate::groebner::{
    buchberger, divide, initial_ideal, is_groebner, reduces_to_zero, Budget, GbCheck,
    GroebnerError,
};
use crate::monomial::{minimize_monomials, Monomial};
use crate::order::{deg2_weights, family_bigrading, tail_ring_order, TermOrder};
use crate::poly::{Bidegree, PolyError, Polynomial};
use crate::srcomplex::k_generators;
use crate::vars::{VarName, VariableSet};

#[derive(Debug, Error)]
pub enum NestError {
    #[error("division remainder has unexpected shape: {0}")]
    RemainderShape(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Determinant of a square matrix of polynomials, by column-expansion
/// dynamic programming over row subsets.
pub fn poly_det(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    assert!(m.iter().all(|r| r.len() == k), "determinant of a non-square matrix");
    let vars = if k == 0 {
        panic!("empty determinant needs a ring; use poly_det_in");
    } else {
        m[0][0].vars().clone()
    };
    poly_det_in(m, &vars)
}

/// Determinant with an explicit ring, so the empty matrix yields 1.
pub fn poly_det_in(m: &[Vec<Polynomial>], vars: &Arc<VariableSet>) -> Polynomial {
    let k = m.len();
    let field = m
        .iter()
        .flat_map(|r| r.iter())
        .find_map(|p| p.field_kind())
        .unwrap_or(FieldKind::Q);
    if k == 0 {
        return Polynomial::one(vars, field);
    }
    assert!(k <= 20);
    let full = (1usize << k) - 1;
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << k];
    dp[0] = Some(Polynomial::one(vars, field));
    for mask in 1usize..=(full) {
        let col = (mask.count_ones() - 1) as usize;
        let mut acc = Polynomial::zero(vars);
        let mut idx = 0usize;
        for r in 0..k {
            if mask & (1 << r) == 0 {
                continue;
            }
            let sub = dp[mask ^ (1 << r)].as_ref().expect("dp order");
            if !m[r][col].is_zero() && !sub.is_zero() {
                let term = m[r][col].mul(sub);
                if (idx + col).is_multiple_of(2) {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
            idx += 1;
        }
        dp[mask] = Some(acc);
    }
    dp[full].take().unwrap()
}

/// The universal-family data for a given n: the rings, the structured
/// matrices, and the two quadric/linear family generators.
pub struct Setup {
    pub n: usize,
    /// k\[x,y,z,w,v\]
    pub t_ring: Arc<VariableSet>,
    /// k\[w\]
    pub a_ring: Arc<VariableSet>,
    /// k\[w,v\]
    pub b_ring: Arc<VariableSet>,
    /// bigraded-lex order on the family ring
    pub order_t: TermOrder,
    /// antidiagonal grevlex on the matrix ring
    pub order_a: TermOrder,
    pub deg1: Vec<i64>,
    pub deg2: Vec<i64>,
    /// (n+1) x n, y on the diagonal, -x on the subdiagonal
    pub x_mat: Vec<Vec<Polynomial>>,
    /// x_mat with x set to 0
    pub y_mat: Vec<Vec<Polynomial>>,
    /// generic entries w_{i,j}
    pub w_mat: Vec<Vec<Polynomial>>,
    /// x_mat + z * w_mat
    pub xzw_mat: Vec<Vec<Polynomial>>,
    /// x + v1 y + v2 z
    pub gamma1: Polynomial,
    /// y^2 + v3 y z + v4 z^2
    pub gamma2: Polynomial,
}

pub fn build_setup(n: usize) -> Setup {
    assert!(n >= 1);
    let t_ring = VariableSet::family_ring(n);
    let a_ring = VariableSet::matrix_ring(n);
    let b_ring = VariableSet::matrix_v_ring(n);
    let order_t = TermOrder::bigraded_lex(&t_ring);
    let order_a = tail_ring_order(&a_ring);
    let (deg1, deg2) = family_bigrading(&t_ring);
    let field = FieldKind::Q;
    let var = |name: VarName| Polynomial::var_named(&t_ring, name, field);
    let x = var(VarName::X);
    let y = var(VarName::Y);
    let z = var(VarName::Z);
    let mut x_mat = vec![vec![Polynomial::zero(&t_ring); n]; n + 1];
    let mut y_mat = vec![vec![Polynomial::zero(&t_ring); n]; n + 1];
    for j in 0..n {
        x_mat[j][j] = y.clone();
        x_mat[j + 1][j] = x.neg();
        y_mat[j][j] = y.clone();
    }
    let mut w_mat = vec![vec![Polynomial::zero(&t_ring); n]; n + 1];
    let mut xzw_mat = vec![vec![Polynomial::zero(&t_ring); n]; n + 1];
    for i in 0..=n {
        for j in 0..n {
            let w = var(VarName::W((i + 1) as u16, (j + 1) as u16));
            w_mat[i][j] = w.clone();
            xzw_mat[i][j] = x_mat[i][j].add(&z.mul(&w));
        }
    }
    let gamma1 = x.add(&var(VarName::V(1)).mul(&y)).add(&var(VarName::V(2)).mul(&z));
    let gamma2 = y
        .mul(&y)
        .add(&var(VarName::V(3)).mul(&y).mul(&z))
        .add(&var(VarName::V(4)).mul(&z).mul(&z));
    Setup {
        n,
        t_ring,
        a_ring,
        b_ring,
        order_t,
        order_a,
        deg1,
        deg2,
        x_mat,
        y_mat,
        w_mat,
        xzw_mat,
        gamma1,
        gamma2,
    }
}

impl Setup {
    /// Maximal minor of x_mat + z*w_mat with the given row deleted (0-based).
    pub fn delta(&self, deleted_row: usize) -> Polynomial {
        let rows: Vec<Vec<Polynomial>> = self
            .xzw_mat
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != deleted_row)
            .map(|(_, r)| r.clone())
            .collect();
        poly_det(&rows)
    }

    /// All n+1 maximal minors, delta_1 .. delta_{n+1}.
    pub fn delta_minors(&self) -> Vec<Polynomial> {
        (0..=self.n).map(|i| self.delta(i)).collect()
    }

    /// Maximal minors of the undeformed matrix (they generate (x,y)^n).
    pub fn x_minors(&self) -> Vec<Polynomial> {
        (0..=self.n)
            .map(|i| {
                let rows: Vec<Vec<Polynomial>> = self
                    .x_mat
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, r)| r.clone())
                    .collect();
                poly_det(&rows)
            })
            .collect()
    }

    /// Minor of the generic matrix on the given 1-based row/column index
    /// sets, as a polynomial of the matrix ring.
    pub fn w_minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        let field = FieldKind::Q;
        let m: Vec<Vec<Polynomial>> = rows
            .iter()
            .map(|&i| {
                cols.iter()
                    .map(|&j| {
                        Polynomial::var_named(
                            &self.a_ring,
                            VarName::W(i as u16, j as u16),
                            field,
                        )
                    })
                    .collect()
            })
            .collect();
        poly_det_in(&m, &self.a_ring)
    }

    /// det of the square submatrix of the generic matrix with row i deleted.
    pub fn w_minor_delete_row(&self, i: usize) -> Polynomial {
        let rows: Vec<usize> = (1..=self.n + 1).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (1..=self.n).collect();
        self.w_minor(&rows, &cols)
    }

    /// Signed (n-1)-minor deleting rows i, j and column k, with
    /// antisymmetry in (i, j) and zero on the diagonal.
    pub fn w_minor_delete_two(&self, i: usize, j: usize, k: usize) -> Polynomial {
        if i == j {
            return Polynomial::zero(&self.a_ring);
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let rows: Vec<usize> = (1..=self.n + 1).filter(|&r| r != a && r != b).collect();
        let cols: Vec<usize> = (1..=self.n).filter(|&c| c != k).collect();
        let d = self.w_minor(&rows, &cols);
        if flip {
            d.neg()
        } else {
            d
        }
    }
}

/// Remainder coefficients of one minor: the coefficient of y z^(n-1) and of
/// z^n, as polynomials of the target ring.
fn split_remainder(
    setup: &Setup,
    remainder: &Polynomial,
    target: &Arc<VariableSet>,
) -> Result<(Polynomial, Polynomial), NestError> {
    let n = setup.n as u32;
    let t = &setup.t_ring;
    let kx = t.position(VarName::X).unwrap();
    let ky = t.position(VarName::Y).unwrap();
    let kz = t.position(VarName::Z).unwrap();
    let mut g_terms = Vec::new();
    let mut cap_terms = Vec::new();
    for (m, c) in remainder.terms() {
        if m.exp(kx) != 0 || m.exp(ky) >= 2 {
            return Err(NestError::RemainderShape(format!(
                "term divisible by x or y^2 in remainder: {}",
                remainder
            )));
        }
        let mut stripped = m.clone();
        stripped.0[kx] = 0;
        stripped.0[ky] = 0;
        stripped.0[kz] = 0;
        if m.exp(ky) == 1 && m.exp(kz) == n - 1 {
            g_terms.push((stripped, c.clone()));
        } else if m.exp(ky) == 0 && m.exp(kz) == n {
            cap_terms.push((stripped, c.clone()));
        } else {
            return Err(NestError::RemainderShape(format!(
                "term not of the form y z^{} or z^{}",
                n - 1,
                n
            )));
        }
    }
    let g = Polynomial::from_terms(t, g_terms).map_to(target)?;
    let cap = Polynomial::from_terms(t, cap_terms).map_to(target)?;
    Ok((g, cap))
}

/// Generators of the neighborhood ideal: the remainders of the minors modulo
/// the two family generators, split as g_i * y z^(n-1) + G_i * z^n.
pub struct LIdeal {
    /// g_1 .. g_{n+1}, degree (0, n-1) in the bigrading
    pub g: Vec<Polynomial>,
    /// G_1 .. G_{n+1}, degree (0, n)
    pub g_cap: Vec<Polynomial>,
}

impl LIdeal {
    pub fn gens(&self) -> Vec<Polynomial> {
        self.g.iter().chain(self.g_cap.iter()).cloned().collect()
    }
}

pub fn ideal_l(setup: &Setup) -> Result<LIdeal, NestError> {
    let divisors = [setup.gamma1.clone(), setup.gamma2.clone()];
    let mut g = Vec::new();
    let mut g_cap = Vec::new();
    for i in 0..=setup.n {
        let delta = setup.delta(i);
        // the division is bigraded, so the remainder must be too
        debug_assert_eq!(
            delta.bidegree(&setup.deg1, &setup.deg2),
            Bidegree::Of(setup.n as i64, setup.n as i64)
        );
        let d = divide(&delta, &divisors, &setup.order_t);
        let (gi, gcapi) = split_remainder(setup, &d.remainder, &setup.b_ring)?;
        g.push(gi);
        g_cap.push(gcapi);
    }
    Ok(LIdeal { g, g_cap })
}

/// Generators of the fiber ideal via the division route: remainders of the
/// minors modulo {x, y^2}.
pub struct FiberIdeal {
    /// f_1 .. f_{n+1}
    pub f: Vec<Polynomial>,
    /// F_1 .. F_{n+1}
    pub f_cap: Vec<Polynomial>,
}

impl FiberIdeal {
    pub fn gens(&self) -> Vec<Polynomial> {
        self.f.iter().chain(self.f_cap.iter()).cloned().collect()
    }
}

pub fn ideal_fiber_division(setup: &Setup) -> Result<FiberIdeal, NestError> {
    let field = FieldKind::Q;
    let x = Polynomial::var_named(&setup.t_ring, VarName::X, field);
    let y = Polynomial::var_named(&setup.t_ring, VarName::Y, field);
    let divisors = [x, y.mul(&y)];
    let mut f = Vec::new();
    let mut f_cap = Vec::new();
    for i in 0..=setup.n {
        let delta = setup.delta(i);
        let d = divide(&delta, &divisors, &setup.order_t);
        let (fi, fcapi) = split_remainder(setup, &d.remainder, &setup.a_ring)?;
        f.push(fi);
        f_cap.push(fcapi);
    }
    Ok(FiberIdeal { f, f_cap })
}

/// The closed form: F_i is the maximal minor deleting row i, and f_i is the
/// signed sum over h of the minors deleting rows {h, i} and column h.
pub fn ideal_fiber_closed_form(setup: &Setup) -> FiberIdeal {
    let mut f = Vec::new();
    let mut f_cap = Vec::new();
    for i in 1..=setup.n + 1 {
        f_cap.push(setup.w_minor_delete_row(i));
        let mut acc = Polynomial::zero(&setup.a_ring);
        for h in 1..=setup.n {
            acc = acc.add(&setup.w_minor_delete_two(h, i, h));
        }
        f.push(acc);
    }
    FiberIdeal { f, f_cap }
}

/// The generator of the squarefree monomial ideal predicted as LM(f_h).
pub fn monomial_x(setup: &Setup, h: usize) -> Monomial {
    grid_monomial(setup, &k_generators(setup.n).x[h - 2])
}

pub fn monomial_y(setup: &Setup, h: usize) -> Monomial {
    grid_monomial(setup, &k_generators(setup.n).y[h - 2])
}

pub fn monomial_z(setup: &Setup, h: usize) -> Monomial {
    grid_monomial(setup, &k_generators(setup.n).z[h - 3])
}

fn grid_monomial(setup: &Setup, sup: &[(u16, u16)]) -> Monomial {
    let mut e = vec![0u32; setup.a_ring.len()];
    for &(i, j) in sup {
        e[setup.a_ring.position(VarName::W(i, j)).unwrap()] += 1;
    }
    Monomial(e)
}

/// The n-2 extra basis elements whose leading monomials realize z_3 .. z_n.
pub fn z_combinations(setup: &Setup, fiber: &FiberIdeal) -> Vec<Polynomial> {
    let n = setup.n;
    let mut out = Vec::new();
    for h in 3..=n {
        let rows: Vec<usize> = (h + 1..=n + 1).collect();
        let cols1: Vec<usize> = (2..=n - h + 2).collect();
        let mut cols2: Vec<usize> = vec![1];
        cols2.extend(3..=n - h + 2);
        let m1 = setup.w_minor(&rows, &cols1);
        let m2 = setup.w_minor(&rows, &cols2);
        out.push(fiber.f[0].mul(&m1).add(&fiber.f[1].mul(&m2)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingMonomialReport {
    pub n: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

/// Verify the antidiagonal leading monomials: LM(f_h) = x_h and
/// LM(F_h) = y_h for h = 2..n+1, LM(f_1) = z_{n+1}, and the z_h combination
/// identities for h = 3..n.
pub fn check_leading_monomials(setup: &Setup, fiber: &FiberIdeal) -> LeadingMonomialReport {
    let n = setup.n;
    assert!(n >= 2);
    let mut failures = Vec::new();
    let mut check = |label: String, poly: &Polynomial, expect: Monomial| {
        match poly.leading_monomial(&setup.order_a) {
            Ok(lm) if lm == expect => {}
            Ok(lm) => failures.push(format!("{label}: got {:?}, want {:?}", lm, expect)),
            Err(_) => failures.push(format!("{label}: zero polynomial")),
        }
    };
    for h in 2..=n + 1 {
        check(format!("LM(f_{h})"), &fiber.f[h - 1], monomial_x(setup, h));
        check(format!("LM(F_{h})"), &fiber.f_cap[h - 1], monomial_y(setup, h));
    }
    check("LM(f_1)".to_string(), &fiber.f[0], monomial_z(setup, n + 1));
    let combos = z_combinations(setup, fiber);
    for (k, combo) in combos.iter().enumerate() {
        let h = k + 3;
        check(format!("LM(combo_{h})"), combo, monomial_z(setup, h));
    }
    let pass = failures.is_empty();
    LeadingMonomialReport { n, failures, pass }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimedGbReport {
    pub n: usize,
    pub spair_pass: bool,
    pub spair_witness: Option<(usize, usize)>,
    pub lm_set_matches: bool,
    pub redundant_minor_reduces: bool,
    pub pass: bool,
}

/// Assemble {f_1..f_{n+1}, F_2..F_{n+1}, combinations} and verify it is a
/// Groebner basis whose leading monomials generate the squarefree ideal;
/// also confirm the omitted minor F_1 reduces to zero against it.
pub fn claimed_gb(setup: &Setup, fiber: &FiberIdeal, budget: &Budget) -> Result<ClaimedGbReport, NestError> {
    let n = setup.n;
    let mut gens: Vec<Polynomial> = fiber.f.clone();
    gens.extend(fiber.f_cap[1..].iter().cloned());
    gens.extend(z_combinations(setup, fiber));
    let check = is_groebner(&gens, &setup.order_a, budget)?;
    let (spair_pass, spair_witness) = match check {
        GbCheck::Pass => (true, None),
        GbCheck::Fail(f) => (false, Some((f.i, f.j))),
    };
    let mut lms: Vec<Monomial> = Vec::new();
    for g in &gens {
        lms.push(g.leading_monomial(&setup.order_a)?);
    }
    let lms = minimize_monomials(&lms);
    let mut expected = k_generators(n).monomials(&setup.a_ring);
    expected = minimize_monomials(&expected);
    let lm_set_matches = lms == expected;
    let redundant_minor_reduces = if spair_pass {
        reduces_to_zero(&fiber.f_cap[0], &gens, &setup.order_a)
    } else {
        false
    };
    let pass = spair_pass && lm_set_matches && redundant_minor_reduces;
    Ok(ClaimedGbReport { n, spair_pass, spair_witness, lm_set_matches, redundant_minor_reduces, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct InitialIdealReport {
    pub n: usize,
    pub matches: bool,
    pub computed: Vec<String>,
    pub expected: Vec<String>,
}

/// Full Buchberger check that the initial ideal of the fiber ideal is the
/// squarefree monomial ideal.
pub fn fiber_initial_check(setup: &Setup, fiber: &FiberIdeal, budget: &Budget) -> Result<InitialIdealReport, NestError> {
    let init = initial_ideal(&fiber.gens(), &setup.order_a, budget)?;
    let expected = minimize_monomials(&k_generators(setup.n).monomials(&setup.a_ring));
    let fmt = |ms: &[Monomial]| {
        ms.iter()
            .map(|m| {
                Polynomial::term(&setup.a_ring, m.clone(), FieldKind::Q.one()).to_string()
            })
            .collect::<Vec<_>>()
    };
    Ok(InitialIdealReport {
        n: setup.n,
        matches: init == expected,
        computed: fmt(&init),
        expected: fmt(&expected),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IntermediateReport {
    pub n: usize,
    pub j: usize,
    pub initial_matches: bool,
    pub deg2_homogeneous: bool,
    pub pass: bool,
}

/// Initial-ideal check for the intermediate quotients: kill v_1..v_j in the
/// neighborhood ideal and compare the initial ideal (grevlex, v's smallest)
/// with the extended squarefree ideal.
pub fn intermediate_initial_check(
    n: usize,
    j: usize,
    budget: &Budget,
) -> Result<IntermediateReport, NestError> {
    assert!((1..=4).contains(&j));
    let setup = build_setup(n);
    let l = ideal_l(&setup)?;
    let bj = VariableSet::matrix_v_tail_ring(n, j);
    let field = FieldKind::Q;
    let zero = Polynomial::constant(&setup.b_ring, field.zero());
    let mut gens: Vec<Polynomial> = Vec::new();
    for gen in l.gens() {
        let mut cur = gen;
        for h in 1..=j {
            let k = setup.b_ring.position(VarName::V(h as u8)).unwrap();
            cur = cur.substitute(k, &zero);
        }
        if !cur.is_zero() {
            gens.push(cur.map_to(&bj)?);
        }
    }
    let order = tail_ring_order(&bj);
    let weights = deg2_weights(&bj);
    let deg2_homogeneous = gens.iter().all(|g| g.is_homogeneous_weighted(&weights));
    let init = initial_ideal(&gens, &order, budget)?;
    let expected_in_a = minimize_monomials(&k_generators(n).monomials(&setup.a_ring));
    let expected: Vec<Monomial> = expected_in_a
        .iter()
        .map(|m| {
            Polynomial::term(&setup.a_ring, m.clone(), field.one())
                .map_to(&bj)
                .unwrap()
                .terms()
                .next()
                .unwrap()
                .0
                .clone()
        })
        .collect();
    let expected = minimize_monomials(&expected);
    let initial_matches = init == expected;
    Ok(IntermediateReport {
        n,
        j,
        initial_matches,
        deg2_homogeneous,
        pass: initial_matches && deg2_homogeneous,
    })
}

/// Hilbert-function comparison between the fiber ideal and its predicted
/// (squarefree) initial ideal, degree by degree up to the cutoff.
pub fn hilbert_agreement(
    setup: &Setup,
    fiber: &FiberIdeal,
    cutoff: usize,
    budget: &Budget,
) -> Result<bool, NestError> {
    use crate::hilbert::{hilbert, hilbert_of_monomial};
    let h_ideal = hilbert(&fiber.gens(), &setup.order_a, cutoff, budget)
        .map_err(|e| match e {
            crate::hilbert::HilbertError::Groebner(g) => NestError::Groebner(g),
            crate::hilbert::HilbertError::NonHomogeneous => {
                NestError::RemainderShape("fiber ideal not homogeneous".into())
            }
        })?;
    let k_gens = k_generators(setup.n).monomials(&setup.a_ring);
    let h_mono = hilbert_of_monomial(&k_gens, setup.a_ring.len(), cutoff);
    Ok(h_ideal.dims == h_mono.dims)
}

pub fn buchberger_of_fiber(
    setup: &Setup,
    fiber: &FiberIdeal,
    budget: &Budget,
) -> Result<Vec<Polynomial>, GroebnerError> {
    buchberger(&fiber.gens(), &setup.order_a, budget)
}
