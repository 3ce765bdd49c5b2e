//! Pinned behaviour of the family ring: the bigraded order, leading terms of
//! the family generators, bidegrees, and the antidiagonal order on the
//! matrix ring.

use std::cmp::Ordering;

use nesthilb::field::FieldKind;
use nesthilb::monomial::Monomial;
use nesthilb::nest::build_setup;
use nesthilb::order::{tail_ring_order, TermOrder};
use nesthilb::poly::{Bidegree, Polynomial};
use nesthilb::vars::{VarName, VariableSet};

#[test]
fn bigraded_lex_orders_the_plane_variables() {
    let t = VariableSet::family_ring(2);
    let order = TermOrder::bigraded_lex(&t);
    let x = Monomial::var(t.len(), t.position(VarName::X).unwrap());
    let y = Monomial::var(t.len(), t.position(VarName::Y).unwrap());
    assert_eq!(order.compare(&x, &y), Ordering::Greater);
    assert_eq!(order.compare(&x, &x), Ordering::Equal);
}

#[test]
fn antidiagonal_order_degree_one() {
    // grevlex on w11 < w12 < ... : in degree one the highest variable wins
    let a = VariableSet::matrix_ring(2);
    let order = tail_ring_order(&a);
    let hi = Monomial::var(a.len(), a.position(VarName::W(3, 2)).unwrap());
    let lo = Monomial::var(a.len(), a.position(VarName::W(1, 1)).unwrap());
    assert_eq!(order.compare(&hi, &lo), Ordering::Greater);
    // brute-force cross-check on all degree-one pairs: later variables win
    for i in 0..a.len() {
        for j in 0..a.len() {
            let mi = Monomial::var(a.len(), i);
            let mj = Monomial::var(a.len(), j);
            assert_eq!(order.compare(&mi, &mj), i.cmp(&j));
        }
    }
}

#[test]
fn family_generator_leading_terms() {
    let s = build_setup(2);
    let lm1 = s.gamma1.leading_monomial(&s.order_t).unwrap();
    let lm2 = s.gamma2.leading_monomial(&s.order_t).unwrap();
    let kx = s.t_ring.position(VarName::X).unwrap();
    let ky = s.t_ring.position(VarName::Y).unwrap();
    assert_eq!(lm1, Monomial::var(s.t_ring.len(), kx));
    let mut y2 = Monomial::one(s.t_ring.len());
    y2.0[ky] = 2;
    assert_eq!(lm2, y2);
    // a single term is its own leading term
    let c = Polynomial::parse("7*v1*z^3", &s.t_ring, FieldKind::Q).unwrap();
    let (m, coef) = c.leading_term(&s.order_t).unwrap();
    assert_eq!(Polynomial::term(&s.t_ring, m, coef), c);
}

#[test]
fn leading_term_of_zero_is_an_error() {
    let t = VariableSet::xy();
    let zero = Polynomial::zero(&t);
    assert!(zero.leading_term(&TermOrder::grevlex(2)).is_err());
}

#[test]
fn gamma_product_term_count() {
    // direct-expansion oracle: multiply term by term and collect
    let s = build_setup(2);
    let product = s.gamma1.mul(&s.gamma2);
    let mut expected = std::collections::BTreeMap::new();
    for (m1, c1) in s.gamma1.terms() {
        for (m2, c2) in s.gamma2.terms() {
            let e = expected
                .entry(m1.mul(m2))
                .or_insert_with(|| FieldKind::Q.zero());
            *e = e.add(&c1.mul(c2));
        }
    }
    expected.retain(|_, c| !c.is_zero());
    assert_eq!(product.num_terms(), expected.len());
    // all nine products of the 3 x 3 terms stay distinct
    assert_eq!(product.num_terms(), 9);
}

#[test]
fn family_generators_are_a_groebner_basis() {
    use nesthilb::groebner::{is_groebner, Budget, GbCheck};
    // coprime leading monomials x and y^2
    let s = build_setup(3);
    let gens = [s.gamma1.clone(), s.gamma2.clone()];
    assert!(matches!(
        is_groebner(&gens, &s.order_t, &Budget::default()).unwrap(),
        GbCheck::Pass
    ));
}

#[test]
fn initial_ideal_of_monomial_input_is_minimized() {
    use nesthilb::groebner::{initial_ideal, Budget};
    let vars = VariableSet::xy();
    let gens = [
        Polynomial::parse("x^2", &vars, FieldKind::Q).unwrap(),
        Polynomial::parse("x^2*y", &vars, FieldKind::Q).unwrap(),
        Polynomial::parse("y^3", &vars, FieldKind::Q).unwrap(),
    ];
    let init = initial_ideal(&gens, &TermOrder::grevlex(2), &Budget::default()).unwrap();
    assert_eq!(init, vec![Monomial(vec![0, 3]), Monomial(vec![2, 0])]);
}

#[test]
fn squarefree_ideal_multiplicity_at_n2() {
    use nesthilb::hilbert::hilbert_of_monomial;
    use nesthilb::srcomplex::{c_facets, k_generators};
    // codimension 4, multiplicity 2; the minimal primes of maximal
    // dimension are exactly the two transversal-generated primes
    let a = VariableSet::matrix_ring(2);
    let gens = k_generators(2).monomials(&a);
    let h = hilbert_of_monomial(&gens, a.len(), 4);
    assert_eq!(h.codim, 4);
    assert_eq!(h.multiplicity, 2.into());
    // minimal-prime oracle: for a squarefree ideal the codimension-4
    // minimal primes are the size-4 minimal transversals
    let primes = c_facets(2);
    assert_eq!(primes.len(), 2);
    assert!(primes.iter().all(|p| p.len() == 4));
}

#[test]
fn bidegree_conventions() {
    let s = build_setup(2);
    let zero = Polynomial::zero(&s.t_ring);
    assert_eq!(zero.bidegree(&s.deg1, &s.deg2), Bidegree::Zero);
    let mixed = Polynomial::parse("x + w_1_1", &s.t_ring, FieldKind::Q).unwrap();
    assert_eq!(mixed.bidegree(&s.deg1, &s.deg2), Bidegree::Mixed);
    assert_eq!(s.gamma1.bidegree(&s.deg1, &s.deg2), Bidegree::Of(1, 1));
    assert_eq!(s.gamma2.bidegree(&s.deg1, &s.deg2), Bidegree::Of(2, 2));
}
