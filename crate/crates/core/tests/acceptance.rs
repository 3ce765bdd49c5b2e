//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its timing. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines; every tolerance is exact.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;

use nesthilb::bott::{cohomology_tables, klw_degree};
use nesthilb::deform::{cleave_family, cleave_pair, reducible_search};
use nesthilb::field::FieldKind;
use nesthilb::groebner::{ideal_eq, Budget};
use nesthilb::hilbert::hilbert_of_monomial;
use nesthilb::homology::{reduced_homology, reisner_check, Coefficients, DEFAULT_FACE_BUDGET};
use nesthilb::nest::{
    build_setup, claimed_gb, fiber_initial_check, hilbert_agreement, ideal_fiber_closed_form,
    ideal_fiber_division, intermediate_initial_check,
};
use nesthilb::oracle::{oracle_equivalence_jordan_exhaustive, oracle_equivalence_random};
use nesthilb::order::TermOrder;
use nesthilb::poly::Polynomial;
use nesthilb::srcomplex::{c_facet_count_formula, c_facets, verify_counts, SimplicialComplex};
use nesthilb::tangent::{tangent_dim, PairPoint};
use nesthilb::vars::VariableSet;

fn pq(s: &str) -> Polynomial {
    Polynomial::parse(s, &VariableSet::xy(), FieldKind::Q).unwrap()
}

fn report(criterion: usize, name: &str, pass: bool, t: Instant, detail: &str) {
    println!(
        "acceptance {:2} [{}] {} ({:?}) {}",
        criterion,
        name,
        if pass { "PASS" } else { "FAIL" },
        t.elapsed(),
        detail
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_facet_counts() {
    let t = Instant::now();
    let mut detail = String::new();
    let mut pass = true;
    for n in 2..=8usize {
        let rep = verify_counts(n);
        let expect = c_facet_count_formula(n as u64);
        pass &= rep.pass && rep.total as u64 == expect;
        detail.push_str(&format!("n={n}:{} ", rep.total));
    }
    pass &= t.elapsed().as_secs() < 60;
    report(1, "facet counts", pass, t, &detail);
}

#[test]
fn criterion_02_groebner_verification() {
    let t = Instant::now();
    let budget = Budget::default();
    let mut pass = true;
    let mut detail = String::new();
    // full Buchberger at n = 2, 3
    let t_small = Instant::now();
    for n in [2usize, 3] {
        let setup = build_setup(n);
        let fiber = ideal_fiber_division(&setup).unwrap();
        let rep = fiber_initial_check(&setup, &fiber, &budget).unwrap();
        pass &= rep.matches;
        detail.push_str(&format!("in(J)|n={n}:{} ", rep.matches));
    }
    pass &= t_small.elapsed().as_secs() < 30;
    // claimed basis at n = 4: S-pairs + leading monomials generate the
    // squarefree ideal
    let t4 = Instant::now();
    let setup = build_setup(4);
    let fiber = ideal_fiber_closed_form(&setup);
    let rep = claimed_gb(&setup, &fiber, &budget).unwrap();
    pass &= rep.pass && t4.elapsed().as_secs() < 600;
    detail.push_str(&format!(
        "claimed|n=4 spairs:{} lm:{}",
        rep.spair_pass, rep.lm_set_matches
    ));
    report(2, "groebner verification", pass, t, &detail);
}

#[test]
fn criterion_03_route_equivalence() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=6usize {
        let setup = build_setup(n);
        let division = ideal_fiber_division(&setup).unwrap();
        let closed = ideal_fiber_closed_form(&setup);
        let ok = division.f == closed.f && division.f_cap == closed.f_cap;
        pass &= ok;
        detail.push_str(&format!("n={n}:{ok} "));
    }
    pass &= t.elapsed().as_secs() < 60;
    report(3, "route equivalence", pass, t, &detail);
}

#[test]
fn criterion_04_degree_triple_agreement() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 4..=8usize {
        let expect = BigRational::from_integer(BigInt::from(c_facet_count_formula(n as u64)));
        let degree = klw_degree(n);
        let facets = c_facets(n).len();
        let a_ring = VariableSet::matrix_ring(n);
        let k = nesthilb::srcomplex::k_generators(n).monomials(&a_ring);
        let h = hilbert_of_monomial(&k, a_ring.len(), 0);
        let ok = degree == expect
            && BigInt::from(facets) == *expect.numer()
            && h.multiplicity == *expect.numer()
            && h.codim == 4;
        pass &= ok;
        detail.push_str(&format!("n={n}:{} ", expect.numer()));
    }
    pass &= t.elapsed().as_secs() < 300;
    report(4, "degree triple agreement", pass, t, &detail);
}

#[test]
fn criterion_05_cohomology_tables() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 4..=8usize {
        let table = cohomology_tables(n);
        let ch2 = (n * (n - 1) / 2) as u64;
        let nn = n as u64;
        // the certified support and values of the final table; the last row
        // sits at (2n+1, 2n-3), as the sign bookkeeping of the degree
        // computation requires
        let expected: Vec<((usize, usize), u64)> = vec![
            ((0, 0), 1),
            ((n - 1, n - 2), 1 + nn),
            ((n, n - 1), 1),
            ((n + 1, n - 1), nn),
            ((2 * n - 2, 2 * n - 4), nn + ch2),
            ((2 * n - 1, 2 * n - 3), 1),
            ((2 * n - 1, 2 * n - 4), ch2),
            ((2 * n, 2 * n - 3), nn + ch2),
            ((2 * n + 1, 2 * n - 3), ch2),
        ];
        let mut ok = true;
        for &((p, q), dim) in &expected {
            ok &= table.entry(p, q).certified == dim;
        }
        // ambiguous cancelling pairs at (n, n-2)/(n, n-1) and
        // (2n-1, 2n-4)/(2n-1, 2n-3), with equal dimensions
        for (a, b) in [((n, n - 2), (n, n - 1)), ((2 * n - 1, 2 * n - 4), (2 * n - 1, 2 * n - 3))] {
            let ea = table.entry(a.0, a.1).ambiguous;
            let eb = table.entry(b.0, b.1).ambiguous;
            ok &= ea == eb && ea == nn;
        }
        // zero elsewhere
        let allowed: std::collections::BTreeSet<(usize, usize)> =
            expected.iter().map(|&(pq, _)| pq).collect();
        for (&(p, q), e) in &table.entries {
            if e.certified > 0 {
                ok &= allowed.contains(&(p, q));
                ok &= p >= q;
            }
        }
        pass &= ok;
        detail.push_str(&format!("n={n}:{ok} "));
    }
    report(5, "cohomology tables", pass, t, &detail);
}

#[test]
fn criterion_06_oracle_equivalence() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in [4usize, 5] {
        let bad = oracle_equivalence_random(n, 32003, 0, 1000);
        pass &= bad.is_empty();
        detail.push_str(&format!("random n={n}:{} ", 1000 - bad.len()));
    }
    let mismatches = oracle_equivalence_jordan_exhaustive(4, 2);
    pass &= mismatches == 0;
    detail.push_str(&format!("jordan-f2 mismatches:{mismatches}"));
    pass &= t.elapsed().as_secs() < 120;
    report(6, "oracle equivalence", pass, t, &detail);
}

#[test]
fn criterion_07_tangent_dimensions() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    let p = PairPoint::new(vec![pq("x^2"), pq("y^2")], vec![pq("x"), pq("y^2")]).unwrap();
    let d = tangent_dim(&p).unwrap();
    pass &= d == 8;
    detail.push_str(&format!("square:{d} "));
    for r in [3u32, 4, 5] {
        let p = PairPoint::new(
            vec![pq("x"), pq(&format!("y^{r}"))],
            vec![pq("x"), pq("y^2")],
        )
        .unwrap();
        let d = tangent_dim(&p).unwrap();
        pass &= d == 2 * r as usize;
        detail.push_str(&format!("curvilinear r={r}:{d} "));
    }
    let p = PairPoint::new(
        vec![pq("x^2"), pq("x*y"), pq("y^2")],
        vec![pq("x"), pq("y")],
    )
    .unwrap();
    let d = tangent_dim(&p).unwrap();
    pass &= d > 6;
    detail.push_str(&format!("fat-over-point:{d}>6"));
    pass &= t.elapsed().as_secs() < 30;
    report(7, "tangent dimensions", pass, t, &detail);
}

#[test]
fn criterion_08_hilbert_function_agreement() {
    let t = Instant::now();
    let budget = Budget::default();
    let mut pass = true;
    let mut detail = String::new();
    for n in [2usize, 3] {
        let setup = build_setup(n);
        let fiber = ideal_fiber_division(&setup).unwrap();
        let ok = hilbert_agreement(&setup, &fiber, 2 * n, &budget).unwrap();
        pass &= ok;
        detail.push_str(&format!("n={n} to degree {}:{ok} ", 2 * n));
    }
    report(8, "hilbert functions", pass, t, &detail);
}

#[test]
fn criterion_09_intermediate_initial_ideals() {
    let t = Instant::now();
    let budget = Budget::default();
    let mut pass = true;
    let mut detail = String::new();
    for n in [2usize, 3] {
        for j in 1..=4usize {
            let rep = intermediate_initial_check(n, j, &budget).unwrap();
            pass &= rep.pass;
            detail.push_str(&format!("n={n},j={j}:{} ", rep.pass));
        }
    }
    pass &= t.elapsed().as_secs() < 300;
    report(9, "intermediate initial ideals", pass, t, &detail);
}

#[test]
fn criterion_10_cleaving() {
    let t = Instant::now();
    let budget = Budget::default();
    let order = TermOrder::grevlex(2);
    let mut pass = true;
    let mut detail = String::new();
    // detaching families for (x, y^r): constructor verifies colength
    // constancy and the t != 0 intersection identity on samples
    for r in 2..=5u32 {
        let i = vec![pq("x"), pq(&format!("y^{r}"))];
        let fam = cleave_family(&i, &pq("x"), &pq("y"), &budget);
        let ok = fam.is_ok();
        pass &= ok;
        detail.push_str(&format!("family r={r}:{ok} "));
    }
    // the two pinned pair cases
    let p1 = cleave_pair(&[pq("x"), pq("y^3")], &[pq("x"), pq("y^2")], &budget).unwrap();
    let ok1 = p1.report.case == "ord-1"
        && ideal_eq(
            &p1.fam_j.specialize(1),
            &[pq("x"), pq("y^2 - y")],
            &order,
            &budget,
        )
        .unwrap();
    pass &= ok1;
    detail.push_str(&format!("pair-ord1:{ok1} "));
    let p2 = cleave_pair(
        &[pq("x^2"), pq("x*y"), pq("y^2")],
        &[pq("x"), pq("y^2")],
        &budget,
    )
    .unwrap();
    let ok2 = p2.report.case == "fat-point"
        && ideal_eq(
            &p2.fam_i.specialize(1),
            &[pq("x^2"), pq("x*y - x"), pq("y^2 - y")],
            &order,
            &budget,
        )
        .unwrap()
        && p2.report.samples_checked.len() == 3;
    pass &= ok2;
    detail.push_str(&format!("pair-fat:{ok2}"));
    report(10, "cleaving", pass, t, &detail);
}

#[test]
fn criterion_11_reducibility_search() {
    let t = Instant::now();
    let w = reducible_search(5);
    let pass = w.r == 19 && w.dim_g == 363 && w.bound == 361 && t.elapsed().as_secs() < 1;
    report(
        11,
        "reducibility search",
        pass,
        t,
        &format!("r={} dim={}>{}", w.r, w.dim_g, w.bound),
    );
}

#[test]
fn criterion_12_homology_experiments() {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in [2usize, 3] {
        let complex = SimplicialComplex::grid_complex(n);
        let rep = reisner_check(&complex, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        pass &= rep.pass;
        detail.push_str(&format!("reisner-Q n={n}:{} ", rep.pass));
        // positive characteristic: run and report, no theorem asserted
        for p in [2u64, 3] {
            let rep_p = reisner_check(&complex, Coefficients::Fp(p), DEFAULT_FACE_BUDGET).unwrap();
            detail.push_str(&format!("char{p} n={n}:{} ", rep_p.pass));
        }
        // top-level homology is consistent with the face counts
        let h = reduced_homology(&complex, Coefficients::Q, DEFAULT_FACE_BUDGET).unwrap();
        pass &= h.euler_ok;
    }
    pass &= t.elapsed().as_secs() < 300;
    report(12, "homology experiments", pass, t, &detail);
}
