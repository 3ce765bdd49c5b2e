use std::time::Instant;
use nesthilb::groebner::Budget;
use nesthilb::nest::*;
use nesthilb::srcomplex::*;
use nesthilb::hilbert::hilbert_of_monomial;
use nesthilb::vars::VariableSet;

fn main() {
    let budget = Budget::default();
    let t0 = Instant::now();
    let facets8 = c_facets(8);
    println!("c_facets(8): {} in {:?}", facets8.len(), t0.elapsed());

    let t0 = Instant::now();
    let a8 = VariableSet::matrix_ring(8);
    let k8 = k_generators(8).monomials(&a8);
    let h = hilbert_of_monomial(&k8, a8.len(), 0);
    println!("hilbert K(8): codim {} mult {} in {:?}", h.codim, h.multiplicity, t0.elapsed());

    let t0 = Instant::now();
    let s3 = build_setup(3);
    let f3 = ideal_fiber_division(&s3).unwrap();
    let rep = fiber_initial_check(&s3, &f3, &budget).unwrap();
    println!("full GB n=3 matches: {} in {:?}", rep.matches, t0.elapsed());

    let t0 = Instant::now();
    let s4 = build_setup(4);
    let f4 = ideal_fiber_closed_form(&s4);
    let rep = claimed_gb(&s4, &f4, &budget).unwrap();
    println!("claimed GB n=4 pass: {} in {:?}", rep.pass, t0.elapsed());

    let t0 = Instant::now();
    for j in 1..=4 {
        let rep = intermediate_initial_check(3, j, &budget).unwrap();
        println!("intermediate n=3 j={}: {} in {:?}", j, rep.pass, t0.elapsed());
    }

    let t0 = Instant::now();
    let s6 = build_setup(6);
    let d6 = ideal_fiber_division(&s6).unwrap();
    let c6 = ideal_fiber_closed_form(&s6);
    println!("routes n=6 agree: {} in {:?}", d6.f == c6.f && d6.f_cap == c6.f_cap, t0.elapsed());
}
