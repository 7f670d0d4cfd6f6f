//! Checks that tie separate modules together.

use num_bigint::BigInt;
use quiver_coho::combinat::{catalan, degree_counts};
use quiver_coho::groebner::{standard_monomials, Mono, TermOrder};
use quiver_coho::hring::quotient_ranks;
use quiver_coho::mring::{natural_basis, MRing, RingElt};

fn basis_elts(ring: &MRing) -> Vec<RingElt> {
    natural_basis(ring.n(), None)
        .into_iter()
        .map(|m| RingElt::from_monomial(ring.n(), m))
        .collect()
}

#[test]
fn standard_monomial_count_matches_quotient_rank() {
    for n in 1..=5 {
        let order = TermOrder::heights(n);
        let rels = quiver_coho::groebner::relations(n, &order, false).unwrap();
        let leads: Vec<Mono> = rels.iter().map(|p| p.lead().unwrap().0.clone()).collect();
        let std = standard_monomials(&leads, &order).unwrap();
        let total: usize = quotient_ranks(n).unwrap().iter().sum();
        assert_eq!(std.len(), total, "n={n}");
        assert_eq!(catalan(n as u64 + 1), total.into());
    }
}

#[test]
fn natural_basis_degrees_match_uset_counts() {
    for n in 1..=7 {
        let mut counts = vec![0u64; n + 1];
        for m in natural_basis(n, None) {
            counts[m.degree()] += 1;
        }
        assert_eq!(counts, degree_counts(n));
    }
}

#[test]
fn multiplication_is_commutative_and_associative() {
    for n in 1..=4 {
        let ring = MRing::new(n);
        let b = basis_elts(&ring);
        for x in &b {
            for y in &b {
                let xy = ring.multiply(x, y).unwrap();
                assert_eq!(xy, ring.multiply(y, x).unwrap());
                for z in b.iter().step_by(3) {
                    let l = ring.multiply(&xy, z).unwrap();
                    let r = ring.multiply(x, &ring.multiply(y, z).unwrap()).unwrap();
                    assert_eq!(l, r, "n={n}: ({x})({y})({z})");
                }
            }
        }
    }
}

#[test]
fn products_of_basis_elements_are_integral_combinations_of_basis() {
    let ring = MRing::new(5);
    let b = basis_elts(&ring);
    for x in b.iter().step_by(7) {
        for y in &b {
            let p = ring.multiply(x, y).unwrap();
            assert!(p.is_normal());
            assert!(p.terms().values().all(|c| *c != BigInt::from(0)));
        }
    }
}
