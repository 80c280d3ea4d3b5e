mod common;

use common::{alphabet, arb_monomial, arb_polynomial, poly, spectra};
use proptest::prelude::*;
use umm_core::ncpoly::{
    check_trace_data, format_monomial, format_polynomial, parse_monomial, parse_polynomial, GenLetter, MatrixTrace,
    Monomial, Polynomial, TensorPoly, TraceData,
};
use umm_core::validation::PermutationTrace;

const XI: f64 = 3.0;

fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + 1e-12) + 1e-12
}

#[test]
fn reduction_cancels_and_merges() {
    let a = alphabet();
    assert_eq!(poly("u1 u2 u2^-1 u1^-1"), Polynomial::one());
    assert_eq!(format_polynomial(&poly("u1 x u1^-1 u1 y"), &a), "1*u1 b[x y]");
    assert_eq!(poly("x u1 - x u1"), Polynomial::zero());
}

#[test]
fn tensor_norm_sums_slot_degrees() {
    let t = TensorPoly::simple(&[&poly("2*u1 x u2"), &poly("u1^-1 - 1")]);
    // |2|ξ^3 + |-2|ξ^2
    assert!((t.xi_norm(XI).unwrap() - (2.0 * 27.0 + 2.0 * 9.0)).abs() < 1e-12);
    assert_eq!(t.multiply_out(false), poly("2*u1 x u2 u1^-1 - 2*u1 x u2"));
}

#[test]
fn trace_data_is_tracial_and_normalised() {
    let gens = [GenLetter::new(0, false, true), GenLetter::new(1, false, true)];
    assert!(check_trace_data(&spectra(), &gens, 4).unwrap());

    let data = MatrixTrace::from_integers(&[&[&[1, 2], &[0, -1]], &[&[0, 1], &[3, 1]]]).unwrap();
    let gens = [GenLetter::new(0, false, false), GenLetter::new(0, true, false), GenLetter::new(1, false, false)];
    assert!(check_trace_data(&data, &gens, 4).unwrap());
    // a non-commuting pair: σ(ab) ≠ σ(ba*)
    let ab = data.sigma0(&[gens[0], gens[2]]).unwrap();
    let ba_star = data.sigma0(&[gens[2], gens[1]]).unwrap();
    assert_ne!(ab, ba_star);
}

fn permutation_trace() -> PermutationTrace {
    PermutationTrace::new(
        vec![vec![1, 2, 0, 3], vec![0, 3, 1, 2]],
        vec![
            vec![vec![1, 0, 2, 0], vec![0, -1, 0, 1], vec![2, 0, 0, 0], vec![0, 1, 0, 3]],
            vec![vec![0, 1, 0, 0], vec![1, 0, 0, 2], vec![0, 0, 2, 0], vec![0, 2, 0, -1]],
        ],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduce_is_idempotent(m in arb_monomial(2, 6)) {
        prop_assert_eq!(Monomial::reduce(m.letters().iter().cloned()), m.clone());
    }

    #[test]
    fn star_is_an_antimultiplicative_involution(p in arb_polynomial(2, 3, 3), q in arb_polynomial(2, 3, 3)) {
        prop_assert_eq!(p.star().star(), p.clone());
        prop_assert_eq!(p.mul(&q).star(), q.star().mul(&p.star()));
    }

    #[test]
    fn product_is_associative_and_distributive(
        p in arb_polynomial(2, 2, 3),
        q in arb_polynomial(2, 2, 3),
        r in arb_polynomial(2, 2, 3),
    ) {
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
    }

    #[test]
    fn text_round_trips(p in arb_polynomial(2, 4, 4), m in arb_monomial(2, 5)) {
        let a = alphabet();
        let text = format_polynomial(&p, &a);
        prop_assert_eq!(parse_polynomial(&text, &a).unwrap(), p);
        prop_assert_eq!(parse_monomial(&format_monomial(&m, &a), &a).unwrap(), m);
    }

    #[test]
    fn cyclic_canonical_forgets_the_cut(m in arb_monomial(2, 4), n in arb_monomial(2, 4)) {
        prop_assert_eq!(m.mul(&n).cyclic_canonical(), n.mul(&m).cyclic_canonical());
        let c = m.cyclic_canonical();
        prop_assert_eq!(c.cyclic_canonical(), c);
    }

    #[test]
    fn xi_norm_is_submultiplicative_and_star_isometric(p in arb_polynomial(2, 3, 3), q in arb_polynomial(2, 3, 3)) {
        let (np, nq) = (p.xi_norm(XI).unwrap(), q.xi_norm(XI).unwrap());
        prop_assert!(within(p.mul(&q).xi_norm(XI).unwrap(), np * nq));
        prop_assert!(within(p.add(&q).xi_norm(XI).unwrap(), np + nq));
        prop_assert!((p.star().xi_norm(XI).unwrap() - np).abs() <= 1e-9 * (1.0 + np));
    }

    #[test]
    fn projections_split_the_polynomial(p in arb_polynomial(2, 3, 4)) {
        let (high, low) = p.project_perp();
        prop_assert!(high.is_perp());
        prop_assert!(low.terms().all(|(m, _)| m.is_constant()));
        prop_assert_eq!(high.add(&low), p);
    }

    #[test]
    fn permutation_trace_is_tracial(m in arb_monomial(2, 4), n in arb_monomial(2, 4)) {
        let tau = permutation_trace();
        prop_assert_eq!(tau.trace(&m.mul(&n)), tau.trace(&n.mul(&m)));
        prop_assert_eq!(tau.trace(&m.cyclic_canonical()), tau.trace(&m));
    }
}
