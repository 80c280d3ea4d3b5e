mod common;

use common::{arb_monomial, arb_real_polynomial, poly, trace_data};
use proptest::prelude::*;
use umm_core::calculus::{cyclic_d, partial_d, OperatorContext, Var};
use umm_core::masterfield::{freeness_oracle, is_cyclically_selfadjoint, MasterField};
use umm_core::ncpoly::{Monomial, Polynomial};
use umm_core::scalar::Scalar;
use umm_core::series::{CouplingSeries, PolySeries};
use umm_core::Error;

const BUDGET: usize = 2;

/// Selfadjoint up to rotation, coupling both unitaries to the constants.
fn potential() -> Polynomial {
    poly("u1 + u1^-1 + 1/2*x u2 y u2^-1 - u1 u2^-1 - u2 u1^-1")
}

fn gibbs() -> MasterField {
    MasterField::perturbative(trace_data(), &potential(), BUDGET).unwrap()
}

fn conj(s: &CouplingSeries) -> CouplingSeries {
    CouplingSeries::from_coeffs(s.coeffs().iter().map(Scalar::conj).collect(), s.order())
}

#[test]
fn alternating_free_product_moment() {
    // φ(abab) = φ(a²)φ(b)² + φ(a)²φ(b²) - φ(a)²φ(b)² with φ(x) = 2/3, φ(x²) = 2,
    // φ(y) = 7/6, φ(y²) = 37/12
    let tau = MasterField::haar(trace_data());
    let p = poly("x u1 y u1^-1 x u1 y u1^-1");
    assert_eq!(tau.eval(&p).unwrap().coeff(0), Scalar::ratio(565, 162));
    assert_eq!(freeness_oracle(&*trace_data(), &p).unwrap(), Scalar::ratio(565, 162));
}

#[test]
fn gross_witten_weak_coupling() {
    // density (1 + 2t cos θ)/2π: τ(u) = t and every higher moment vanishes
    let tau = MasterField::perturbative(trace_data(), &poly("u1 + u1^-1"), 6).unwrap();
    let mut expect = vec![Scalar::zero(); 7];
    expect[1] = Scalar::one();
    assert_eq!(tau.eval(&poly("u1")).unwrap().coeffs(), &expect[..]);
    assert_eq!(tau.eval(&poly("u1^-1")).unwrap().coeffs(), &expect[..]);
    for k in 2..=4 {
        assert!(tau.series(&Monomial::u_pow(0, k)).unwrap().is_zero(), "u^{k}");
    }
}

#[test]
fn constants_in_the_potential_are_inert() {
    let tau = gibbs();
    let shifted = MasterField::perturbative(trace_data(), &potential().add(&poly("3 + x y")), BUDGET).unwrap();
    for text in ["u1", "x u1 y u2^-1", "u1 u2 u1^-1 u2^-1 x"] {
        let p = poly(text);
        assert_eq!(tau.eval(&p).unwrap(), shifted.eval(&p).unwrap(), "{text}");
    }
    assert!(is_cyclically_selfadjoint(&poly("x y + u1 x u1^-1 y + y u1 x u1^-1")));
}

#[test]
fn rejects_complex_potential_and_overdraft() {
    assert!(matches!(
        MasterField::perturbative(trace_data(), &poly("u1 + i*u1^-1"), 2),
        Err(Error::PotentialNotCyclicallySelfadjoint)
    ));
    assert!(matches!(gibbs().coefficient(&Monomial::u(0), BUDGET + 1), Err(Error::OrderBudget { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn haar_agrees_with_freeness(m in arb_monomial(2, 6)) {
        let tau = MasterField::haar(trace_data());
        let p = Polynomial::monomial(m.clone());
        prop_assert_eq!(tau.coefficient(&m, 0).unwrap(), freeness_oracle(&*trace_data(), &p).unwrap());
    }

    #[test]
    fn adjoint_conjugates_and_rotation_is_free(m in arb_monomial(2, 4), n in arb_monomial(2, 3)) {
        let tau = gibbs();
        prop_assert_eq!(tau.series(&m.star()).unwrap(), conj(&tau.series(&m).unwrap()));
        prop_assert_eq!(tau.series(&m.mul(&n)).unwrap(), tau.series(&n.mul(&m)).unwrap());
    }

    #[test]
    fn schwinger_dyson_holds_order_by_order(q in arb_monomial(2, 3), i in 1usize..=2) {
        // τ⊗τ(∂_i q) + t τ((𝒟_i V) q) = 0
        let tau = gibbs();
        let v = Var::new(i, 2).unwrap();
        let q = Polynomial::monomial(q);
        let mut lhs = tau.eval_tensor(&partial_d(v, &q)).unwrap();
        lhs.add_assign(&tau.eval(&cyclic_d(v, &potential()).mul(&q)).unwrap().shift());
        prop_assert!(lhs.is_zero(), "{:?}", lhs);
    }

    #[test]
    fn xi_inverse_is_a_right_inverse(p in arb_real_polynomial(2, 3, 3)) {
        let tau = gibbs();
        let ops = OperatorContext::new(&tau, &potential(), BUDGET);
        let p = p.perp();
        let back = ops.xi_apply_series(&ops.xi_inverse(&p, BUDGET).unwrap()).unwrap();
        prop_assert_eq!(back, PolySeries::constant(p, BUDGET));
    }
}
