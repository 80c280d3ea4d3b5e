//! Fixtures and proptest strategies shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use umm_core::ncpoly::{
    parse_polynomial, Alphabet, DiagonalSpectra, GenLetter, Letter, Monomial, Polynomial, TraceData,
};
use umm_core::scalar::Scalar;

/// Two unitaries and selfadjoint constants `x`, `y`.
pub fn alphabet() -> Alphabet {
    Alphabet::with_constants(2, &["x", "y"]).unwrap()
}

pub fn poly(text: &str) -> Polynomial {
    parse_polynomial(text, &alphabet()).unwrap()
}

/// `x = diag(1, 2, -1)`, `y = diag(1/2, 0, 3)`.
pub fn spectra() -> DiagonalSpectra {
    DiagonalSpectra::from_ratios(&[&[(1, 1), (2, 1), (-1, 1)], &[(1, 2), (0, 1), (3, 1)]]).unwrap()
}

pub fn trace_data() -> Arc<dyn TraceData> {
    Arc::new(spectra())
}

fn gen(g: u16) -> GenLetter {
    GenLetter::new(g, false, true)
}

/// Constant words that may sit between unitary letters.
pub fn slots() -> Vec<Vec<GenLetter>> {
    vec![vec![gen(0)], vec![gen(1)], vec![gen(0), gen(1)], vec![gen(1), gen(0), gen(0)]]
}

/// Reduced monomials with at most `max_unitaries` unitary letters over `unitaries` variables.
pub fn arb_monomial(unitaries: usize, max_unitaries: usize) -> impl Strategy<Value = Monomial> {
    let slot_count = slots().len();
    let letter = (0..unitaries, any::<bool>(), prop::option::of(0..slot_count));
    (prop::option::of(0..slot_count), prop::collection::vec(letter, 0..=max_unitaries)).prop_map(|(head, body)| {
        let slots = slots();
        let mut letters = Vec::new();
        if let Some(s) = head {
            letters.push(Letter::constant(&slots[s]));
        }
        for (var, inverse, slot) in body {
            letters.push(if inverse { Letter::u_inv(var) } else { Letter::u(var) });
            if let Some(s) = slot {
                letters.push(Letter::constant(&slots[s]));
            }
        }
        Monomial::reduce(letters)
    })
}

/// Small Gaussian-rational coefficients.
pub fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=2).prop_map(|(a, b, c, d)| Scalar::complex((a, b), (c, d)))
}

pub fn arb_real_scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Scalar::ratio(a, b))
}

pub fn arb_polynomial(unitaries: usize, max_unitaries: usize, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(unitaries, max_unitaries), arb_scalar()), 0..=max_terms)
        .prop_map(|terms| terms.into_iter().collect())
}

pub fn arb_real_polynomial(
    unitaries: usize,
    max_unitaries: usize,
    max_terms: usize,
) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_monomial(unitaries, max_unitaries), arb_real_scalar()), 0..=max_terms)
        .prop_map(|terms| terms.into_iter().collect())
}

/// Coefficient-wise equality of exact scalars to a float pair.
pub fn close(exact: &Scalar, re: f64, im: f64, tol: f64) -> bool {
    let (a, b) = exact.to_f64_pair();
    (a - re).abs() <= tol && (b - im).abs() <= tol
}
