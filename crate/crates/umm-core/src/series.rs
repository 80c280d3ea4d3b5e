//! Truncated power series in the coupling `t`.

use serde::{Deserialize, Serialize};

use crate::ncpoly::Polynomial;
use crate::scalar::Scalar;

/// `c_0 + c_1 t + ... + c_n t^n`, exact through order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CouplingSeries {
    coeffs: Vec<Scalar>,
}

impl CouplingSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Pads or truncates `coeffs` to `order + 1` entries.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.resize(order + 1, Scalar::zero());
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Adds `c t^k`; ignored beyond the order.
    pub fn add_coeff(&mut self, k: usize, c: &Scalar) {
        if let Some(slot) = self.coeffs.get_mut(k) {
            *slot += c;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn add_assign(&mut self, other: &CouplingSeries) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, other: &CouplingSeries, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += &(b * c);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::int(-1))
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &CouplingSeries) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }

    /// Multiplies by `t`, dropping the top coefficient.
    pub fn shift(&self) -> Self {
        let mut coeffs = vec![Scalar::zero()];
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        Self { coeffs }
    }

    /// Multiplies by `t^k`, dropping coefficients beyond the order.
    pub fn shift_by(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![Scalar::zero(); n + 1];
        for (d, c) in self.coeffs.iter().enumerate().take((n + 1).saturating_sub(k)) {
            coeffs[d + k] = c.clone();
        }
        Self { coeffs }
    }

    /// `∫_0^t`, raising the order by one: `c_d t^d ↦ c_d t^{d+1}/(d+1)`.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![Scalar::zero()];
        for (d, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c * &Scalar::ratio(1, d as i64 + 1));
        }
        Self { coeffs }
    }

    /// Floating evaluation at `t`.
    pub fn eval_f64(&self, t: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for c in self.coeffs.iter().rev() {
            let (a, b) = c.to_f64_pair();
            re = re * t + a;
            im = im * t + b;
        }
        (re, im)
    }
}

/// A truncated series whose coefficients are polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    terms: Vec<Polynomial>,
}

impl PolySeries {
    pub fn zero(order: usize) -> Self {
        Self { terms: vec![Polynomial::zero(); order + 1] }
    }

    pub fn constant(p: Polynomial, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.terms[0] = p;
        s
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[Polynomial] {
        &self.terms
    }

    pub fn term(&self, k: usize) -> &Polynomial {
        &self.terms[k]
    }

    pub fn term_mut(&mut self, k: usize) -> &mut Polynomial {
        &mut self.terms[k]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Polynomial::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut terms = self.terms.clone();
        terms.resize(order + 1, Polynomial::zero());
        Self { terms }
    }

    pub fn add_assign(&mut self, other: &PolySeries) {
        for (a, b) in self.terms.iter_mut().zip(&other.terms) {
            a.add_scaled(b, &Scalar::one());
        }
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(Polynomial::neg).collect() }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(Polynomial::degree).max().unwrap_or(0)
    }
}
