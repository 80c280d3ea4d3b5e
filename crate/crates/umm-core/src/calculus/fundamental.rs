use num_bigint::BigInt;
use num_rational::BigRational;

use super::{laplacian_monomial, number_op_inverse, perturb_p_bar};
use crate::error::{Error, Result};
use crate::ncpoly::{Monomial, Polynomial};
use crate::scalar::Scalar;
use crate::series::PolySeries;

/// A trace whose value on a monomial is a power series in the coupling.
pub trait SeriesTrace {
    /// Coefficient of `t^order` in `τ(m)`.
    fn coefficient(&self, m: &Monomial, order: usize) -> Result<Scalar>;
}

/// Trace, potential and order budget for the fundamental operators
/// `Ξ = Id + ΠT̄_τ + ΠP̄^{tV}` and `Ψ = Id + ½ΠT̄_τ + ΠP̄^{tV}` on `B^⊥`.
pub struct OperatorContext<'a, T: SeriesTrace + ?Sized> {
    trace: &'a T,
    potential: Polynomial,
    budget: usize,
}

impl<'a, T: SeriesTrace + ?Sized> OperatorContext<'a, T> {
    pub fn new(trace: &'a T, potential: &Polynomial, budget: usize) -> Self {
        Self { trace, potential: potential.perp(), budget }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    /// `T̄_{τ^{(a)}} p` for the order-`a` coefficient of the trace.
    pub fn t_bar(&self, p: &Polynomial, order: usize) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in number_op_inverse(p)?.terms() {
            for (left, right, s) in laplacian_monomial(m) {
                let w = c.scale_int(s);
                let tr = self.trace.coefficient(&right, order)?;
                if !tr.is_zero() {
                    out.add_term(left.clone(), &w * &tr);
                }
                let tl = self.trace.coefficient(&left, order)?;
                if !tl.is_zero() {
                    out.add_term(right, &w * &tl);
                }
            }
        }
        Ok(out)
    }

    /// `(ΠT̄_τ + tΠP̄^V)` applied to a series with polynomial coefficients.
    fn perturbation(&self, s: &PolySeries, half: bool) -> Result<PolySeries> {
        let n = s.order();
        let mut out = PolySeries::zero(n);
        for b in 0..=n {
            let pb = s.term(b);
            if pb.is_zero() {
                continue;
            }
            for a in 0..=n - b {
                let mut t = self.t_bar(pb, a)?.perp();
                if half {
                    t = t.scale(&Scalar::ratio(1, 2));
                }
                out.term_mut(a + b).add_scaled(&t, &Scalar::one());
            }
            if b < n && !self.potential.is_zero() {
                let pv = perturb_p_bar(&self.potential, pb)?.perp();
                out.term_mut(b + 1).add_scaled(&pv, &Scalar::one());
            }
        }
        Ok(out)
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.budget {
            return Err(Error::OrderBudget { requested: order, budget: self.budget });
        }
        Ok(())
    }

    fn check_perp(p: &Polynomial) -> Result<()> {
        match p.terms().find(|(m, _)| m.is_constant()) {
            Some((m, _)) => Err(Error::ConstantTerm(format!("{m:?}"))),
            None => Ok(()),
        }
    }

    /// `Ξ` applied to a series in `B^⊥`.
    pub fn xi_apply_series(&self, s: &PolySeries) -> Result<PolySeries> {
        s.terms().iter().try_for_each(Self::check_perp)?;
        let mut out = s.clone();
        out.add_assign(&self.perturbation(s, false)?);
        Ok(out)
    }

    /// `Ξ p` through order `order` in `t`.
    pub fn xi_apply(&self, p: &Polynomial, order: usize) -> Result<PolySeries> {
        self.check_order(order)?;
        self.xi_apply_series(&PolySeries::constant(p.clone(), order))
    }

    /// `Ψ p` through order `order` in `t`.
    pub fn psi_apply(&self, p: &Polynomial, order: usize) -> Result<PolySeries> {
        self.check_order(order)?;
        Self::check_perp(p)?;
        let s = PolySeries::constant(p.clone(), order);
        let mut out = s.clone();
        out.add_assign(&self.perturbation(&s, true)?);
        Ok(out)
    }

    /// `Ξ^{-1} p` through order `order`, by the Neumann series `Σ (-M)^k p`.
    ///
    /// At order zero `M` strictly lowers degree and every other contribution
    /// raises the order, so the series is finite once truncated.
    pub fn xi_inverse(&self, p: &Polynomial, order: usize) -> Result<PolySeries> {
        self.check_order(order)?;
        Self::check_perp(p)?;
        let dv = self.potential.degree();
        let limit = p.degree() + order * (dv + 1) + 1;
        let mut term = PolySeries::constant(p.clone(), order);
        let mut acc = term.clone();
        let mut steps = 0;
        loop {
            term = self.perturbation(&term, false)?.neg();
            if term.is_zero() {
                return Ok(acc);
            }
            steps += 1;
            if steps > limit {
                return Err(Error::ChainTooLong { limit });
            }
            acc.add_assign(&term);
        }
    }

    /// The coefficient of `t^order` in `Ξ^{-1} p`.
    pub fn xi_inverse_coefficient(&self, p: &Polynomial, order: usize) -> Result<Polynomial> {
        Ok(self.xi_inverse(p, order)?.term(order).clone())
    }
}

/// `4(ξ+1)/(ξ(ξ-1))`, exact for rational `ξ > 1`.
pub fn contraction_constant(xi: &BigRational) -> Result<BigRational> {
    let one = BigRational::from_integer(BigInt::from(1));
    if *xi <= one {
        return Err(Error::Domain("contraction constant needs xi > 1".into()));
    }
    let four = BigRational::from_integer(BigInt::from(4));
    Ok(four * (xi + &one) / (xi * (xi - &one)))
}

/// Threshold that `K(ξ_0, V)` must stay below at `ξ_0 = 12`: `7/66`.
pub const UNIQUENESS_THRESHOLD: (i64, i64) = (7, 66);

/// HCIZ coupling window at `K = 1`: `|t| < 7/19008`.
pub const HCIZ_WINDOW: (i64, i64) = (7, 19008);

/// Smallness bound on `‖V‖_1`: `(7/66) / (deg V · 2^{(K-1) deg V} · 12^{deg V})`.
pub fn smallness_bound(deg_v: usize, k: usize) -> BigRational {
    let (num, den) = UNIQUENESS_THRESHOLD;
    let mut bound = BigRational::new(num.into(), den.into());
    if deg_v == 0 {
        return bound;
    }
    let two_pow = BigInt::from(2).pow(((k.max(1) - 1) * deg_v) as u32);
    let twelve_pow = BigInt::from(12).pow(deg_v as u32);
    bound /= BigRational::from_integer(BigInt::from(deg_v) * two_pow * twelve_pow);
    bound
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractionMargin {
    /// `K(ξ, V) = 4(ξ+1)/(ξ(ξ-1)) + ‖ΠV‖_1 deg(V) ξ^{deg V}`.
    pub margin: f64,
    /// Whether `‖V‖_1` satisfies the smallness bound.
    pub smallness_ok: bool,
}

pub fn contraction_margin(xi: f64, v: &Polynomial, k: usize) -> Result<ContractionMargin> {
    if !(xi > 1.0) {
        return Err(Error::Domain(format!("contraction margin needs xi > 1, got {xi}")));
    }
    let deg = v.degree();
    let pv = v.perp().xi_norm(1.0)?;
    let margin = 4.0 * (xi + 1.0) / (xi * (xi - 1.0)) + pv * deg as f64 * xi.powi(deg as i32);
    let bound = smallness_bound(deg, k);
    let bound = num_traits::ToPrimitive::to_f64(&bound).unwrap_or(0.0);
    Ok(ContractionMargin { margin, smallness_ok: v.xi_norm(1.0)? < bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_constants() {
        let xi = BigRational::from_integer(12.into());
        assert_eq!(contraction_constant(&xi).unwrap(), BigRational::new(13.into(), 33.into()));
        assert_eq!(smallness_bound(2, 1), BigRational::new(7.into(), 19008.into()));
        let m = contraction_margin(12.0, &Polynomial::zero(), 1).unwrap();
        assert!((m.margin - 13.0 / 33.0).abs() < 1e-15);
        assert!(m.smallness_ok);
        assert!(contraction_margin(1.0, &Polynomial::zero(), 1).is_err());
    }
}
