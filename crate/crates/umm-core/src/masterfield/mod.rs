//! The master field `τ_10^{tV}` as a power series in `t`, and an independent
//! evaluator of the Haar case built on free independence.

mod freeness;

pub use freeness::{freeness_oracle, FreenessOracle};

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::calculus::{cyclic_d, SeriesTrace, Var};
use crate::error::{Error, Result};
use crate::ncpoly::{Letter, Monomial, Polynomial, TensorPoly, TraceData};
use crate::scalar::Scalar;
use crate::series::CouplingSeries;

/// Solves `τ⊗τ(∂_i q) + t τ((𝒟_i V) q) = 0`, `τ|_B = σ_0`, order by order in `t`.
///
/// Each coefficient is found by induction on (order, degree): rotate a
/// cyclically reduced word so that a `u_i` ends it (or a `u_i^{-1}` starts it);
/// the split of `∂_i` at that letter returns the word itself and every other
/// split has lower degree after cyclic reduction. Values are memoised per
/// worker on (canonical rotation, order).
pub struct MasterField {
    data: Arc<dyn TraceData>,
    potential: Polynomial,
    gradients: Vec<(Var, Polynomial)>,
    budget: usize,
    memo: RefCell<HashMap<(Monomial, usize), Scalar>>,
}

impl std::fmt::Debug for MasterField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MasterField")
            .field("potential", &self.potential)
            .field("budget", &self.budget)
            .field("memo_entries", &self.memo.borrow().len())
            .finish()
    }
}

/// `V` is selfadjoint up to cyclic symmetry: `V*` and `V` agree after
/// rotating every monomial to canonical form.
pub fn is_cyclically_selfadjoint(v: &Polynomial) -> bool {
    v.star().cyclic_canonical() == v.cyclic_canonical()
}

impl MasterField {
    /// The Haar master field `τ_σ`.
    pub fn haar(data: Arc<dyn TraceData>) -> Self {
        Self::formal(data, &Polynomial::zero(), 0)
    }

    /// Perturbed master field of a real Gibbs ensemble.
    pub fn perturbative(data: Arc<dyn TraceData>, v: &Polynomial, budget: usize) -> Result<Self> {
        if !is_cyclically_selfadjoint(v) {
            return Err(Error::PotentialNotCyclicallySelfadjoint);
        }
        Ok(Self::formal(data, v, budget))
    }

    /// No selfadjointness check; the series is still the unique formal solution.
    pub fn formal(data: Arc<dyn TraceData>, v: &Polynomial, budget: usize) -> Self {
        let potential = v.perp();
        let mut vars: Vec<usize> = potential
            .terms()
            .flat_map(|(m, _)| m.letters().iter().filter_map(|l| l.as_unitary().map(|(i, _)| i)).collect::<Vec<_>>())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        let gradients = vars
            .into_iter()
            .map(|i| (Var::from_index(i), cyclic_d(Var::from_index(i), &potential)))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        Self { data, potential, gradients, budget, memo: RefCell::new(HashMap::new()) }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    pub fn trace_data(&self) -> &Arc<dyn TraceData> {
        &self.data
    }

    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.budget {
            return Err(Error::OrderBudget { requested: order, budget: self.budget });
        }
        Ok(())
    }

    /// `τ^{(order)}(m)`, the coefficient of `t^order`.
    pub fn coefficient(&self, m: &Monomial, order: usize) -> Result<Scalar> {
        self.check_order(order)?;
        self.coeff_inner(m, order)
    }

    fn coeff_inner(&self, m: &Monomial, order: usize) -> Result<Scalar> {
        let w = m.cyclic_canonical();
        if let Some(word) = w.constant_word() {
            return if order == 0 { Ok(self.data.sigma0(word)?) } else { Ok(Scalar::zero()) };
        }
        let key = (w, order);
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let value = self.solve(&key.0, order)?;
        self.memo.borrow_mut().insert(key, value.clone());
        Ok(value)
    }

    fn solve(&self, w: &Monomial, order: usize) -> Result<Scalar> {
        let letters = w.letters();
        let forward = letters.iter().position(|l| matches!(l, Letter::Unitary { inverse: false, .. }));
        let (q, var, ends_forward) = match forward {
            Some(j) => {
                let var = letters[j].as_unitary().unwrap().0;
                (w.rotate_to_front(j + 1), var, true)
            }
            None => {
                let j = letters.iter().position(Letter::is_unitary).expect("positive degree");
                (w.rotate_to_front(j), letters[j].as_unitary().unwrap().0, false)
            }
        };
        let q_letters = q.letters();
        let boundary = if ends_forward { q_letters.len() - 1 } else { 0 };
        // Σ over the non-boundary splits of ∂_i q, paired with τ⊗τ at total order `order`
        let mut rest = Scalar::zero();
        for (j, l) in q_letters.iter().enumerate() {
            if j == boundary {
                continue;
            }
            let (left, right, sign) = match l.as_unitary() {
                Some((v, false)) if v == var => (&q_letters[..=j], &q_letters[j + 1..], 1),
                Some((v, true)) if v == var => (&q_letters[..j], &q_letters[j..], -1),
                _ => continue,
            };
            let a = Monomial::reduce(left.iter().cloned());
            let b = Monomial::reduce(right.iter().cloned());
            let pair = self.pair(&a, &b, order)?;
            if !pair.is_zero() {
                rest += &pair.scale_int(sign);
            }
        }
        if order > 0 {
            if let Some((_, grad)) = self.gradients.iter().find(|(v, _)| v.index() == var) {
                let src = grad.mul(&Polynomial::monomial(q.clone()));
                for (m, c) in src.terms() {
                    let t = self.coeff_inner(m, order - 1)?;
                    if !t.is_zero() {
                        rest += &(c * &t);
                    }
                }
            }
        }
        // boundary term is +τ(q)⊗1 when q ends in u_i and -1⊗τ(q) when it starts with u_i^{-1}
        Ok(if ends_forward { -rest } else { rest })
    }

    /// `Σ_{a+b=order} τ^{(a)}(x) τ^{(b)}(y)`.
    fn pair(&self, x: &Monomial, y: &Monomial, order: usize) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for a in 0..=order {
            let tx = self.coeff_inner(x, a)?;
            if tx.is_zero() {
                continue;
            }
            let ty = self.coeff_inner(y, order - a)?;
            if !ty.is_zero() {
                total += &(&tx * &ty);
            }
        }
        Ok(total)
    }

    /// `τ(m)` through the full budget.
    pub fn series(&self, m: &Monomial) -> Result<CouplingSeries> {
        self.series_to(m, self.budget)
    }

    pub fn series_to(&self, m: &Monomial, order: usize) -> Result<CouplingSeries> {
        self.check_order(order)?;
        let coeffs = (0..=order).map(|k| self.coeff_inner(m, k)).collect::<Result<Vec<_>>>()?;
        Ok(CouplingSeries::from_coeffs(coeffs, order))
    }

    /// Linear extension to polynomials.
    pub fn eval(&self, p: &Polynomial) -> Result<CouplingSeries> {
        self.eval_to(p, self.budget)
    }

    pub fn eval_to(&self, p: &Polynomial, order: usize) -> Result<CouplingSeries> {
        let mut out = CouplingSeries::zero(order);
        for (m, c) in p.terms() {
            out.add_scaled(&self.series_to(m, order)?, c);
        }
        Ok(out)
    }

    /// `τ^{⊗k}` on a rank-`k` tensor.
    pub fn eval_tensor(&self, t: &TensorPoly) -> Result<CouplingSeries> {
        let order = self.budget;
        let mut out = CouplingSeries::zero(order);
        for (key, c) in t.terms() {
            let mut prod = CouplingSeries::constant(Scalar::one(), order);
            for m in key {
                prod = prod.mul(&self.series_to(m, order)?);
            }
            out.add_scaled(&prod, c);
        }
        Ok(out)
    }
}

impl SeriesTrace for MasterField {
    fn coefficient(&self, m: &Monomial, order: usize) -> Result<Scalar> {
        MasterField::coefficient(self, m, order)
    }
}
