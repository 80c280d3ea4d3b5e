//! Higher-genus correlators `τ_kg` of the Gibbs ensemble as power series in
//! the coupling, computed by inverting the fundamental operator `Ξ`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::calculus::{laplacian_monomial, perturb_p, OperatorContext};
use crate::error::{Error, Result};
use crate::masterfield::MasterField;
use crate::ncpoly::{Monomial, Polynomial, TraceData};
use crate::scalar::Scalar;
use crate::series::{CouplingSeries, PolySeries};

type CorrelatorKey = (usize, usize, Vec<Monomial>);

/// Memoised solver for `τ_kg^{tV}` through a fixed order in `t`.
pub struct Correlators {
    tau: MasterField,
    budget: usize,
    xi_memo: RefCell<HashMap<Monomial, Arc<PolySeries>>>,
    memo: RefCell<HashMap<CorrelatorKey, CouplingSeries>>,
}

impl std::fmt::Debug for Correlators {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Correlators")
            .field("budget", &self.budget)
            .field("memo_entries", &self.memo.borrow().len())
            .field("xi_entries", &self.xi_memo.borrow().len())
            .finish()
    }
}

/// `Δ̄ m` as `(left, right, weight)` with the `1/deg m` folded into the weight.
fn regularized_laplacian_terms(m: &Monomial) -> Vec<(Monomial, Monomial, Scalar)> {
    let d = m.degree() as i64;
    laplacian_monomial(m).into_iter().map(|(a, b, s)| (a, b, Scalar::ratio(s, d))).collect()
}

impl Correlators {
    /// Correlators of the real ensemble with potential `V`.
    pub fn new(data: Arc<dyn TraceData>, v: &Polynomial, budget: usize) -> Result<Self> {
        Ok(Self::from_master_field(MasterField::perturbative(data, v, budget)?))
    }

    /// Formal correlators; `V` need not be selfadjoint.
    pub fn formal(data: Arc<dyn TraceData>, v: &Polynomial, budget: usize) -> Self {
        Self::from_master_field(MasterField::formal(data, v, budget))
    }

    pub fn from_master_field(tau: MasterField) -> Self {
        let budget = tau.budget();
        Self { tau, budget, xi_memo: RefCell::new(HashMap::new()), memo: RefCell::new(HashMap::new()) }
    }

    pub fn master_field(&self) -> &MasterField {
        &self.tau
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn data(&self) -> &Arc<dyn TraceData> {
        self.tau.trace_data()
    }

    fn sigma(&self, genus: usize, m: &Monomial, order: usize) -> Result<CouplingSeries> {
        let word = m.constant_word().expect("constant monomial");
        Ok(CouplingSeries::constant(self.data().sigma(genus, word)?, order))
    }

    /// `Ξ^{-1} m` through `order` for a nonconstant monomial; the longest
    /// series computed so far is cached.
    fn xi_inverse(&self, m: &Monomial, order: usize) -> Result<Arc<PolySeries>> {
        if let Some(q) = self.xi_memo.borrow().get(m) {
            if q.order() >= order {
                return Ok(q.clone());
            }
        }
        let ctx = OperatorContext::new(&self.tau, self.tau.potential(), self.budget);
        let q = Arc::new(ctx.xi_inverse(&Polynomial::monomial(m.clone()), order)?);
        self.xi_memo.borrow_mut().insert(m.clone(), q.clone());
        Ok(q)
    }

    /// `Σ_a t^a Σ_m c_m f(m, order - a)` over the terms of `q` through `order`.
    fn fold_series<F>(&self, q: &PolySeries, order: usize, mut f: F) -> Result<CouplingSeries>
    where
        F: FnMut(&Monomial, usize) -> Result<CouplingSeries>,
    {
        let mut out = CouplingSeries::zero(order);
        for (a, qa) in q.terms().iter().enumerate().take(order + 1) {
            for (m, c) in qa.terms() {
                let inner = f(m, order - a)?;
                for (j, v) in inner.coeffs().iter().enumerate() {
                    if !v.is_zero() {
                        out.add_coeff(a + j, &(v * c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `τ_1g(m)` through `order`, with `σ_g` on constants.
    fn tau1(&self, genus: usize, m: &Monomial, order: usize) -> Result<CouplingSeries> {
        if genus == 0 {
            return self.tau.series_to(m, order);
        }
        let m = m.cyclic_canonical();
        if m.is_constant() {
            return self.sigma(genus, &m, order);
        }
        self.memoised(1, genus, vec![m], order)
    }

    /// `args` are canonical rotations and nonconstant.
    fn memoised(&self, k: usize, genus: usize, mut args: Vec<Monomial>, order: usize) -> Result<CouplingSeries> {
        args.sort();
        let key = (k, genus, args);
        if let Some(v) = self.memo.borrow().get(&key) {
            if v.order() >= order {
                return Ok(v.truncate(order));
            }
        }
        let value = self.compute(k, genus, &key.2, order)?;
        self.memo.borrow_mut().insert(key, value.clone());
        Ok(value)
    }

    /// `τ_kg` on monomials; multi-point correlators vanish on constants.
    fn tau_mono(&self, k: usize, genus: usize, args: &[Monomial], order: usize) -> Result<CouplingSeries> {
        if k == 1 {
            return self.tau1(genus, &args[0], order);
        }
        let args: Vec<Monomial> = args.iter().map(Monomial::cyclic_canonical).collect();
        if args.iter().any(Monomial::is_constant) {
            return Ok(CouplingSeries::zero(order));
        }
        self.memoised(k, genus, args, order)
    }

    /// One step of the recursion with `args[0]` as the inverted argument.
    fn compute(&self, k: usize, genus: usize, args: &[Monomial], order: usize) -> Result<CouplingSeries> {
        let q = self.xi_inverse(&args[0], order)?;
        let rest = &args[1..];
        if k == 1 {
            self.fold_series(&q, order, |m, n| self.local_one_point(genus, m, n))
        } else {
            self.fold_series(&q, order, |m, n| self.local_multi_point(k, genus, m, rest, n))
        }
    }

    /// Right-hand side of the genus-`g` one-point equation on a monomial of `Ξ^{-1}p`.
    fn local_one_point(&self, genus: usize, m: &Monomial, order: usize) -> Result<CouplingSeries> {
        let mut acc = CouplingSeries::zero(order);
        for (left, right, w) in regularized_laplacian_terms(m) {
            let mut inner = CouplingSeries::zero(order);
            for l in 1..genus {
                inner.add_assign(&self.tau1(l, &left, order)?.mul(&self.tau1(genus - l, &right, order)?));
            }
            inner.add_assign(&self.tau_mono(2, genus - 1, &[left.clone(), right.clone()], order)?);
            // constant slots of T̄_{τ_10} are paired with σ_g
            if left.is_constant() {
                inner.add_assign(&self.sigma(genus, &left, order)?.mul(&self.tau.series_to(&right, order)?));
            }
            if right.is_constant() {
                inner.add_assign(&self.sigma(genus, &right, order)?.mul(&self.tau.series_to(&left, order)?));
            }
            acc.add_scaled(&inner, &w);
        }
        if order > 0 {
            let pv = self.regularized_perturbation(self.tau.potential(), m);
            for (c, coeff) in pv.terms().filter(|(c, _)| c.is_constant()) {
                acc.add_scaled(&self.sigma(genus, c, order)?.shift(), coeff);
            }
        }
        Ok(acc.neg())
    }

    /// `P̄^W m = P^W(m / deg m)`.
    fn regularized_perturbation(&self, w: &Polynomial, m: &Monomial) -> Polynomial {
        let d = m.degree() as i64;
        perturb_p(w, &Polynomial::term(m.clone(), Scalar::ratio(1, d)))
    }

    fn local_multi_point(
        &self,
        k: usize,
        genus: usize,
        m: &Monomial,
        rest: &[Monomial],
        order: usize,
    ) -> Result<CouplingSeries> {
        let mut acc = CouplingSeries::zero(order);
        for (left, right, w) in &regularized_laplacian_terms(m) {
            let mut inner = CouplingSeries::zero(order);
            // T̄_{τ_1f} for f ≥ 1
            for f in 1..=genus {
                let with_left = prepend(left, rest);
                let with_right = prepend(right, rest);
                inner.add_assign(&self.tau1(f, right, order)?.mul(&self.tau_mono(k, genus - f, &with_left, order)?));
                inner.add_assign(&self.tau1(f, left, order)?.mul(&self.tau_mono(k, genus - f, &with_right, order)?));
            }
            // splittings of the remaining arguments between the two slots
            let n = rest.len();
            for mask in 1..(1u32 << n) - 1 {
                let (inside, outside): (Vec<usize>, Vec<usize>) = (0..n).partition(|j| mask & (1 << j) != 0);
                let a_args = prepend(left, &pick(rest, &inside));
                let b_args = prepend(right, &pick(rest, &outside));
                for f in 0..=genus {
                    let a = self.tau_mono(a_args.len(), f, &a_args, order)?;
                    if a.is_zero() {
                        continue;
                    }
                    inner.add_assign(&a.mul(&self.tau_mono(b_args.len(), genus - f, &b_args, order)?));
                }
            }
            if genus >= 1 {
                let mut all = vec![left.clone(), right.clone()];
                all.extend(rest.iter().cloned());
                inner.add_assign(&self.tau_mono(k + 1, genus - 1, &all, order)?);
            }
            acc.add_scaled(&inner, w);
        }
        for (j, pj) in rest.iter().enumerate() {
            let others: Vec<Monomial> =
                rest.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, m)| m.clone()).collect();
            let pm = self.regularized_perturbation(&Polynomial::monomial(pj.clone()), m);
            for (mono, c) in pm.terms() {
                let args = prepend(mono, &others);
                acc.add_scaled(&self.tau_mono(k - 1, genus, &args, order)?, c);
            }
        }
        Ok(acc.neg())
    }

    fn check_k(k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::CorrelatorOrder(k));
        }
        Ok(())
    }

    /// `τ_kg(p_1, ..., p_k)`, multilinear in the arguments.
    pub fn tau_kg(&self, genus: usize, args: &[Polynomial]) -> Result<CouplingSeries> {
        let order = self.budget;
        self.multilinear(args, |ms| self.tau_mono(ms.len(), genus, ms, order))
    }

    /// As [`Correlators::tau_kg`] but inverting `Ξ` on the first argument as
    /// given, bypassing the symmetric cache at the top level.
    pub fn tau_kg_ordered(&self, genus: usize, args: &[Polynomial]) -> Result<CouplingSeries> {
        let order = self.budget;
        self.multilinear(args, |ms| {
            let k = ms.len();
            let canonical: Vec<Monomial> = ms.iter().map(Monomial::cyclic_canonical).collect();
            if canonical.iter().any(Monomial::is_constant) || (k == 1 && genus == 0) {
                return self.tau_mono(k, genus, ms, order);
            }
            self.compute(k, genus, ms, order)
        })
    }

    fn multilinear<F>(&self, args: &[Polynomial], mut f: F) -> Result<CouplingSeries>
    where
        F: FnMut(&[Monomial]) -> Result<CouplingSeries>,
    {
        Self::check_k(args.len())?;
        let mut out = CouplingSeries::zero(self.budget);
        let mut stack: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for p in args {
            let mut next = Vec::new();
            for (ms, c) in &stack {
                for (m, cm) in p.terms() {
                    let mut v = ms.clone();
                    v.push(m.clone());
                    next.push((v, c * cm));
                }
            }
            stack = next;
        }
        for (ms, c) in stack {
            out.add_scaled(&f(&ms)?, &c);
        }
        Ok(out)
    }

    /// `F_g(t) = ∫_0^t τ_1g^{sV}(V) ds`, exact through order `budget + 1`.
    pub fn free_energy(&self, genus: usize) -> Result<CouplingSeries> {
        let v = self.tau.potential().clone();
        Ok(self.tau_kg(genus, &[v])?.integrate())
    }

    /// Limiting variance `γ(p) = τ_20(p, p)` of `Tr ρ_N(p)` for selfadjoint `p`.
    pub fn clt_variance(&self, p: &Polynomial) -> Result<CouplingSeries> {
        if p.star() != *p {
            return Err(Error::NotSelfadjoint(format!("{p:?}")));
        }
        let q = p.perp();
        self.tau_kg(0, &[q.clone(), q])
    }

    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }
}

fn prepend(first: &Monomial, rest: &[Monomial]) -> Vec<Monomial> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(first.clone());
    v.extend(rest.iter().cloned());
    v
}

fn pick(items: &[Monomial], idx: &[usize]) -> Vec<Monomial> {
    idx.iter().map(|&i| items[i].clone()).collect()
}

/// `[t^d] F_g` of `∫ exp(tN Tr(A U B U^{-1})) dU` for `d ≤ order`, through the
/// correlator recursion with `V = x u_1 y u_1^{-1}`.
pub fn hciz_series_sd(data: Arc<dyn TraceData>, genus: usize, order: usize) -> Result<CouplingSeries> {
    let v = hciz_potential();
    let correlators = Correlators::formal(data, &v, order.saturating_sub(1));
    let f = correlators.free_energy(genus)?;
    Ok(f.truncate(order))
}

/// `x u_1 y u_1^{-1}` with `x`, `y` the first two constant generators.
pub fn hciz_potential() -> Polynomial {
    use crate::ncpoly::{GenLetter, Letter};
    let x = Letter::constant(&[GenLetter::new(0, false, true)]);
    let y = Letter::constant(&[GenLetter::new(1, false, true)]);
    Polynomial::monomial(Monomial::reduce([x, Letter::u(0), y, Letter::u_inv(0)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{parse_polynomial, Alphabet, DiagonalSpectra};

    fn haar() -> (Alphabet, Correlators) {
        let a = Alphabet::with_constants(2, &["x", "y"]).unwrap();
        let d = DiagonalSpectra::from_ratios(&[&[(1, 1), (2, 1)], &[(0, 1), (1, 1)]]).unwrap();
        (a, Correlators::new(Arc::new(d), &Polynomial::zero(), 0).unwrap())
    }

    #[test]
    fn unitary_variance_anchor() {
        let (a, c) = haar();
        let u = parse_polynomial("u1", &a).unwrap();
        let ui = parse_polynomial("u1^-1", &a).unwrap();
        assert_eq!(c.tau_kg(0, &[u.clone(), ui.clone()]).unwrap().coeff(0), Scalar::one());
        assert_eq!(c.tau_kg_ordered(0, &[ui, u]).unwrap().coeff(0), Scalar::one());
    }

    #[test]
    fn clt_of_power_sums() {
        let (a, c) = haar();
        let p1 = parse_polynomial("u1 + u1^-1", &a).unwrap();
        let p2 = parse_polynomial("u1^2 + u1^-2", &a).unwrap();
        assert_eq!(c.clt_variance(&p1).unwrap().coeff(0), Scalar::int(2));
        assert_eq!(c.clt_variance(&p2).unwrap().coeff(0), Scalar::int(4));
        assert!(c.clt_variance(&parse_polynomial("u1", &a).unwrap()).is_err());
    }

    #[test]
    fn haar_genus_one_of_powers_vanishes() {
        // E Tr U^n = 0 for every N, so every genus vanishes
        let (a, c) = haar();
        let p = parse_polynomial("u1^2", &a).unwrap();
        assert!(c.tau_kg(1, &[p]).unwrap().is_zero());
        assert!(c.tau_kg(0, &[]).is_err());
    }
}
