//! Operator calculus on `L`: difference quotients, cyclic derivatives, the
//! number operator, the reduced Laplacian and the operators built from them.

mod fundamental;

pub use fundamental::{
    contraction_constant, contraction_margin, smallness_bound, ContractionMargin, OperatorContext, SeriesTrace,
    HCIZ_WINDOW, UNIQUENESS_THRESHOLD,
};

use crate::error::{Error, Result};
use crate::ncpoly::{Letter, Monomial, Polynomial, TensorPoly};
use crate::scalar::Scalar;

/// A zero-based unitary variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(usize);

impl Var {
    /// From the one-based index used in text (`u1` is 1).
    pub fn new(one_based: usize, unitaries: usize) -> Result<Self> {
        if one_based == 0 || one_based > unitaries {
            return Err(Error::VarIndex { index: one_based, unitaries });
        }
        Ok(Var(one_based - 1))
    }

    pub fn from_index(index: usize) -> Self {
        Var(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    fn is(self, letter: &Letter, inverse: bool) -> bool {
        letter.as_unitary() == Some((self.0, inverse))
    }
}

/// Variables occurring in `m`, ascending.
fn vars_of(m: &Monomial) -> Vec<Var> {
    let mut vars: Vec<Var> = m.letters().iter().filter_map(|l| l.as_unitary().map(|(v, _)| Var(v))).collect();
    vars.sort();
    vars.dedup();
    vars
}

fn vars_of_poly(p: &Polynomial) -> Vec<Var> {
    let mut vars: Vec<Var> = p.terms().flat_map(|(m, _)| vars_of(m)).collect();
    vars.sort();
    vars.dedup();
    vars
}

fn word(letters: &[Letter]) -> Monomial {
    Monomial::reduce(letters.iter().cloned())
}

/// Simple tensors of `∂_i m` as `(left, right, sign)`.
pub fn partial_terms(var: Var, m: &Monomial) -> Vec<(Monomial, Monomial, i64)> {
    let letters = m.letters();
    let mut out = Vec::new();
    for (j, l) in letters.iter().enumerate() {
        if var.is(l, false) {
            out.push((word(&letters[..=j]), word(&letters[j + 1..]), 1));
        } else if var.is(l, true) {
            out.push((word(&letters[..j]), word(&letters[j..]), -1));
        }
    }
    out
}

/// The free difference quotient `∂_i`.
pub fn partial_d(var: Var, p: &Polynomial) -> TensorPoly {
    let mut out = TensorPoly::zero(2);
    for (m, c) in p.terms() {
        for (a, b, s) in partial_terms(var, m) {
            out.add_term(vec![a, b], c.scale_int(s));
        }
    }
    out
}

/// Terms of `𝒟_i m`: cyclic shifts ending in `u_i` minus those starting with `u_i^{-1}`.
pub fn cyclic_terms(var: Var, m: &Monomial) -> Vec<(Monomial, i64)> {
    let letters = m.letters();
    let mut out = Vec::new();
    for (j, l) in letters.iter().enumerate() {
        if var.is(l, false) {
            let rotated: Vec<Letter> = letters[j + 1..].iter().chain(&letters[..=j]).cloned().collect();
            out.push((Monomial::reduce(rotated), 1));
        } else if var.is(l, true) {
            let rotated: Vec<Letter> = letters[j..].iter().chain(&letters[..j]).cloned().collect();
            out.push((Monomial::reduce(rotated), -1));
        }
    }
    out
}

/// The cyclic derivative `𝒟_i = m^op ∘ ∂_i`.
pub fn cyclic_d(var: Var, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for (r, s) in cyclic_terms(var, m) {
            out.add_term(r, c.scale_int(s));
        }
    }
    out
}

/// The number operator `D`: scales each monomial by its degree.
pub fn number_op(p: &Polynomial) -> Polynomial {
    p.terms().map(|(m, c)| (m.clone(), c.scale_int(m.degree() as i64))).collect()
}

/// `D^{-1}` on polynomials without constant term.
pub fn number_op_inverse(p: &Polynomial) -> Result<Polynomial> {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let d = m.degree();
        if d == 0 {
            return Err(Error::ConstantTerm(format!("{m:?}")));
        }
        out.add_term(m.clone(), c * &Scalar::ratio(1, d as i64));
    }
    Ok(out)
}

/// Simple tensors of `Δ_i m` as `(left, right, sign)`, following the cyclic
/// expansion of `∂_i 𝒟_i m` with the boundary terms removed.
pub fn laplacian_terms(var: Var, m: &Monomial) -> Vec<(Monomial, Monomial, i64)> {
    let letters = m.letters();
    let mut out = Vec::new();
    for (j, l) in letters.iter().enumerate() {
        if var.is(l, false) {
            // w = p2 p1 u_i, split at every earlier u_i^{±1}
            let w: Vec<Letter> = letters[j + 1..].iter().chain(&letters[..=j]).cloned().collect();
            let last = w.len() - 1;
            for k in 0..last {
                if var.is(&w[k], false) {
                    out.push((word(&w[..=k]), word(&w[k + 1..]), 1));
                } else if var.is(&w[k], true) {
                    out.push((word(&w[..k]), word(&w[k + 1..last]), -1));
                }
            }
        } else if var.is(l, true) {
            // w = u_i^{-1} p2 p1, split at every later u_i^{±1}
            let w: Vec<Letter> = letters[j..].iter().chain(&letters[..j]).cloned().collect();
            for k in 1..w.len() {
                if var.is(&w[k], false) {
                    out.push((word(&w[1..k]), word(&w[k + 1..]), -1));
                } else if var.is(&w[k], true) {
                    out.push((word(&w[..k]), word(&w[k..]), 1));
                }
            }
        }
    }
    out
}

/// Terms of `Δ m = Σ_i Δ_i m`.
pub fn laplacian_monomial(m: &Monomial) -> Vec<(Monomial, Monomial, i64)> {
    vars_of(m).into_iter().flat_map(|v| laplacian_terms(v, m)).collect()
}

/// The reduced Laplacian `Δ = Σ_i Δ_i`.
pub fn reduced_laplacian(p: &Polynomial) -> TensorPoly {
    let mut out = TensorPoly::zero(2);
    for (m, c) in p.terms() {
        for (a, b, s) in laplacian_monomial(m) {
            out.add_term(vec![a, b], c.scale_int(s));
        }
    }
    out
}

/// `Δ̄ = Δ ∘ D^{-1}`.
pub fn regularized_laplacian(p: &Polynomial) -> Result<TensorPoly> {
    Ok(reduced_laplacian(&number_op_inverse(p)?))
}

/// `T_τ p = (Id⊗τ + τ⊗Id) Δ p` for a scalar functional `tau`.
pub fn contract_t<F>(p: &Polynomial, mut tau: F) -> Result<Polynomial>
where
    F: FnMut(&Monomial) -> Result<Scalar>,
{
    let mut out = Polynomial::zero();
    for (key, c) in reduced_laplacian(p).terms() {
        let (left, right) = (&key[0], &key[1]);
        let tr = tau(right)?;
        if !tr.is_zero() {
            out.add_term(left.clone(), c * &tr);
        }
        let tl = tau(left)?;
        if !tl.is_zero() {
            out.add_term(right.clone(), c * &tl);
        }
    }
    Ok(out)
}

/// `T̄_τ = T_τ ∘ D^{-1}`.
pub fn contract_t_bar<F>(p: &Polynomial, tau: F) -> Result<Polynomial>
where
    F: FnMut(&Monomial) -> Result<Scalar>,
{
    contract_t(&number_op_inverse(p)?, tau)
}

/// `P^W p = Σ_i (𝒟_i W)(𝒟_i p)`.
pub fn perturb_p(w: &Polynomial, p: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    let wv = vars_of_poly(w);
    for v in vars_of_poly(p) {
        if wv.binary_search(&v).is_err() {
            continue;
        }
        out.add_scaled(&cyclic_d(v, w).mul(&cyclic_d(v, p)), &Scalar::one());
    }
    out
}

/// `P̄^W = P^W ∘ D^{-1}`.
pub fn perturb_p_bar(w: &Polynomial, p: &Polynomial) -> Result<Polynomial> {
    Ok(perturb_p(w, &number_op_inverse(p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{parse_polynomial, Alphabet};

    fn alphabet() -> Alphabet {
        Alphabet::with_constants(2, &["x", "y", "c"]).unwrap()
    }

    fn p(text: &str) -> Polynomial {
        parse_polynomial(text, &alphabet()).unwrap()
    }

    fn u1() -> Var {
        Var::new(1, 2).unwrap()
    }

    #[test]
    fn partial_examples() {
        assert_eq!(partial_d(u1(), &p("u1")), TensorPoly::simple(&[&p("u1"), &p("1")]));
        assert_eq!(partial_d(u1(), &p("u1^-1")), TensorPoly::simple(&[&p("-1"), &p("u1^-1")]));
        let mut expect = TensorPoly::simple(&[&p("u1"), &p("u1")]);
        expect.add_scaled(&TensorPoly::simple(&[&p("u1^2"), &p("1")]), &Scalar::one());
        assert_eq!(partial_d(u1(), &p("u1^2")), expect);
        assert!(partial_d(u1(), &p("x")).is_zero());
        assert!(Var::new(3, 2).is_err());
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cyclic_d(u1(), &p("u1^2")), p("2*u1^2"));
        assert!(cyclic_d(u1(), &p("u1 c u1^-1")).is_zero());
        assert_eq!(cyclic_d(u1(), &p("x u1 y")), p("b[y x] u1"));
    }

    #[test]
    fn number_operator() {
        assert_eq!(number_op_inverse(&p("u1")).unwrap(), p("u1"));
        assert_eq!(number_op_inverse(&p("u1 u2")).unwrap(), p("1/2*u1 u2"));
        assert!(number_op_inverse(&p("c")).is_err());
        assert_eq!(number_op(&p("u1 x u2^-1 + c")), p("2*u1 x u2^-1"));
    }

    #[test]
    fn laplacian_examples() {
        assert!(reduced_laplacian(&p("u1")).is_zero());
        assert!(reduced_laplacian(&p("c")).is_zero());
        assert_eq!(reduced_laplacian(&p("u1^2")), TensorPoly::simple(&[&p("2*u1"), &p("u1")]));
    }

    #[test]
    fn perturbation_examples() {
        assert_eq!(perturb_p(&p("u1^-1"), &p("u1")), p("-1"));
        assert!(perturb_p(&p("u1 x"), &p("c")).is_zero());
        let got = perturb_p(&p("x u1 y u1^-1"), &p("u1"));
        assert_eq!(got, p("y u1^-1 x u1 u1 - u1^-1 x u1 y u1"));
    }
}
