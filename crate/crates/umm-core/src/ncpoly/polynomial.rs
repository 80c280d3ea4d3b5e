use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::{AlgebraError, Monomial};
use crate::scalar::Scalar;

/// A finite linear combination of reduced monomials with no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

/// Degree data of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub degree: usize,
    /// `(deg_i^+, deg_i^-)` maximised over monomials, one entry per unitary.
    pub per_variable: Vec<(usize, usize)>,
    pub balanced: bool,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    /// `⟨m, p⟩` in the orthonormal monomial basis.
    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&Scalar::int(-1))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }

    /// Antilinear involutive antihomomorphism.
    pub fn star(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.star(), c.conj());
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_stats(&self, unitaries: usize) -> DegreeStats {
        let mut per_variable = vec![(0, 0); unitaries];
        for m in self.terms.keys() {
            for (i, slot) in per_variable.iter_mut().enumerate() {
                let (p, q) = m.var_degrees(i);
                slot.0 = slot.0.max(p);
                slot.1 = slot.1.max(q);
            }
        }
        DegreeStats { degree: self.degree(), per_variable, balanced: self.terms.keys().all(Monomial::is_balanced) }
    }

    /// `Σ |⟨q,p⟩| ξ^{deg q}`.
    pub fn xi_norm(&self, xi: f64) -> Result<f64, AlgebraError> {
        check_xi(xi)?;
        Ok(self.terms.iter().map(|(m, c)| c.modulus() * xi.powi(m.degree() as i32)).sum())
    }

    /// `(Πp, Π'p)`: the parts of degree at least one and of degree zero.
    pub fn project_perp(&self) -> (Polynomial, Polynomial) {
        let mut high = Polynomial::zero();
        let mut low = Polynomial::zero();
        for (m, c) in &self.terms {
            let target = if m.is_constant() { &mut low } else { &mut high };
            target.terms.insert(m.clone(), c.clone());
        }
        (high, low)
    }

    pub fn perp(&self) -> Polynomial {
        self.project_perp().0
    }

    pub fn constant_part(&self) -> Polynomial {
        self.project_perp().1
    }

    pub fn is_perp(&self) -> bool {
        self.terms.keys().all(|m| !m.is_constant())
    }

    /// Linear extension of a monomial map.
    pub fn map_monomials<F: FnMut(&Monomial) -> Polynomial>(&self, mut f: F) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    /// Replaces each monomial by its canonical cyclic rotation. Preserves the
    /// value under any tracial functional, not the element itself.
    pub fn cyclic_canonical(&self) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.cyclic_canonical(), c.clone());
        }
        out
    }
}

impl FromIterator<(Monomial, Scalar)> for Polynomial {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}

pub(crate) fn check_xi(xi: f64) -> Result<(), AlgebraError> {
    if xi.is_finite() && xi >= 1.0 {
        Ok(())
    } else {
        Err(AlgebraError::XiBelowOne(xi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{GenLetter, Letter};

    fn u(i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::u(i))
    }

    fn b() -> Polynomial {
        Polynomial::monomial(Monomial::constant(&[GenLetter::new(0, false, true)]))
    }

    #[test]
    fn product_examples() {
        let inv = Polynomial::monomial(Monomial::u_inv(0));
        assert_eq!(u(0).mul(&inv), Polynomial::one());
        let s = u(0).add(&u(1));
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.coefficient(&Monomial::u_pow(0, 2)), Scalar::one());
        let ub = Polynomial::monomial(Monomial::reduce([
            Letter::u_inv(0),
            Letter::constant(&[GenLetter::new(0, false, true)]),
        ]));
        assert_eq!(u(0).mul(&ub), b());
    }

    #[test]
    fn star_is_antilinear() {
        let p = u(0).scale(&Scalar::complex((2, 1), (1, 1)));
        let s = p.star();
        assert_eq!(s.coefficient(&Monomial::u_inv(0)), Scalar::complex((2, 1), (-1, 1)));
    }

    #[test]
    fn xi_norm_examples() {
        assert_eq!(u(0).xi_norm(12.0).unwrap(), 12.0);
        let w = Polynomial::monomial(Monomial::reduce([Letter::u(0), Letter::u_inv(1)]));
        assert_eq!(w.xi_norm(5.0).unwrap(), 25.0);
        assert_eq!(u(0).scale(&Scalar::int(2)).add(&b()).xi_norm(12.0).unwrap(), 25.0);
        assert!(u(0).xi_norm(0.5).is_err());
    }

    #[test]
    fn projections() {
        let (hi, lo) = u(0).add(&b()).project_perp();
        assert_eq!(hi, u(0));
        assert_eq!(lo, b());
        let conj = Polynomial::monomial(Monomial::reduce([
            Letter::u(0),
            Letter::constant(&[GenLetter::new(0, false, true)]),
            Letter::u_inv(0),
        ]));
        assert_eq!(conj.project_perp(), (conj.clone(), Polynomial::zero()));
    }
}
