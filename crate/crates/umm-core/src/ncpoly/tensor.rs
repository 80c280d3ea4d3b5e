use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::polynomial::check_xi;
use super::{AlgebraError, Monomial, Polynomial};
use crate::scalar::Scalar;

/// An element of `L^{⊗k}` in the basis of simple tensors of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    rank: usize,
    terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl TensorPoly {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: BTreeMap::new() }
    }

    /// `p_1 ⊗ ... ⊗ p_k` expanded multilinearly.
    pub fn simple(factors: &[&Polynomial]) -> Self {
        let mut out = Self::zero(factors.len());
        let mut keys: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for f in factors {
            let mut next = Vec::new();
            for (key, c) in &keys {
                for (m, a) in f.terms() {
                    let mut k = key.clone();
                    k.push(m.clone());
                    next.push((k, c * a));
                }
            }
            keys = next;
        }
        for (k, c) in keys {
            out.add_term(k, c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial], &Scalar)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn coefficient(&self, key: &[Monomial]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: Scalar) {
        assert_eq!(key.len(), self.rank, "tensor rank mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Scalar) {
        assert_eq!(self.rank, other.rank, "tensor rank mismatch");
        for (k, a) in &other.terms {
            self.add_term(k.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.rank);
        out.add_scaled(self, c);
        out
    }

    /// Slotwise product in the algebra `L^{⊗k}`.
    pub fn mul(&self, other: &TensorPoly) -> TensorPoly {
        assert_eq!(self.rank, other.rank, "tensor rank mismatch");
        let mut out = TensorPoly::zero(self.rank);
        for (k1, a) in &self.terms {
            for (k2, b) in &other.terms {
                let key = k1.iter().zip(k2).map(|(x, y)| x.mul(y)).collect();
                out.add_term(key, a * b);
            }
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.iter().map(Monomial::degree).sum()).max().unwrap_or(0)
    }

    pub fn xi_norm(&self, xi: f64) -> Result<f64, AlgebraError> {
        check_xi(xi)?;
        Ok(self
            .terms
            .iter()
            .map(|(k, c)| c.modulus() * xi.powi(k.iter().map(Monomial::degree).sum::<usize>() as i32))
            .sum())
    }

    /// Multiplies the slots of every simple tensor together, in order (`m`)
    /// or in reverse (`m^op`).
    pub fn multiply_out(&self, reversed: bool) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in &self.terms {
            let m = if reversed { Monomial::product(k.iter().rev()) } else { Monomial::product(k.iter()) };
            out.add_term(m, c.clone());
        }
        out
    }

    /// `q_1 ⊗ q_2 # T = q_1 ⊗ T ⊗ q_2`, extended bilinearly.
    pub fn hash_insert(&self, inner: &TensorPoly) -> TensorPoly {
        assert_eq!(self.rank, 2, "outer tensor of # must have rank 2");
        let mut out = TensorPoly::zero(inner.rank + 2);
        for (outer, a) in &self.terms {
            for (k, b) in &inner.terms {
                let mut key = Vec::with_capacity(k.len() + 2);
                key.push(outer[0].clone());
                key.extend(k.iter().cloned());
                key.push(outer[1].clone());
                out.add_term(key, a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::GenLetter;

    fn u(i: usize) -> Polynomial {
        Polynomial::monomial(Monomial::u(i))
    }

    #[test]
    fn hash_insert_examples() {
        let b = Polynomial::monomial(Monomial::constant(&[GenLetter::new(0, false, true)]));
        let outer = TensorPoly::simple(&[&u(0), &u(1)]);
        let inner = TensorPoly::simple(&[&b]);
        let got = outer.hash_insert(&inner);
        assert_eq!(got, TensorPoly::simple(&[&u(0), &b, &u(1)]));
        assert!(TensorPoly::zero(2).hash_insert(&inner).is_zero());
    }

    #[test]
    fn hash_insert_is_bilinear() {
        let two = Scalar::int(2);
        let s1 = TensorPoly::simple(&[&u(0), &u(1)]);
        let s2 = TensorPoly::simple(&[&u(1), &u(0).add(&u(1))]);
        let t = TensorPoly::simple(&[&u(0).scale(&two), &u(1)]);
        let mut sum = s1.clone();
        sum.add_scaled(&s2, &two);
        let mut expect = s1.hash_insert(&t);
        expect.add_scaled(&s2.hash_insert(&t), &two);
        assert_eq!(sum.hash_insert(&t), expect);
    }

    #[test]
    fn norm_is_multiplicative_on_simple_tensors() {
        let p = u(0).add(&Polynomial::one().scale(&Scalar::int(3)));
        let q = u(1).scale(&Scalar::int(-2));
        let t = TensorPoly::simple(&[&p, &q]);
        let xi = 7.0;
        assert_eq!(t.xi_norm(xi).unwrap(), p.xi_norm(xi).unwrap() * q.xi_norm(xi).unwrap());
    }
}
