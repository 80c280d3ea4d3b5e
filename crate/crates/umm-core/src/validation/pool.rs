//! Random inputs and exact reference traces for the acceptance checks.

use std::sync::Arc;

use rand::Rng;

use crate::ncpoly::{ConstWord, GenLetter, Letter, Monomial, Polynomial};
use crate::scalar::Scalar;

/// Single selfadjoint generators `#0, ..., #(count-1)` plus their products of two.
pub fn constant_slots(count: u16) -> Vec<ConstWord> {
    let single: Vec<GenLetter> = (0..count).map(|g| GenLetter::new(g, false, true)).collect();
    let mut out: Vec<ConstWord> = single.iter().map(|&l| Arc::from(vec![l])).collect();
    for &a in &single {
        for &b in &single {
            if a != b {
                out.push(Arc::from(vec![a, b]));
            }
        }
    }
    out
}

/// A reduced monomial of degree exactly `degree`, with each constant slot
/// empty or drawn from `slots`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, unitaries: usize, slots: &[ConstWord], degree: usize) -> Monomial {
    let mut letters = Vec::with_capacity(2 * degree + 1);
    let slot = |rng: &mut R, letters: &mut Vec<Letter>| {
        if !slots.is_empty() && rng.random_bool(0.5) {
            letters.push(Letter::Constant(slots[rng.random_range(0..slots.len())].clone()));
        }
    };
    slot(rng, &mut letters);
    let mut previous: Option<(usize, bool)> = None;
    for _ in 0..degree {
        let (var, inverse) = loop {
            let candidate = (rng.random_range(0..unitaries), rng.random_bool(0.5));
            // a constant in between would also prevent cancellation, but not always present
            let cancels =
                previous == Some((candidate.0, !candidate.1)) && !matches!(letters.last(), Some(Letter::Constant(_)));
            if !cancels {
                break candidate;
            }
        };
        letters.push(if inverse { Letter::u_inv(var) } else { Letter::u(var) });
        previous = Some((var, inverse));
        slot(rng, &mut letters);
    }
    Monomial::reduce(letters)
}

/// A polynomial in `B^⊥` with `1..=max_terms` terms of degree `1..=max_degree`
/// and small rational coefficients.
pub fn random_perp_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    unitaries: usize,
    slots: &[ConstWord],
    max_terms: usize,
    max_degree: usize,
) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let degree = rng.random_range(1..=max_degree);
        let m = random_monomial(rng, unitaries, slots, degree);
        let c = Scalar::ratio(rng.random_range(-5..=5i64), rng.random_range(1..=4i64));
        p.add_term(m, c);
    }
    p.perp()
}

/// `n^{-1} Tr` of a finite-dimensional representation in which every unitary
/// is a permutation matrix and every constant an integer matrix. An exact
/// tracial state on `L` that shares no code with the recursion.
#[derive(Debug, Clone)]
pub struct PermutationTrace {
    permutations: Vec<Vec<usize>>,
    constants: Vec<Vec<Vec<i64>>>,
}

impl PermutationTrace {
    pub fn new(permutations: Vec<Vec<usize>>, constants: Vec<Vec<Vec<i64>>>) -> Self {
        Self { permutations, constants }
    }

    fn size(&self) -> usize {
        self.permutations.first().map_or_else(|| self.constants.first().map_or(1, Vec::len), Vec::len)
    }

    pub fn trace(&self, m: &Monomial) -> Scalar {
        let n = self.size();
        let mut acc: Vec<Vec<Scalar>> =
            (0..n).map(|i| (0..n).map(|j| Scalar::int((i == j) as i64)).collect()).collect();
        for l in m.letters() {
            match l {
                Letter::Unitary { var, inverse } => {
                    // P e_a = e_{π(a)}: column a of A P is column π(a) of A
                    let pi = &self.permutations[*var as usize];
                    let mut next = acc.clone();
                    for row in 0..n {
                        for a in 0..n {
                            let (dst, src) = if *inverse { (pi[a], a) } else { (a, pi[a]) };
                            next[row][dst] = acc[row][src].clone();
                        }
                    }
                    acc = next;
                }
                Letter::Constant(w) => {
                    for g in w.iter() {
                        let b = &self.constants[g.gen as usize];
                        let mut next = vec![vec![Scalar::zero(); n]; n];
                        for i in 0..n {
                            for k in 0..n {
                                if acc[i][k].is_zero() {
                                    continue;
                                }
                                for j in 0..n {
                                    let e = if g.adjoint { b[j][k] } else { b[k][j] };
                                    if e != 0 {
                                        next[i][j] += &acc[i][k].scale_int(e);
                                    }
                                }
                            }
                        }
                        acc = next;
                    }
                }
            }
        }
        let tr: Scalar = (0..n).map(|i| acc[i][i].clone()).sum();
        &tr * &Scalar::ratio(1, n as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_monomials_have_requested_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let slots = constant_slots(2);
        for d in 0..8 {
            assert_eq!(random_monomial(&mut rng, 2, &slots, d).degree(), d);
        }
    }

    #[test]
    fn permutation_trace_is_tracial() {
        let tr = PermutationTrace::new(
            vec![vec![1, 2, 0], vec![0, 2, 1]],
            vec![vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 3]]],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let slots = constant_slots(1);
        for _ in 0..50 {
            let m = random_monomial(&mut rng, 2, &slots, 5);
            assert_eq!(tr.trace(&m), tr.trace(&m.cyclic_canonical()));
        }
        assert_eq!(tr.trace(&Monomial::one()), Scalar::one());
        // a 3-cycle has no fixed points, its square neither
        assert_eq!(tr.trace(&Monomial::u_pow(0, 2)), Scalar::zero());
        assert_eq!(tr.trace(&Monomial::u_pow(0, 3)), Scalar::one());
    }
}
