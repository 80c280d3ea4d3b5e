//! Haar trace from free probability alone: `B`, `C⟨u_1⟩`, ..., `C⟨u_m⟩` are
//! free, `φ|_B = σ_0`, and the free cumulants of a Haar unitary are known.
//! Shares nothing with the Schwinger-Dyson recursion.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::Result;
use crate::ncpoly::{Letter, Monomial, Polynomial, TraceData};
use crate::scalar::Scalar;

/// `κ_{2m}(u, u*, ..., u, u*) = (-1)^{m-1} C_{m-1}`; odd or non-alternating
/// cumulants vanish, as do mixed cumulants of free variables.
fn haar_cumulant(half: usize) -> Scalar {
    let n = half as u64 - 1;
    let rising = (1..=n).fold(BigInt::from(1), |acc, k| acc * (n + k));
    let factorial = (1..=n + 1).fold(BigInt::from(1), |acc, k| acc * k);
    let c = Scalar::real((rising / factorial).into());
    if n.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

fn balanced(m: &Monomial) -> bool {
    let mut net: HashMap<usize, i64> = HashMap::new();
    for l in m.letters() {
        if let Some((v, inv)) = l.as_unitary() {
            *net.entry(v).or_default() += if inv { -1 } else { 1 };
        }
    }
    net.values().all(|&n| n == 0)
}

/// Moment-cumulant evaluator with a cache shared across calls.
///
/// Writes a word as `x_1 b_1 x_2 b_2 ... x_n b_n` with unitary letters `x_k`
/// and (possibly trivial) constants `b_k`, then expands over the noncrossing
/// block containing `x_1`; what sits between consecutive elements of that
/// block is a shorter word whose trace is computed recursively.
#[derive(Debug)]
pub struct FreenessOracle<'a> {
    data: &'a dyn TraceData,
    memo: HashMap<Monomial, Scalar>,
}

impl<'a> FreenessOracle<'a> {
    pub fn new(data: &'a dyn TraceData) -> Self {
        Self { data, memo: HashMap::new() }
    }

    pub fn eval(&mut self, p: &Polynomial) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in p.terms() {
            total += &(c * &self.trace(m)?);
        }
        Ok(total)
    }

    pub fn trace(&mut self, m: &Monomial) -> Result<Scalar> {
        let w = m.cyclic_canonical();
        if let Some(word) = w.constant_word() {
            return Ok(self.data.sigma0(word)?);
        }
        if !balanced(&w) {
            return Ok(Scalar::zero());
        }
        if let Some(v) = self.memo.get(&w) {
            return Ok(v.clone());
        }
        let start = w.letters().iter().position(Letter::is_unitary).expect("nonconstant");
        let word = w.rotate_to_front(start);
        let letters = word.letters();
        let unitary_positions: Vec<usize> = (0..letters.len()).filter(|&j| letters[j].is_unitary()).collect();
        let mut total = Scalar::zero();
        let mut block = vec![0usize];
        self.expand(letters, &unitary_positions, &mut block, Scalar::one(), &mut total)?;
        self.memo.insert(w, total.clone());
        Ok(total)
    }

    /// Extends the block of `x_1` (indices into `unitary_positions`); `partial`
    /// is the product of the gap traces fixed so far.
    fn expand(
        &mut self,
        letters: &[Letter],
        unitary_positions: &[usize],
        block: &mut Vec<usize>,
        partial: Scalar,
        total: &mut Scalar,
    ) -> Result<()> {
        let last = *block.last().unwrap();
        let last_pos = unitary_positions[last];
        let (var, inverse) = letters[last_pos].as_unitary().unwrap();
        if block.len().is_multiple_of(2) {
            let tail = Monomial::reduce(letters[last_pos + 1..].iter().cloned());
            let t = self.trace(&tail)?;
            if !t.is_zero() {
                *total += &(&(&partial * &t) * &haar_cumulant(block.len() / 2));
            }
        }
        for next in last + 1..unitary_positions.len() {
            let pos = unitary_positions[next];
            if letters[pos].as_unitary() != Some((var, !inverse)) {
                continue;
            }
            let gap = Monomial::reduce(letters[last_pos + 1..pos].iter().cloned());
            let g = self.trace(&gap)?;
            if g.is_zero() {
                continue;
            }
            block.push(next);
            self.expand(letters, unitary_positions, block, &partial * &g, total)?;
            block.pop();
        }
        Ok(())
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }
}

/// The Haar master field on `p`, computed from freeness and `σ_0` only.
pub fn freeness_oracle(data: &dyn TraceData, p: &Polynomial) -> Result<Scalar> {
    FreenessOracle::new(data).eval(p)
}
