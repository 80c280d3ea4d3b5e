//! Trace data `σ_g` on the constant algebra.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::GenLetter;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceDataError {
    #[error("no trace data for generator #{0}")]
    UnknownGenerator(usize),
    #[error("trace data only known through genus {known}, genus {requested} requested")]
    GenusOutOfRange { requested: usize, known: usize },
    #[error("moment {power} of generator #{gen} at genus {genus} was not supplied")]
    MomentOutOfRange { gen: usize, genus: usize, power: usize },
    #[error("spectra must all have the same positive length")]
    SpectrumLength,
    #[error("moment data requires selfadjoint generators; #{0} is not")]
    NotSelfadjoint(usize),
}

/// `σ_g` on basis words of `B`, the coefficients of `N^{-2g}` in the normalized
/// traces of the represented constants.
pub trait TraceData: fmt::Debug + Send + Sync {
    /// Highest genus with known data, or `None` when every genus is known.
    fn genus_depth(&self) -> Option<usize>;

    fn sigma(&self, genus: usize, word: &[GenLetter]) -> Result<Scalar, TraceDataError>;

    fn sigma0(&self, word: &[GenLetter]) -> Result<Scalar, TraceDataError> {
        self.sigma(0, word)
    }

    fn check_genus(&self, genus: usize) -> Result<(), TraceDataError> {
        match self.genus_depth() {
            Some(known) if genus > known => Err(TraceDataError::GenusOutOfRange { requested: genus, known }),
            _ => Ok(()),
        }
    }
}

/// Constants realised as commuting diagonal matrices with fixed spectra.
///
/// Repeating each spectrum `N/n` times gives `N^{-1} Tr ρ_N(b) = σ_0(b)`
/// exactly for every `N` divisible by `n`, so all higher `σ_g` vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSpectra {
    spectra: Vec<Vec<Scalar>>,
}

impl DiagonalSpectra {
    pub fn new(spectra: Vec<Vec<Scalar>>) -> Result<Self, TraceDataError> {
        let n = spectra.first().map_or(1, Vec::len);
        if n == 0 || spectra.iter().any(|s| s.len() != n) {
            return Err(TraceDataError::SpectrumLength);
        }
        Ok(Self { spectra })
    }

    /// Convenience for integer/rational spectra given as `(num, den)` pairs.
    pub fn from_ratios(spectra: &[&[(i64, i64)]]) -> Result<Self, TraceDataError> {
        Self::new(spectra.iter().map(|s| s.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect()).collect())
    }

    pub fn block_size(&self) -> usize {
        self.spectra.first().map_or(1, Vec::len)
    }

    pub fn spectra(&self) -> &[Vec<Scalar>] {
        &self.spectra
    }
}

impl TraceData for DiagonalSpectra {
    fn genus_depth(&self) -> Option<usize> {
        None
    }

    fn sigma(&self, genus: usize, word: &[GenLetter]) -> Result<Scalar, TraceDataError> {
        if genus > 0 {
            return Ok(Scalar::zero());
        }
        let n = self.block_size();
        for l in word {
            if l.gen as usize >= self.spectra.len() {
                return Err(TraceDataError::UnknownGenerator(l.gen as usize));
            }
        }
        let mut total = Scalar::zero();
        for k in 0..n {
            let mut prod = Scalar::one();
            for l in word {
                let v = &self.spectra[l.gen as usize][k];
                prod = if l.adjoint { &prod * &v.conj() } else { &prod * v };
            }
            total += &prod;
        }
        Ok(&total * &Scalar::ratio(1, n as i64))
    }
}

/// Constants realised as fixed `n × n` matrices, `σ_0 = n^{-1} Tr`, with all
/// higher `σ_g` zero. Noncommuting generators give a faithful test of words in `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixTrace {
    matrices: Vec<Vec<Vec<Scalar>>>,
}

impl MatrixTrace {
    pub fn new(matrices: Vec<Vec<Vec<Scalar>>>) -> Result<Self, TraceDataError> {
        let n = matrices.first().map_or(1, Vec::len);
        if n == 0 || matrices.iter().any(|m| m.len() != n || m.iter().any(|row| row.len() != n)) {
            return Err(TraceDataError::SpectrumLength);
        }
        Ok(Self { matrices })
    }

    pub fn from_integers(matrices: &[&[&[i64]]]) -> Result<Self, TraceDataError> {
        Self::new(
            matrices
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(|&v| Scalar::int(v)).collect()).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.matrices.first().map_or(1, Vec::len)
    }

    pub fn matrices(&self) -> &[Vec<Vec<Scalar>>] {
        &self.matrices
    }

    fn entry(&self, l: GenLetter, i: usize, j: usize) -> Scalar {
        let m = &self.matrices[l.gen as usize];
        if l.adjoint {
            m[j][i].conj()
        } else {
            m[i][j].clone()
        }
    }
}

impl TraceData for MatrixTrace {
    fn genus_depth(&self) -> Option<usize> {
        None
    }

    fn sigma(&self, genus: usize, word: &[GenLetter]) -> Result<Scalar, TraceDataError> {
        if genus > 0 {
            return Ok(Scalar::zero());
        }
        if let Some(l) = word.iter().find(|l| l.gen as usize >= self.matrices.len()) {
            return Err(TraceDataError::UnknownGenerator(l.gen as usize));
        }
        let n = self.dimension();
        let mut acc: Vec<Vec<Scalar>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect()).collect();
        for &l in word {
            let mut next = vec![vec![Scalar::zero(); n]; n];
            for (i, row) in acc.iter().enumerate() {
                for (k, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, cell) in next[i].iter_mut().enumerate() {
                        let b = self.entry(l, k, j);
                        if !b.is_zero() {
                            *cell += &(a * &b);
                        }
                    }
                }
            }
            acc = next;
        }
        let trace: Scalar = (0..n).map(|i| acc[i][i].clone()).sum();
        Ok(&trace * &Scalar::ratio(1, n as i64))
    }
}

/// Independent, commuting selfadjoint constants with genus-expanded moments:
/// `moments[gen][g][k]` is the `N^{-2g}` coefficient of `N^{-1} Tr ρ_N(b)^k`
/// for `k ≥ 1`. Mixed words multiply the per-generator series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentMoments {
    moments: Vec<Vec<Vec<Scalar>>>,
    depth: usize,
}

impl IndependentMoments {
    /// `moments[gen][g]` lists moments `k = 1, 2, ...`; all generators must
    /// supply the same number of genera.
    pub fn new(moments: Vec<Vec<Vec<Scalar>>>) -> Result<Self, TraceDataError> {
        let genera = moments.first().map_or(1, Vec::len);
        if genera == 0 || moments.iter().any(|m| m.len() != genera) {
            return Err(TraceDataError::SpectrumLength);
        }
        Ok(Self { moments, depth: genera - 1 })
    }

    fn moment(&self, gen: usize, genus: usize, power: usize) -> Result<Scalar, TraceDataError> {
        if power == 0 {
            return Ok(if genus == 0 { Scalar::one() } else { Scalar::zero() });
        }
        let per_gen = self.moments.get(gen).ok_or(TraceDataError::UnknownGenerator(gen))?;
        per_gen[genus].get(power - 1).cloned().ok_or(TraceDataError::MomentOutOfRange { gen, genus, power })
    }
}

impl TraceData for IndependentMoments {
    fn genus_depth(&self) -> Option<usize> {
        Some(self.depth)
    }

    fn sigma(&self, genus: usize, word: &[GenLetter]) -> Result<Scalar, TraceDataError> {
        self.check_genus(genus)?;
        let mut powers: Vec<(usize, usize)> = Vec::new();
        for l in word {
            if !l.selfadjoint {
                return Err(TraceDataError::NotSelfadjoint(l.gen as usize));
            }
            match powers.iter_mut().find(|(g, _)| *g == l.gen as usize) {
                Some(slot) => slot.1 += 1,
                None => powers.push((l.gen as usize, 1)),
            }
        }
        // coefficient of N^{-2·genus} in the product of the generator series
        let mut series = vec![Scalar::zero(); genus + 1];
        series[0] = Scalar::one();
        for (gen, power) in powers {
            let mut next = vec![Scalar::zero(); genus + 1];
            for (a, s) in series.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                for b in 0..=genus - a {
                    next[a + b] += &(s * &self.moment(gen, b, power)?);
                }
            }
            series = next;
        }
        Ok(series.pop().unwrap())
    }
}

/// Checks `σ_0(𝟏) = 1`, `σ_g(𝟏) = 0` and `σ_0(vw) = σ_0(wv)` on all words of
/// length at most `max_len` over the first `gens` generators.
pub fn check_trace_data(data: &dyn TraceData, gens: &[GenLetter], max_len: usize) -> Result<bool, TraceDataError> {
    if data.sigma0(&[])? != Scalar::one() {
        return Ok(false);
    }
    let depth = data.genus_depth().unwrap_or(2);
    for g in 1..=depth {
        if !data.sigma(g, &[])?.is_zero() {
            return Ok(false);
        }
    }
    let mut words: Vec<Vec<GenLetter>> = vec![Vec::new()];
    let mut frontier = words.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in gens {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    for w in &words {
        for cut in 1..w.len() {
            let rotated: Vec<GenLetter> = w[cut..].iter().chain(&w[..cut]).copied().collect();
            if data.sigma0(w)? != data.sigma0(&rotated)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
