//! Monte Carlo oracle: Haar and Gibbs sampling on `U(N)^m`, word traces under
//! a matrix representation of the constants, and cumulant estimators.

mod estimate;
mod experiments;
mod sampler;

pub use estimate::{estimate_cumulant, estimate_mean, CumulantEstimate, MIN_SAMPLES};
pub use experiments::{
    concentration_tail, fit_inverse_square, sd_residual, thermo_free_energy, InverseSquareFit, TailTable,
    ThermoEstimate,
};
pub use sampler::{
    run_ensemble, sample_haar, unitarity_defect, ChainDiagnostics, EnsembleConfig, MetropolisConfig, SamplerKind,
    UnitaryTuple, RNG_NAME,
};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::ncpoly::{DiagonalSpectra, GenLetter, Letter, MatrixTrace, Monomial, Polynomial};
use crate::scalar::Scalar;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum McError {
    #[error("no matrix for constant generator #{0}")]
    MissingGenerator(usize),
    #[error("word uses u{var} but only {unitaries} unitaries are sampled")]
    MissingUnitary { var: usize, unitaries: usize },
    #[error("matrix size {n} is not a multiple of the block size {block}")]
    BlockSize { n: usize, block: usize },
    #[error("matrix size must be positive")]
    EmptyMatrix,
    #[error("action has imaginary part {im:e} against real part {re:e}; the ensemble is not real")]
    ComplexAction { re: f64, im: f64 },
    #[error("{have} samples given, at least {need} are needed")]
    InsufficientSamples { have: usize, need: usize },
    #[error("cumulant order {0} outside 1..=4")]
    CumulantOrder(usize),
    #[error("potential is not selfadjoint up to cyclic symmetry")]
    NotReal,
    #[error("{0}")]
    Config(String),
}

pub(crate) fn to_c64(s: &Scalar) -> C64 {
    let (re, im) = s.to_f64_pair();
    Complex::new(re, im)
}

#[derive(Debug, Clone)]
enum ConstantMatrix {
    Diagonal(Vec<C64>),
    Dense(CMatrix),
}

/// A factor of a word product; diagonal matrices stay diagonal.
enum Factor<'a> {
    Diagonal(Vec<C64>),
    Borrowed(&'a CMatrix),
    Owned(CMatrix),
}

impl Factor<'_> {
    fn times(self, rhs: Factor<'_>) -> Factor<'static> {
        match (self, rhs) {
            (Factor::Diagonal(a), Factor::Diagonal(b)) => {
                Factor::Diagonal(a.iter().zip(&b).map(|(x, y)| x * y).collect())
            }
            (Factor::Diagonal(d), Factor::Borrowed(m)) => Factor::Owned(scale_rows(m.clone(), &d)),
            (Factor::Diagonal(d), Factor::Owned(m)) => Factor::Owned(scale_rows(m, &d)),
            (Factor::Borrowed(m), Factor::Diagonal(d)) => Factor::Owned(scale_columns(m.clone(), &d)),
            (Factor::Owned(m), Factor::Diagonal(d)) => Factor::Owned(scale_columns(m, &d)),
            (lhs, rhs) => Factor::Owned(lhs.matrix() * rhs.matrix()),
        }
    }

    fn matrix(&self) -> &CMatrix {
        match self {
            Factor::Borrowed(m) => m,
            Factor::Owned(m) => m,
            Factor::Diagonal(_) => unreachable!("diagonal factors are handled by scaling"),
        }
    }

    /// `Tr(self · rhs)` without forming the product.
    fn trace_with(&self, rhs: &Factor<'_>) -> C64 {
        match (self, rhs) {
            (Factor::Diagonal(a), Factor::Diagonal(b)) => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            (Factor::Diagonal(d), m) | (m, Factor::Diagonal(d)) => {
                let m = m.matrix();
                d.iter().enumerate().map(|(i, x)| x * m[(i, i)]).sum()
            }
            (a, b) => {
                let (a, b) = (a.matrix(), b.matrix());
                let n = a.nrows();
                let mut total = Complex::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        total += a[(i, j)] * b[(j, i)];
                    }
                }
                total
            }
        }
    }
}

fn scale_rows(mut m: CMatrix, d: &[C64]) -> CMatrix {
    for (i, mut row) in m.row_iter_mut().enumerate() {
        row *= d[i];
    }
    m
}

fn scale_columns(mut m: CMatrix, d: &[C64]) -> CMatrix {
    for (j, mut col) in m.column_iter_mut().enumerate() {
        col *= d[j];
    }
    m
}

/// `ρ_N` on the generators of the constant algebra.
#[derive(Debug, Clone)]
pub struct Representation {
    n: usize,
    generators: Vec<ConstantMatrix>,
}

impl Representation {
    /// Each spectrum repeated `N / n` times, so normalized traces of words in
    /// `B` do not depend on `N`.
    pub fn from_spectra(spectra: &DiagonalSpectra, n: usize) -> Result<Self, McError> {
        let block = spectra.block_size();
        if n == 0 {
            return Err(McError::EmptyMatrix);
        }
        if !n.is_multiple_of(block) {
            return Err(McError::BlockSize { n, block });
        }
        let generators = spectra
            .spectra()
            .iter()
            .map(|s| ConstantMatrix::Diagonal((0..n).map(|j| to_c64(&s[j % block])).collect()))
            .collect();
        Ok(Self { n, generators })
    }

    /// Block-diagonal repetition of fixed `n × n` matrices.
    pub fn from_matrices(data: &MatrixTrace, n: usize) -> Result<Self, McError> {
        let block = data.dimension();
        if n == 0 {
            return Err(McError::EmptyMatrix);
        }
        if !n.is_multiple_of(block) {
            return Err(McError::BlockSize { n, block });
        }
        let generators = data
            .matrices()
            .iter()
            .map(|m| {
                ConstantMatrix::Dense(CMatrix::from_fn(n, n, |i, j| {
                    if i / block == j / block {
                        to_c64(&m[i % block][j % block])
                    } else {
                        Complex::new(0.0, 0.0)
                    }
                }))
            })
            .collect();
        Ok(Self { n, generators })
    }

    /// No constants beyond the unit.
    pub fn trivial(n: usize) -> Self {
        Self { n, generators: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Operator norm of each generator.
    pub fn operator_norms(&self) -> Vec<f64> {
        self.generators
            .iter()
            .map(|g| match g {
                ConstantMatrix::Diagonal(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
                ConstantMatrix::Dense(m) => m.singular_values().iter().copied().fold(0.0, f64::max),
            })
            .collect()
    }

    /// Whether `‖ρ(b)‖ ≤ bound[b]` for every generator.
    pub fn respects_norms(&self, bounds: &[f64]) -> bool {
        self.operator_norms().iter().zip(bounds).all(|(n, b)| *n <= b * (1.0 + 1e-12))
    }

    fn constant(&self, l: GenLetter) -> Result<Factor<'_>, McError> {
        let g = self.generators.get(l.gen as usize).ok_or(McError::MissingGenerator(l.gen as usize))?;
        let adjoint = l.adjoint && !l.selfadjoint;
        Ok(match g {
            ConstantMatrix::Diagonal(d) if adjoint => Factor::Diagonal(d.iter().map(|z| z.conj()).collect()),
            ConstantMatrix::Diagonal(d) => Factor::Diagonal(d.clone()),
            ConstantMatrix::Dense(b) if adjoint => Factor::Owned(b.adjoint()),
            ConstantMatrix::Dense(b) => Factor::Borrowed(b),
        })
    }

    /// `Tr ρ_N(m)(U)`: left-to-right product, then trace. Diagonal factors
    /// are applied by scaling and the last product is never formed.
    pub fn evaluate_word(&self, m: &Monomial, us: &UnitaryTuple) -> Result<C64, McError> {
        let mut factors: Vec<Factor<'_>> = Vec::with_capacity(m.len());
        for l in m.letters() {
            match l {
                Letter::Unitary { var, inverse } => {
                    let var = *var as usize;
                    let u =
                        us.get(var, *inverse).ok_or(McError::MissingUnitary { var: var + 1, unitaries: us.len() })?;
                    factors.push(Factor::Borrowed(u));
                }
                Letter::Constant(w) => {
                    for &g in w.iter() {
                        factors.push(self.constant(g)?);
                    }
                }
            }
        }
        let Some(last) = factors.pop() else {
            return Ok(Complex::new(self.n as f64, 0.0));
        };
        let mut acc = Factor::Diagonal(vec![Complex::new(1.0, 0.0); self.n]);
        for f in factors {
            acc = acc.times(f);
        }
        Ok(acc.trace_with(&last))
    }

    /// `Tr ρ_N(p)(U)` by linearity.
    pub fn evaluate(&self, p: &Polynomial, us: &UnitaryTuple) -> Result<C64, McError> {
        let mut total = Complex::new(0.0, 0.0);
        for (m, c) in p.terms() {
            total += to_c64(c) * self.evaluate_word(m, us)?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{parse_polynomial, Alphabet};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_words_give_n() {
        let a = Alphabet::with_constants(1, &["x"]).unwrap();
        let d = DiagonalSpectra::from_ratios(&[&[(1, 2), (-1, 1)]]).unwrap();
        let rho = Representation::from_spectra(&d, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let us = UnitaryTuple::new(vec![sample_haar(6, &mut rng)]);
        let one = rho.evaluate(&Polynomial::one(), &us).unwrap();
        assert!((one - Complex::new(6.0, 0.0)).norm() < 1e-12);
        let uu = parse_polynomial("u1 x u1^-1", &a).unwrap();
        // Tr(U X U*) = Tr X = 3 · (1/2 - 1)
        assert!((rho.evaluate(&uu, &us).unwrap() - Complex::new(-1.5, 0.0)).norm() < 1e-12);
        assert!(Representation::from_spectra(&d, 5).is_err());
    }

    #[test]
    fn contraction_bound() {
        let a = Alphabet::with_constants(1, &["x", "y"]).unwrap();
        let d = DiagonalSpectra::from_ratios(&[&[(1, 2), (-1, 1)], &[(1, 3), (3, 4)]]).unwrap();
        let rho = Representation::from_spectra(&d, 8).unwrap();
        let norms = rho.operator_norms();
        assert!((norms[0] - 1.0).abs() < 1e-15 && (norms[1] - 0.75).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let us = UnitaryTuple::new(vec![sample_haar(8, &mut rng)]);
        let p = parse_polynomial("x u1 y u1^-1 y", &a).unwrap();
        let v = rho.evaluate(&p, &us).unwrap() / 8.0;
        assert!(v.norm() <= norms[0] * norms[1] * norms[1] + 1e-12);
    }

    #[test]
    fn dense_blocks_repeat() {
        let data = MatrixTrace::from_integers(&[&[&[0, 1], &[1, 0]]]).unwrap();
        let rho = Representation::from_matrices(&data, 4).unwrap();
        let a = Alphabet::with_constants(0, &["x"]).unwrap();
        let us = UnitaryTuple::new(Vec::new());
        let x2 = rho.evaluate(&parse_polynomial("x x", &a).unwrap(), &us).unwrap();
        assert!((x2 - Complex::new(4.0, 0.0)).norm() < 1e-12);
        assert!(rho.respects_norms(&[1.0]));
    }
}
