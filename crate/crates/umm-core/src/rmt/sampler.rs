use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{CMatrix, McError, Representation};
use crate::masterfield::is_cyclically_selfadjoint;
use crate::ncpoly::Polynomial;

/// Recorded in reports so runs can be reproduced.
pub const RNG_NAME: &str = "chacha8";

/// Relative tolerance on `Im Tr ρ_N(V)`.
const IMAGINARY_TOLERANCE: f64 = 1e-9;

/// Sweeps between step-size adjustments during burn-in.
const TUNE_WINDOW: usize = 50;

/// Sweeps between re-orthonormalisations of the chain state.
const REPROJECT_EVERY: usize = 200;

/// Unitaries with their adjoints cached.
#[derive(Debug, Clone)]
pub struct UnitaryTuple {
    us: Vec<CMatrix>,
    adjoints: Vec<CMatrix>,
}

impl UnitaryTuple {
    pub fn new(us: Vec<CMatrix>) -> Self {
        let adjoints = us.iter().map(CMatrix::adjoint).collect();
        Self { us, adjoints }
    }

    pub fn len(&self) -> usize {
        self.us.len()
    }

    pub fn is_empty(&self) -> bool {
        self.us.is_empty()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.us
    }

    /// `U_var` or its inverse.
    pub fn get(&self, var: usize, inverse: bool) -> Option<&CMatrix> {
        if inverse {
            self.adjoints.get(var)
        } else {
            self.us.get(var)
        }
    }

    pub fn set(&mut self, var: usize, u: CMatrix) {
        self.adjoints[var] = u.adjoint();
        self.us[var] = u;
    }

    /// Left multiplication of every unitary by a fixed `P`.
    pub fn left_multiply(&self, p: &CMatrix) -> Self {
        Self::new(self.us.iter().map(|u| p * u).collect())
    }
}

/// Haar unitary: QR of a complex Ginibre matrix, columns rephased so that the
/// diagonal of `R` is positive.
pub fn sample_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    phase_fixed_q(g)
}

/// `max |(U*U - I)_{ij}|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn phase_fixed_q(m: CMatrix) -> CMatrix {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > 0.0 {
            col *= d / norm;
        }
    }
    q
}

/// Cayley transform `(I - X)^{-1}(I + X)` of `X = ε H / 2` with `H` a random
/// anti-Hermitian matrix; exactly unitary and symmetric in `H → -H`.
fn cayley_step<R: Rng + ?Sized>(n: usize, step: f64, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let scale = step / (2.0 * (2.0 * n as f64).sqrt());
    let x = (&g - g.adjoint()) * Complex::new(scale, 0.0);
    let id = CMatrix::identity(n, n);
    (&id - &x).lu().solve(&(&id + &x)).expect("I - X is invertible for anti-Hermitian X")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetropolisConfig {
    pub step: f64,
    pub burn_in: usize,
    pub thinning: usize,
    pub tune: bool,
}

impl Default for MetropolisConfig {
    fn default() -> Self {
        Self { step: 0.5, burn_in: 500, thinning: 2, tune: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SamplerKind {
    IidHaar,
    Metropolis(MetropolisConfig),
}

/// Everything needed to draw samples from `μ_N^{tV}` except the representation.
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub n: usize,
    pub unitaries: usize,
    pub potential: Polynomial,
    pub coupling: f64,
    pub sampler: SamplerKind,
    pub seed: u64,
    pub samples: usize,
}

impl EnsembleConfig {
    pub fn haar(n: usize, unitaries: usize, samples: usize, seed: u64) -> Self {
        Self {
            n,
            unitaries,
            potential: Polynomial::zero(),
            coupling: 0.0,
            sampler: SamplerKind::IidHaar,
            seed,
            samples,
        }
    }

    pub fn gibbs(n: usize, unitaries: usize, potential: Polynomial, coupling: f64, samples: usize, seed: u64) -> Self {
        Self {
            n,
            unitaries,
            potential,
            coupling,
            sampler: SamplerKind::Metropolis(MetropolisConfig::default()),
            seed,
            samples,
        }
    }

    fn is_free(&self) -> bool {
        self.coupling == 0.0 || self.potential.is_zero()
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.n == 0 {
            return Err(McError::EmptyMatrix);
        }
        match self.sampler {
            SamplerKind::IidHaar if !self.is_free() => {
                Err(McError::Config("iid-haar sampling needs t = 0 or V = 0".into()))
            }
            SamplerKind::Metropolis(m) if !(m.step > 0.0) || m.thinning == 0 => {
                Err(McError::Config("metropolis needs step > 0 and thinning >= 1".into()))
            }
            SamplerKind::Metropolis(_) if !self.is_free() && !is_cyclically_selfadjoint(&self.potential) => {
                Err(McError::NotReal)
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    /// Acceptance rate after burn-in; 1 for iid sampling.
    pub acceptance: f64,
    pub step: f64,
    pub sweeps: usize,
    pub samples: usize,
}

struct Chain<'a> {
    config: &'a EnsembleConfig,
    rho: &'a Representation,
    rng: ChaCha8Rng,
    state: UnitaryTuple,
    action: f64,
}

impl Chain<'_> {
    fn action(&self, us: &UnitaryTuple) -> Result<f64, McError> {
        let tr = self.rho.evaluate(&self.config.potential, us)?;
        if tr.im.abs() > IMAGINARY_TOLERANCE * tr.re.abs().max(1.0) {
            return Err(McError::ComplexAction { re: tr.re, im: tr.im });
        }
        Ok(self.config.n as f64 * self.config.coupling * tr.re)
    }

    /// One proposal per unitary; returns the number accepted.
    fn sweep(&mut self, step: f64) -> Result<usize, McError> {
        let mut accepted = 0;
        for j in 0..self.state.len() {
            let c = cayley_step(self.config.n, step, &mut self.rng);
            let proposal = &self.state.matrices()[j] * c;
            let mut trial = self.state.clone();
            trial.set(j, proposal);
            let action = self.action(&trial)?;
            let u: f64 = self.rng.random();
            if u.ln() < action - self.action {
                self.state = trial;
                self.action = action;
                accepted += 1;
            }
        }
        Ok(accepted)
    }

    fn reproject(&mut self) -> Result<(), McError> {
        for j in 0..self.state.len() {
            let q = phase_fixed_q(self.state.matrices()[j].clone());
            self.state.set(j, q);
        }
        self.action = self.action(&self.state)?;
        Ok(())
    }
}

/// Draws `config.samples` tuples from chain `chain` (seeded with
/// `seed ^ chain`) and hands each to `observe`.
pub fn run_ensemble<F>(
    config: &EnsembleConfig,
    rho: &Representation,
    chain: u64,
    mut observe: F,
) -> Result<ChainDiagnostics, McError>
where
    F: FnMut(&UnitaryTuple) -> Result<(), McError>,
{
    config.validate()?;
    if rho.size() != config.n {
        return Err(McError::Config(format!("representation has size {} but N = {}", rho.size(), config.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ chain);
    let metropolis = match config.sampler {
        SamplerKind::Metropolis(m) if !config.is_free() => m,
        _ => {
            for _ in 0..config.samples {
                let us = UnitaryTuple::new((0..config.unitaries).map(|_| sample_haar(config.n, &mut rng)).collect());
                observe(&us)?;
            }
            return Ok(ChainDiagnostics { acceptance: 1.0, step: 0.0, sweeps: 0, samples: config.samples });
        }
    };
    let state = UnitaryTuple::new((0..config.unitaries).map(|_| sample_haar(config.n, &mut rng)).collect());
    let mut chain = Chain { config, rho, rng, state, action: 0.0 };
    chain.action = chain.action(&chain.state)?;
    let proposals_per_sweep = config.unitaries.max(1);
    let mut step = metropolis.step;
    let mut window = 0;
    let mut sweeps = 0;
    for s in 0..metropolis.burn_in {
        window += chain.sweep(step)?;
        sweeps += 1;
        if metropolis.tune && (s + 1) % TUNE_WINDOW == 0 {
            let rate = window as f64 / (TUNE_WINDOW * proposals_per_sweep) as f64;
            if rate < 0.3 {
                step *= 0.7;
            } else if rate > 0.6 {
                step *= 1.4;
            }
            window = 0;
        }
        if sweeps % REPROJECT_EVERY == 0 {
            chain.reproject()?;
        }
    }
    let mut accepted = 0;
    for _ in 0..config.samples {
        for _ in 0..metropolis.thinning {
            accepted += chain.sweep(step)?;
            sweeps += 1;
            if sweeps % REPROJECT_EVERY == 0 {
                chain.reproject()?;
            }
        }
        observe(&chain.state)?;
    }
    let proposals = (config.samples * metropolis.thinning * proposals_per_sweep).max(1);
    Ok(ChainDiagnostics { acceptance: accepted as f64 / proposals as f64, step, sweeps, samples: config.samples })
}
