use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{estimate_mean, run_ensemble, to_c64, CumulantEstimate, EnsembleConfig, McError, Representation, C64};
use crate::calculus::{cyclic_d, partial_d, Var};
use crate::ncpoly::Polynomial;

/// Per-sample value of `Σ Tr A · Tr B` over `∂_i p = Σ A ⊗ B` plus
/// `N Tr((𝒟_i tV) p)`; its mean is the Schwinger-Dyson residual, since the
/// first and second cumulant terms recombine into one mixed moment.
pub fn sd_residual(
    p: &Polynomial,
    var: Var,
    config: &EnsembleConfig,
    rho: &Representation,
) -> Result<CumulantEstimate, McError> {
    let split = partial_d(var, p);
    let drift = cyclic_d(var, &config.potential).mul(p);
    let n = config.n as f64;
    let mut values = Vec::with_capacity(config.samples);
    run_ensemble(config, rho, 0, |us| {
        let mut r = Complex::new(0.0, 0.0);
        for (key, c) in split.terms() {
            r += to_c64(c) * rho.evaluate_word(&key[0], us)? * rho.evaluate_word(&key[1], us)?;
        }
        if config.coupling != 0.0 {
            r += n * config.coupling * rho.evaluate(&drift, us)?;
        }
        values.push(r);
        Ok(())
    })?;
    estimate_mean(&values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoNode {
    pub coupling: f64,
    pub mean: f64,
    pub std_error: f64,
    pub acceptance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoEstimate {
    pub value: f64,
    pub std_error: f64,
    pub nodes: Vec<ThermoNode>,
}

/// `F_N(t) = ∫_0^t E_{sV}[N^{-1} Tr ρ_N(V)] ds` by composite Simpson over
/// `intervals` (at least 8, rounded up to even), a fresh chain per node.
pub fn thermo_free_energy(
    config: &EnsembleConfig,
    rho: &Representation,
    intervals: usize,
) -> Result<ThermoEstimate, McError> {
    if intervals < 8 {
        return Err(McError::Config(format!("quadrature needs at least 8 intervals, got {intervals}")));
    }
    let t = config.coupling;
    if t == 0.0 {
        return Ok(ThermoEstimate { value: 0.0, std_error: 0.0, nodes: Vec::new() });
    }
    let intervals = intervals + intervals % 2;
    let h = t / intervals as f64;
    let n = config.n as f64;
    let mut value = 0.0;
    let mut variance = 0.0;
    let mut nodes = Vec::with_capacity(intervals + 1);
    for j in 0..=intervals {
        let s = h * j as f64;
        let node_config = EnsembleConfig { coupling: s, ..config.clone() };
        let mut values = Vec::with_capacity(config.samples);
        let diag = run_ensemble(&node_config, rho, j as u64, |us| {
            values.push(rho.evaluate(&config.potential, us)? / n);
            Ok(())
        })?;
        let est = estimate_mean(&values)?;
        let w = h / 3.0
            * if j == 0 || j == intervals {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
        value += w * est.value.re;
        variance += w * w * est.std_error * est.std_error;
        nodes.push(ThermoNode {
            coupling: s,
            mean: est.value.re,
            std_error: est.std_error,
            acceptance: diag.acceptance,
        });
    }
    Ok(ThermoEstimate { value, std_error: variance.sqrt(), nodes })
}

/// Empirical tail of `|Tr ρ(p) - mean|` in units of `deg p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailTable {
    pub degree: usize,
    pub samples: usize,
    pub std_dev: f64,
    pub deltas: Vec<f64>,
    /// Fraction of samples with deviation at least `δ · deg p`.
    pub frequencies: Vec<f64>,
    /// `c` in the fit `log f ≈ log C - c δ²`.
    pub decay: f64,
    /// Smallest `C` with `f(δ) ≤ C e^{-c δ²}` on the grid.
    pub envelope: f64,
}

/// Fewest exceedances for a grid point to enter the fit.
const MIN_TAIL_COUNT: usize = 10;

impl TailTable {
    pub fn from_values(values: &[C64], degree: usize, deltas: &[f64]) -> Self {
        let samples = values.len();
        let mean: C64 = values.iter().sum::<C64>() / samples.max(1) as f64;
        let deviations: Vec<f64> = values.iter().map(|v| (v - mean).norm()).collect();
        let std_dev = (deviations.iter().map(|d| d * d).sum::<f64>() / samples.max(1) as f64).sqrt();
        let scale = degree.max(1) as f64;
        let counts: Vec<usize> =
            deltas.iter().map(|&d| deviations.iter().filter(|&&x| x >= d * scale).count()).collect();
        let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / samples.max(1) as f64).collect();
        let points: Vec<(f64, f64)> = deltas
            .iter()
            .zip(&counts)
            .zip(&frequencies)
            .filter(|((_, &c), _)| c >= MIN_TAIL_COUNT)
            .map(|((&d, _), &f)| (d * d, f.ln()))
            .collect();
        let decay = if points.len() >= 2 {
            let m = points.len() as f64;
            let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
            let my = points.iter().map(|p| p.1).sum::<f64>() / m;
            let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            -sxy / sxx
        } else {
            f64::NAN
        };
        let envelope = deltas.iter().zip(&frequencies).map(|(&d, &f)| f * (decay * d * d).exp()).fold(0.0, f64::max);
        Self { degree, samples, std_dev, deltas: deltas.to_vec(), frequencies, decay, envelope }
    }

    pub fn is_monotone(&self) -> bool {
        self.frequencies.windows(2).all(|w| w[1] <= w[0])
    }

    /// Positive decay rate and every frequency under the envelope.
    pub fn gaussian_dominated(&self) -> bool {
        self.decay > 0.0
            && self
                .deltas
                .iter()
                .zip(&self.frequencies)
                .all(|(&d, &f)| f <= self.envelope * (-self.decay * d * d).exp() * (1.0 + 1e-12))
    }
}

/// Samples `Tr ρ(p)` under the ensemble and tabulates its tail.
pub fn concentration_tail(
    p: &Polynomial,
    deltas: &[f64],
    config: &EnsembleConfig,
    rho: &Representation,
) -> Result<TailTable, McError> {
    let mut values = Vec::with_capacity(config.samples);
    run_ensemble(config, rho, 0, |us| {
        values.push(rho.evaluate(p, us)?);
        Ok(())
    })?;
    Ok(TailTable::from_values(&values, p.degree(), deltas))
}

/// Weighted least-squares fit of `a + b / N²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseSquareFit {
    pub intercept: f64,
    pub intercept_se: f64,
    pub slope: f64,
    pub slope_se: f64,
}

/// Points are `(N, value, std_error)`; needs two distinct `N`.
pub fn fit_inverse_square(points: &[(usize, f64, f64)]) -> Result<InverseSquareFit, McError> {
    let mut n_values: Vec<usize> = points.iter().map(|p| p.0).collect();
    n_values.sort_unstable();
    n_values.dedup();
    if n_values.len() < 2 {
        return Err(McError::Config("1/N² fit needs two distinct N".into()));
    }
    let (mut s, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(n, y, se) in points {
        let w = 1.0 / (se * se).max(1e-300);
        let x = 1.0 / (n as f64 * n as f64);
        s += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = s * sxx - sx * sx;
    Ok(InverseSquareFit {
        intercept: (sxx * sy - sx * sxy) / det,
        intercept_se: (sxx / det).sqrt(),
        slope: (s * sxy - sx * sy) / det,
        slope_se: (s / det).sqrt(),
    })
}
