use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{McError, C64};

/// Fewest samples accepted by the jackknife.
pub const MIN_SAMPLES: usize = 100;

const JACKKNIFE_BLOCKS: usize = 50;

/// Roundoff floor for comparisons with exact targets.
const ABSOLUTE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CumulantEstimate {
    pub value: C64,
    /// Jackknife error of the complex value, `sqrt(var_re + var_im)`.
    pub std_error: f64,
    pub order: usize,
    pub samples: usize,
}

impl CumulantEstimate {
    /// `|value - target| ≤ sigmas · std_error`, with a roundoff floor.
    pub fn consistent_with(&self, target: C64, sigmas: f64) -> bool {
        (self.value - target).norm() <= sigmas * self.std_error + ABSOLUTE_FLOOR * (1.0 + target.norm())
    }

    /// Deviation from `target` in units of the standard error.
    pub fn z_score(&self, target: C64) -> f64 {
        let d = (self.value - target).norm();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d <= ABSOLUTE_FLOOR {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// All set partitions of `{0, ..., k-1}`, each as a list of block masks.
fn set_partitions(k: usize) -> Vec<Vec<u8>> {
    fn go(j: usize, k: usize, blocks: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if j == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << j;
            go(j + 1, k, blocks, out);
            blocks[b] &= !(1 << j);
        }
        blocks.push(1 << j);
        go(j + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, k, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Möbius inversion `κ = Σ_π (-1)^{|π|-1} (|π|-1)! Π_{B ∈ π} m_B`.
fn cumulant_from_sums(sums: &[C64], count: f64, partitions: &[Vec<u8>]) -> C64 {
    partitions
        .iter()
        .map(|pi| {
            let sign = if pi.len() % 2 == 1 { 1.0 } else { -1.0 };
            let weight = sign * factorial(pi.len() - 1);
            pi.iter().fold(Complex::new(weight, 0.0), |acc, &b| acc * sums[b as usize] / count)
        })
        .sum()
}

/// Mixed cumulant of `k ≤ 4` observables; `values[s][j]` is observable `j` in
/// sample `s`. Errors come from a delete-one-block jackknife.
pub fn estimate_cumulant(values: &[Vec<C64>]) -> Result<CumulantEstimate, McError> {
    let samples = values.len();
    if samples < MIN_SAMPLES {
        return Err(McError::InsufficientSamples { have: samples, need: MIN_SAMPLES });
    }
    let k = values[0].len();
    if k == 0 || k > 4 || values.iter().any(|v| v.len() != k) {
        return Err(McError::CumulantOrder(k));
    }
    let masks = 1usize << k;
    let blocks = JACKKNIFE_BLOCKS.min(samples);
    let mut block_sums = vec![vec![Complex::new(0.0, 0.0); masks]; blocks];
    let mut block_counts = vec![0usize; blocks];
    for (s, row) in values.iter().enumerate() {
        let b = s * blocks / samples;
        block_counts[b] += 1;
        for mask in 1..masks {
            let prod = (0..k).filter(|j| mask & (1 << j) != 0).fold(Complex::new(1.0, 0.0), |acc, j| acc * row[j]);
            block_sums[b][mask] += prod;
        }
    }
    let mut total = vec![Complex::new(0.0, 0.0); masks];
    for sums in &block_sums {
        for (t, s) in total.iter_mut().zip(sums) {
            *t += s;
        }
    }
    let partitions = set_partitions(k);
    let value = cumulant_from_sums(&total, samples as f64, &partitions);
    let leave_out: Vec<C64> = (0..blocks)
        .map(|b| {
            let sums: Vec<C64> = total.iter().zip(&block_sums[b]).map(|(t, s)| t - s).collect();
            cumulant_from_sums(&sums, (samples - block_counts[b]) as f64, &partitions)
        })
        .collect();
    let mean: C64 = leave_out.iter().sum::<C64>() / blocks as f64;
    let spread: f64 = leave_out.iter().map(|v| (v - mean).norm_sqr()).sum();
    let std_error = ((blocks as f64 - 1.0) / blocks as f64 * spread).sqrt();
    Ok(CumulantEstimate { value, std_error, order: k, samples })
}

/// First cumulant of a single observable.
pub fn estimate_mean(values: &[C64]) -> Result<CumulantEstimate, McError> {
    let rows: Vec<Vec<C64>> = values.iter().map(|&v| vec![v]).collect();
    estimate_cumulant(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64) -> C64 {
        Complex::new(re, 0.0)
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (1..=4).map(|k| set_partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 15]);
    }

    #[test]
    fn second_cumulant_is_covariance() {
        let rows: Vec<Vec<C64>> = (0..200).map(|s| vec![c(s as f64), c((s % 7) as f64)]).collect();
        let n = rows.len() as f64;
        let mx: f64 = rows.iter().map(|r| r[0].re).sum::<f64>() / n;
        let my: f64 = rows.iter().map(|r| r[1].re).sum::<f64>() / n;
        let cov = rows.iter().map(|r| r[0].re * r[1].re).sum::<f64>() / n - mx * my;
        let est = estimate_cumulant(&rows).unwrap();
        assert!((est.value.re - cov).abs() < 1e-9);
        assert!(est.std_error > 0.0);
    }

    #[test]
    fn gaussian_fourth_cumulant_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs: Vec<f64> = (0..20000).map(|_| rng.sample(StandardNormal)).collect();
        let rows: Vec<Vec<C64>> = xs.iter().map(|&x| vec![c(x); 4]).collect();
        let k4 = estimate_cumulant(&rows).unwrap();
        assert!(k4.consistent_with(c(0.0), 4.0), "{k4:?}");
        let rows2: Vec<Vec<C64>> = xs.iter().map(|&x| vec![c(x); 2]).collect();
        assert!(estimate_cumulant(&rows2).unwrap().consistent_with(c(1.0), 4.0));
    }

    #[test]
    fn constant_argument_disconnects() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<C64>> = (0..1000).map(|_| vec![c(rng.sample(StandardNormal)), c(2.5)]).collect();
        let est = estimate_cumulant(&rows).unwrap();
        assert!(est.value.norm() < 1e-9);
    }

    #[test]
    fn too_few_samples() {
        assert_eq!(estimate_mean(&[c(1.0); 10]), Err(McError::InsufficientSamples { have: 10, need: MIN_SAMPLES }));
    }
}
