//! Monotone double Hurwitz numbers by exhaustive enumeration over `S_d`, and
//! the HCIZ free-energy Maclaurin coefficients assembled from them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncpoly::{GenLetter, TraceData};
use crate::scalar::Scalar;

/// Largest `d` accepted by [`partitions`].
pub const MAX_PARTITION_DEGREE: usize = 8;
/// Largest `d` accepted by the factorization enumerator.
pub const MAX_HURWITZ_DEGREE: usize = 6;

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.is_empty() {
            return Err(Error::Domain("partition parts must be positive and nonempty".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `|α|`.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `ℓ(α)`.
    pub fn length(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `2,1`, `(2,1)` or `2 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Domain(format!("bad partition part '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `d`, largest first part first.
pub fn partitions(d: usize) -> Result<Vec<Partition>> {
    if d == 0 || d > MAX_PARTITION_DEGREE {
        return Err(Error::Domain(format!("partitions need 1 <= d <= {MAX_PARTITION_DEGREE}, got {d}")));
    }
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    Ok(out)
}

/// A permutation of `{0, ..., d-1}` as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Self((0..d as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize).ok_or_else(|| Error::Domain("image out of range".into()))?;
            if *slot {
                return Err(Error::Domain("images are not a bijection".into()));
            }
            *slot = true;
        }
        Ok(Self(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// All of `S_d` in lexicographic order of image arrays.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..d as u8).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..d).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Right multiplication by the transposition `(a b)`: `σ ↦ σ∘(a b)`.
    fn times_transposition(&mut self, a: usize, b: usize) {
        self.0.swap(a, b);
    }

    pub fn cycle_type(&self) -> Partition {
        let mut seen = vec![false; self.0.len()];
        let mut parts = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        Partition::new(parts).expect("nonempty permutation")
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// How raw factorizations are counted; the set is locked by calibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HurwitzConvention {
    /// Sum over every `ρ` of cycle type `β` instead of one fixed representative.
    pub labeled_tuples: bool,
    /// Require `⟨ρ, τ_1, ..., τ_r⟩` to act transitively.
    pub transitive: bool,
    /// Divide the assembled coefficient by `d!`.
    pub divide_by_factorial: bool,
}

impl HurwitzConvention {
    /// The convention fixed by the `d ≤ 2` calibration.
    pub const CALIBRATED: HurwitzConvention =
        HurwitzConvention { labeled_tuples: true, transitive: true, divide_by_factorial: true };

    pub fn all() -> Vec<HurwitzConvention> {
        let mut out = Vec::new();
        for labeled_tuples in [true, false] {
            for transitive in [true, false] {
                for divide_by_factorial in [true, false] {
                    out.push(HurwitzConvention { labeled_tuples, transitive, divide_by_factorial });
                }
            }
        }
        out
    }
}

impl fmt::Display for HurwitzConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} tuples, {}, {}",
            if self.labeled_tuples { "labeled" } else { "fixed-representative" },
            if self.transitive { "transitive" } else { "any orbit" },
            if self.divide_by_factorial { "divided by d!" } else { "undivided" }
        )
    }
}

impl Default for HurwitzConvention {
    fn default() -> Self {
        Self::CALIBRATED
    }
}

/// How genus-expanded moments are paired with Hurwitz numbers of each genus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentPairing {
    /// `H_g` times `σ_g(x^α) σ_g(y^β)`, equal genus only.
    AsPrinted,
    /// `Σ_{g+e=G} H_g` times the `N^{-2e}` coefficient of the moment product.
    #[default]
    Convolved,
}

/// Riemann–Hurwitz length `r = 2g - 2 + ℓ(α) + ℓ(β)`, or `None` when negative.
pub fn factorization_length(genus: usize, alpha: &Partition, beta: &Partition) -> Option<usize> {
    let r = 2 * genus as i64 - 2 + alpha.length() as i64 + beta.length() as i64;
    (r >= 0).then_some(r as usize)
}

/// Counts monotone factorizations `σ ρ τ_1 ⋯ τ_r = e`, `σ ∈ C_α`, `ρ ∈ C_β`,
/// `τ_i = (a_i b_i)` with `a_i < b_i` and `b_1 ≤ ⋯ ≤ b_r`.
pub fn monotone_count(genus: usize, alpha: &Partition, beta: &Partition, convention: HurwitzConvention) -> Result<u64> {
    let d = alpha.size();
    if beta.size() != d {
        return Err(Error::Domain(format!("|α| = {d} but |β| = {}", beta.size())));
    }
    if d > MAX_HURWITZ_DEGREE {
        return Err(Error::Domain(format!("Hurwitz enumeration needs d <= {MAX_HURWITZ_DEGREE}, got {d}")));
    }
    let Some(r) = factorization_length(genus, alpha, beta) else {
        return Ok(0);
    };
    let mut rhos: Vec<Permutation> = Permutation::all(d).into_iter().filter(|p| p.cycle_type() == *beta).collect();
    if !convention.labeled_tuples {
        rhos.truncate(1);
    }
    let mut total = 0;
    for rho in rhos {
        let mut parent: Vec<usize> = (0..d).collect();
        for (i, &j) in rho.images().iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j as usize));
            parent[a] = b;
        }
        let mut current = rho.clone();
        total += count_sequences(&mut current, &parent, r, 1, alpha, convention.transitive);
    }
    Ok(total)
}

/// Number of monotone continuations of length `remaining` with every `b ≥ min_b`
/// that end at cycle type `alpha` (the inverse has the same type).
fn count_sequences(
    current: &mut Permutation,
    parent: &[usize],
    remaining: usize,
    min_b: usize,
    alpha: &Partition,
    transitive: bool,
) -> u64 {
    let d = current.degree();
    if remaining == 0 {
        if current.cycle_type() != *alpha {
            return 0;
        }
        if transitive {
            let mut p = parent.to_vec();
            let root = find(&mut p, 0);
            if (1..d).any(|i| find(&mut p, i) != root) {
                return 0;
            }
        }
        return 1;
    }
    let mut total = 0;
    for b in min_b..d {
        for a in 0..b {
            current.times_transposition(a, b);
            let mut p = parent.to_vec();
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            p[ra] = rb;
            total += count_sequences(current, &p, remaining - 1, b, alpha, transitive);
            current.times_transposition(a, b);
        }
    }
    total
}

fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| acc.scale_int(k))
}

/// `N^{-2e}` coefficients, `e = 0..=depth`, of `Π_i N^{-1}Tr ρ_N(b)^{parts_i}` for generator `gen`.
fn moment_product(data: &dyn TraceData, gen: u16, parts: &[usize], depth: usize) -> Result<Vec<Scalar>> {
    let letter = GenLetter::new(gen, false, true);
    let mut series = vec![Scalar::zero(); depth + 1];
    series[0] = Scalar::one();
    for &k in parts {
        let word = vec![letter; k];
        let factor = (0..=depth).map(|g| data.sigma(g, &word)).collect::<std::result::Result<Vec<_>, _>>()?;
        let mut next = vec![Scalar::zero(); depth + 1];
        for (a, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for b in 0..=depth - a {
                if !factor[b].is_zero() {
                    next[a + b] += &(s * &factor[b]);
                }
            }
        }
        series = next;
    }
    Ok(series)
}

/// Raw counts `H_g(α, β)` for every pair of partitions of `d`.
pub fn hurwitz_table(
    genus: usize,
    d: usize,
    convention: HurwitzConvention,
) -> Result<BTreeMap<(Partition, Partition), u64>> {
    let parts = partitions(d)?;
    let mut out = BTreeMap::new();
    for a in &parts {
        for b in &parts {
            out.insert((a.clone(), b.clone()), monotone_count(genus, a, b, convention)?);
        }
    }
    Ok(out)
}

/// `F_G^{(d)}(0)/d!` for `d = 1..=d_max`, index 0 holding the zero constant term.
/// `x` and `y` are constant generators 0 and 1.
pub fn hciz_series_hurwitz(
    data: &dyn TraceData,
    genus: usize,
    d_max: usize,
    convention: HurwitzConvention,
    pairing: MomentPairing,
) -> Result<Vec<Scalar>> {
    if d_max > MAX_HURWITZ_DEGREE {
        return Err(Error::Domain(format!("HCIZ Hurwitz series needs d_max <= {MAX_HURWITZ_DEGREE}")));
    }
    let mut coeffs = vec![Scalar::zero()];
    for d in 1..=d_max {
        let parts = partitions(d)?;
        let mut total = Scalar::zero();
        for alpha in &parts {
            let mx = moment_product(data, 0, alpha.parts(), genus)?;
            for beta in &parts {
                let my = moment_product(data, 1, beta.parts(), genus)?;
                let sign = if (alpha.length() + beta.length()) % 2 == 0 { 1 } else { -1 };
                let weight = match pairing {
                    MomentPairing::AsPrinted => {
                        let h = monotone_count(genus, alpha, beta, convention)?;
                        let px = equal_genus_product(data, 0, alpha.parts(), genus)?;
                        let py = equal_genus_product(data, 1, beta.parts(), genus)?;
                        &(&px * &py) * &Scalar::int(h as i64)
                    }
                    MomentPairing::Convolved => {
                        let mut w = Scalar::zero();
                        for g in 0..=genus {
                            let h = monotone_count(g, alpha, beta, convention)?;
                            if h == 0 {
                                continue;
                            }
                            let e = genus - g;
                            let mut coeff = Scalar::zero();
                            for ex in 0..=e {
                                coeff += &(&mx[ex] * &my[e - ex]);
                            }
                            w += &coeff.scale_int(h as i64);
                        }
                        w
                    }
                };
                total += &weight.scale_int(sign);
            }
        }
        if convention.divide_by_factorial {
            total = &total * &factorial(d).recip().expect("nonzero factorial");
        }
        coeffs.push(total);
    }
    Ok(coeffs)
}

/// `Π_i σ_g(x^{α_i})` at a single genus.
fn equal_genus_product(data: &dyn TraceData, gen: u16, parts: &[usize], genus: usize) -> Result<Scalar> {
    let letter = GenLetter::new(gen, false, true);
    let mut prod = Scalar::one();
    for &k in parts {
        prod = &prod * &data.sigma(genus, &vec![letter; k])?;
    }
    Ok(prod)
}

/// Picks the first convention whose genus-0 series reproduces `reference`
/// (coefficients of `t^1, t^2, ...`) exactly.
pub fn calibrate(data: &dyn TraceData, reference: &[Scalar]) -> Result<Option<HurwitzConvention>> {
    for convention in HurwitzConvention::all() {
        let series = hciz_series_hurwitz(data, 0, reference.len(), convention, MomentPairing::Convolved)?;
        if series[1..] == *reference {
            return Ok(Some(convention));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::DiagonalSpectra;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partitions_are_complete() {
        assert_eq!(partitions(3).unwrap(), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        assert_eq!(partitions(1).unwrap(), vec![p(&[1])]);
        assert_eq!(partitions(6).unwrap().len(), 11);
        assert_eq!(p(&[1, 2]).length(), 2);
        assert!(partitions(9).is_err());
        assert_eq!("(2,1)".parse::<Partition>().unwrap(), p(&[2, 1]));
    }

    #[test]
    fn permutations_enumerate_group() {
        assert_eq!(Permutation::all(4).len(), 24);
        let types: Vec<Partition> = Permutation::all(3).iter().map(Permutation::cycle_type).collect();
        assert_eq!(types.iter().filter(|t| **t == p(&[2, 1])).count(), 3);
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn calibration_cases() {
        let c = HurwitzConvention::CALIBRATED;
        assert_eq!(monotone_count(0, &p(&[1]), &p(&[1]), c).unwrap(), 1);
        assert_eq!(monotone_count(0, &p(&[2]), &p(&[2]), c).unwrap(), 1);
        assert_eq!(monotone_count(0, &p(&[2]), &p(&[1, 1]), c).unwrap(), 1);
        assert_eq!(monotone_count(0, &p(&[1, 1]), &p(&[1, 1]), c).unwrap(), 1);
        assert_eq!(
            monotone_count(0, &p(&[1, 1]), &p(&[1]), c).unwrap_err(),
            Error::Domain("|α| = 2 but |β| = 1".into())
        );
        assert_eq!(
            monotone_count(
                0,
                &p(&[1]),
                &p(&[1]),
                HurwitzConvention { transitive: true, labeled_tuples: false, divide_by_factorial: false }
            )
            .unwrap(),
            1
        );
    }

    #[test]
    fn second_order_matches_closed_form() {
        let data = DiagonalSpectra::from_ratios(&[&[(1, 1), (3, 1)], &[(-1, 1), (2, 1)]]).unwrap();
        let s = hciz_series_hurwitz(&data, 0, 2, HurwitzConvention::CALIBRATED, MomentPairing::Convolved).unwrap();
        // a1 = 2, a2 = 5, b1 = 1/2, b2 = 5/2
        assert_eq!(s[1], Scalar::int(1));
        assert_eq!(s[2], &(&Scalar::int(1) * &Scalar::ratio(9, 4)) * &Scalar::ratio(1, 2));
    }
}
