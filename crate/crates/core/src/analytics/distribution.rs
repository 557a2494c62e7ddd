use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{Divisibility, ModelParams, PoolingParams};

use super::closed_form::positive_probability;

/// Exact distribution of the total number of tests.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCountDistribution {
    /// Achievable totals in ascending order.
    pub support: Vec<usize>,
    pub probabilities: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

impl TestCountDistribution {
    /// Totals `N/n + n g` where `positive_groups[g]` is `P(G = g)`.
    fn from_positive_groups(population: usize, group_size: usize, positive_groups: &[f64]) -> Self {
        let base = population / group_size;
        let (support, probabilities): (Vec<_>, Vec<_>) = positive_groups
            .iter()
            .enumerate()
            .map(|(g, &prob)| (base + group_size * g, prob))
            .unzip();
        Self::from_parts(support, probabilities)
    }

    /// Builds from a support and matching masses; the support must be ascending.
    pub fn from_parts(support: Vec<usize>, probabilities: Vec<f64>) -> Self {
        debug_assert_eq!(support.len(), probabilities.len());
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        let mean: f64 = support
            .iter()
            .zip(&probabilities)
            .map(|(&t, &prob)| t as f64 * prob)
            .sum();
        let variance = support
            .iter()
            .zip(&probabilities)
            .map(|(&t, &prob)| prob * (t as f64 - mean).powi(2))
            .sum();
        Self {
            support,
            probabilities,
            mean,
            variance,
        }
    }

    /// Collects a distribution from `(total, mass)` pairs, merging repeats.
    pub fn from_masses(masses: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut merged = BTreeMap::new();
        for (tests, prob) in masses {
            *merged.entry(tests).or_insert(0.0) += prob;
        }
        let (support, probabilities) = merged.into_iter().unzip();
        Self::from_parts(support, probabilities)
    }

    pub fn probability_of(&self, tests: usize) -> f64 {
        self.support
            .binary_search(&tests)
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `1/2 sum |P(t) - Q(t)|` over the union of supports.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut diff: BTreeMap<usize, f64> = BTreeMap::new();
        for (&t, &prob) in self.support.iter().zip(&self.probabilities) {
            *diff.entry(t).or_insert(0.0) += prob;
        }
        for (&t, &prob) in other.support.iter().zip(&other.probabilities) {
            *diff.entry(t).or_insert(0.0) -= prob;
        }
        0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
    }
}

/// Binomial(`trials`, `prob`) masses for `k = 0..=trials`.
///
/// Masses are built in log space with `ln C(trials, k)` accumulated in
/// ascending `k`, so the output is identical on every platform.
pub fn binomial_pmf(trials: usize, prob: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; trials + 1];
    if prob <= 0.0 {
        pmf[0] = 1.0;
        return pmf;
    }
    if prob >= 1.0 {
        pmf[trials] = 1.0;
        return pmf;
    }
    let ln_p = prob.ln();
    let ln_q = (-prob).ln_1p();
    let mut ln_choose = 0.0;
    for (k, mass) in pmf.iter_mut().enumerate() {
        if k > 0 {
            ln_choose += ((trials - k + 1) as f64).ln() - (k as f64).ln();
        }
        *mass = (ln_choose + k as f64 * ln_p + (trials - k) as f64 * ln_q).exp();
    }
    pmf
}

/// Distribution of the sum of two independent count variables.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `T_D ~ N/n + n[1 + Bin(N/n - 1, v')]`.
pub fn dorfman_distribution(pool: &PoolingParams) -> Result<TestCountDistribution> {
    pool.check()?;
    if !pool.is_divisible() {
        return Err(Error::Divisibility(format!(
            "n = {} does not divide N = {}",
            pool.group_size, pool.population
        )));
    }
    let groups = pool.population / pool.group_size;
    let v_prime = positive_probability(pool.prevalence, pool.group_size);
    let extra = binomial_pmf(groups - 1, v_prime);
    Ok(TestCountDistribution::from_positive_groups(
        pool.population,
        pool.group_size,
        &shift_one(&extra),
    ))
}

/// `T_NG ~ N/n + n[1 + Bin((m/n - 1)+, p') + Bin(N/n - 1 - (m/n - 1)+, q')]`.
pub fn network_distribution(params: &ModelParams) -> Result<TestCountDistribution> {
    params.check()?;
    let divisibility = Divisibility::of(params);
    if !divisibility.network_exact() {
        return Err(Error::Divisibility(format!(
            "need n | N, m | N and (n | m or m | n); got N = {}, n = {}, m = {}",
            params.population, params.group_size, params.community_size
        )));
    }
    let n = params.group_size;
    let groups = params.population / n;
    let mate_groups = (params.community_size / n).saturating_sub(1);
    let p_prime = positive_probability(params.within_infection(), n);
    let q_prime = positive_probability(params.between_infection(), n);
    let extra = convolve(
        &binomial_pmf(mate_groups, p_prime),
        &binomial_pmf(groups - 1 - mate_groups, q_prime),
    );
    Ok(TestCountDistribution::from_positive_groups(
        params.population,
        n,
        &shift_one(&extra),
    ))
}

/// Distribution of tests under perfect grouping, `N/n + n max(1, ceil(I/n))`,
/// with `I = 1 + Bin(m - 1, p alpha) + Bin(N - m, q alpha)` drawn from the SBM ensemble.
///
/// This is the quantity a perfect-grouping simulation converges to; the
/// closed-form lower bound instead plugs in `E[I]`.
pub fn perfect_grouping_distribution(params: &ModelParams) -> Result<TestCountDistribution> {
    params.check()?;
    let divisibility = Divisibility::of(params);
    if !(divisibility.group_divides_population && divisibility.community_divides_population) {
        return Err(Error::Divisibility(format!(
            "need n | N and m | N; got N = {}, n = {}, m = {}",
            params.population, params.group_size, params.community_size
        )));
    }
    let n = params.group_size;
    let others = convolve(
        &binomial_pmf(params.community_size - 1, params.within_infection()),
        &binomial_pmf(params.population - params.community_size, params.between_infection()),
    );
    let mut positive_groups = vec![0.0; params.population / n + 1];
    for (extra, &prob) in others.iter().enumerate() {
        let infected = extra + 1;
        positive_groups[infected.div_ceil(n)] += prob;
    }
    Ok(TestCountDistribution::from_positive_groups(
        params.population,
        n,
        &positive_groups,
    ))
}

/// Masses of `1 + X` given masses of `X`.
fn shift_one(pmf: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(pmf.len() + 1);
    out.push(0.0);
    out.extend_from_slice(pmf);
    out
}
