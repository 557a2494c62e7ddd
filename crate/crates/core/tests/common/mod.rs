//! Brute-force oracles shared by integration tests.
//!
//! Nodes are laid out so that community `c` is `c*m .. (c+1)*m` and pool `g` is
//! `g*n .. (g+1)*n`. When `n | m` or `m | n` these consecutive pools are exactly
//! the community-aligned pools, so the oracle never touches the library's
//! grouping code.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// `P(T = t)` keyed by total tests.
pub type Pmf = BTreeMap<usize, f64>;

/// Enumerates every infection set containing the seed, averaged over the seed.
///
/// `infect(seed, other)` is the probability that `other` ends up infected.
/// `tests(infected_mask)` maps an outcome to a test count.
pub fn enumerate(
    population: usize,
    infect: impl Fn(usize, usize) -> f64,
    tests: impl Fn(u32) -> usize,
) -> Pmf {
    assert!(population <= 16, "enumeration is exponential in N");
    let mut pmf = Pmf::new();
    let seed_weight = 1.0 / population as f64;
    for seed in 0..population {
        for mask in 0u32..(1 << population) {
            if mask & (1 << seed) == 0 {
                continue;
            }
            let mut prob = seed_weight;
            for other in (0..population).filter(|&o| o != seed) {
                let pi = infect(seed, other);
                prob *= if mask & (1 << other) != 0 { pi } else { 1.0 - pi };
            }
            if prob > 0.0 {
                *pmf.entry(tests(mask)).or_insert(0.0) += prob;
            }
        }
    }
    pmf
}

/// Two-stage count for consecutive pools of size `n`.
pub fn consecutive_pool_tests(population: usize, n: usize, mask: u32) -> usize {
    let pools = population / n;
    let positive = (0..pools)
        .filter(|g| (g * n..(g + 1) * n).any(|i| mask & (1 << i) != 0))
        .count();
    pools + n * positive
}

/// Dorfman model: every non-seed node infected independently with probability `v`.
pub fn dorfman_pmf(population: usize, n: usize, v: f64) -> Pmf {
    enumerate(population, |_, _| v, |mask| consecutive_pool_tests(population, n, mask))
}

/// Seed contacts: same-community nodes with probability `p`, others `q`;
/// each contact infected with probability `alpha`.
fn network_infect(m: usize, p: f64, q: f64, alpha: f64) -> impl Fn(usize, usize) -> f64 {
    move |seed, other| {
        let edge = if seed / m == other / m { p } else { q };
        edge * alpha
    }
}

pub fn network_pmf(population: usize, n: usize, m: usize, p: f64, q: f64, alpha: f64) -> Pmf {
    enumerate(population, network_infect(m, p, q, alpha), |mask| {
        consecutive_pool_tests(population, n, mask)
    })
}

/// Infected nodes packed into `ceil(I/n)` pools.
pub fn perfect_pmf(population: usize, n: usize, m: usize, p: f64, q: f64, alpha: f64) -> Pmf {
    enumerate(population, network_infect(m, p, q, alpha), |mask| {
        population / n + n * (mask.count_ones() as usize).div_ceil(n)
    })
}

pub fn total_variation(oracle: &Pmf, support: &[usize], probabilities: &[f64]) -> f64 {
    let mut diff: BTreeMap<usize, f64> = oracle.clone();
    for (&t, &prob) in support.iter().zip(probabilities) {
        *diff.entry(t).or_insert(0.0) -= prob;
    }
    0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
}

/// Divisible instances with `N <= max_population`: every `n` in {1,2,3,4,6}
/// dividing `N`, every proper divisor `m > 1` aligned with `n`.
pub fn divisible_instances(max_population: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for population in 2..=max_population {
        for n in [1, 2, 3, 4, 6] {
            if n > population || population % n != 0 {
                continue;
            }
            for m in 2..population {
                if population % m == 0 && (m % n == 0 || n % m == 0) {
                    out.push((population, n, m));
                }
            }
        }
    }
    out
}
