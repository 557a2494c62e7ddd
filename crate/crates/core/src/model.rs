//! Model parameters shared by the closed forms and the simulator.
//!
//! A population of `N` individuals is tested in pools of `n`. In the random
//! (Dorfman) model one seed is infected and each other individual is infected
//! independently with probability `v`. In the network model the population is
//! an SBM with communities of size `m`, within-community edge probability `p`
//! and between-community edge probability `q`; the seed infects each neighbour
//! with probability `alpha`. The two models are tied together by choosing
//! `alpha` so that both have the same expected number of infections.

use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance used by [`validate`] when checking that a user-supplied
/// `(v, alpha)` pair is calibrated.
pub const CALIBRATION_TOLERANCE: f64 = 1e-9;

/// The part of the model that random pooling needs: `N`, `n` and `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoolingParams {
    pub population: usize,
    pub group_size: usize,
    pub prevalence: f64,
}

impl PoolingParams {
    pub fn new(population: usize, group_size: usize, prevalence: f64) -> Result<Self> {
        let params = Self {
            population,
            group_size,
            prevalence,
        };
        params.check()?;
        Ok(params)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.group_size < 1 || self.group_size > self.population {
            out.push(Violation::GroupSize {
                group_size: self.group_size,
                population: self.population,
            });
        }
        if !unit_interval(self.prevalence) {
            out.push(Violation::Prevalence(self.prevalence));
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(violations))
        }
    }

    /// `n` divides `N`.
    pub fn is_divisible(&self) -> bool {
        self.group_size > 0 && self.population.is_multiple_of(self.group_size)
    }

    /// `E[I_D] = 1 + (N-1)v`.
    pub fn expected_infected(&self) -> f64 {
        1.0 + (self.population as f64 - 1.0) * self.prevalence
    }
}

/// Full parameter tuple `(N, n, m, p, q, v, alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub population: usize,
    pub group_size: usize,
    pub community_size: usize,
    pub p_within: f64,
    pub q_between: f64,
    pub prevalence: f64,
    pub transmission: f64,
}

impl ModelParams {
    /// Builds the tuple from `v`, solving for `alpha`.
    pub fn calibrated(
        population: usize,
        group_size: usize,
        community_size: usize,
        p_within: f64,
        q_between: f64,
        prevalence: f64,
    ) -> Result<Self> {
        let transmission =
            calibrate_alpha(population, community_size, p_within, q_between, prevalence)?;
        let params = Self {
            population,
            group_size,
            community_size,
            p_within,
            q_between,
            prevalence,
            transmission,
        };
        params.check()?;
        Ok(params)
    }

    /// Builds the tuple from `alpha`, deriving the implied `v`.
    pub fn from_transmission(
        population: usize,
        group_size: usize,
        community_size: usize,
        p_within: f64,
        q_between: f64,
        transmission: f64,
    ) -> Result<Self> {
        let params = Self {
            population,
            group_size,
            community_size,
            p_within,
            q_between,
            prevalence: implied_prevalence(
                population,
                community_size,
                p_within,
                q_between,
                transmission,
            ),
            transmission,
        };
        params.check()?;
        Ok(params)
    }

    pub fn with_group_size(self, group_size: usize) -> Self {
        Self { group_size, ..self }
    }

    /// Same population and prevalence with a new `q`; `alpha` is recalibrated.
    pub fn recalibrated_with_q(self, q_between: f64) -> Result<Self> {
        Self::calibrated(
            self.population,
            self.group_size,
            self.community_size,
            self.p_within,
            q_between,
            self.prevalence,
        )
    }

    pub fn pooling(&self) -> PoolingParams {
        PoolingParams {
            population: self.population,
            group_size: self.group_size,
            prevalence: self.prevalence,
        }
    }

    pub fn check(&self) -> Result<()> {
        let report = validate(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidParameters(report.violations))
        }
    }

    /// `p * alpha`: probability a given community-mate of the seed is infected.
    pub fn within_infection(&self) -> f64 {
        self.p_within * self.transmission
    }

    /// `q * alpha`: probability a given non-community-mate of the seed is infected.
    pub fn between_infection(&self) -> f64 {
        self.q_between * self.transmission
    }
}

/// A single broken constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    GroupSize { group_size: usize, population: usize },
    CommunitySize { community_size: usize, population: usize },
    Probability { name: &'static str, value: f64 },
    QExceedsP { p: f64, q: f64 },
    Prevalence(f64),
    Transmission(f64),
    CalibrationMismatch { network: f64, dorfman: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GroupSize {
                group_size,
                population,
            } => write!(f, "1 ≤ n ≤ N violated (n = {group_size}, N = {population})"),
            Violation::CommunitySize {
                community_size,
                population,
            } => write!(
                f,
                "1 < m < N violated (m = {community_size}, N = {population})"
            ),
            Violation::Probability { name, value } => {
                write!(f, "{name} = {value} is not in [0, 1]")
            }
            Violation::QExceedsP { p, q } => write!(f, "q ≤ p violated (q = {q}, p = {p})"),
            Violation::Prevalence(v) => write!(f, "v = {v} is not in [0, 1]"),
            Violation::Transmission(a) => write!(f, "alpha = {a} is not in [0, 1]"),
            Violation::CalibrationMismatch { network, dorfman } => write!(
                f,
                "E[I_NG] = {network} does not match E[I_D] = {dorfman}; alpha is not calibrated"
            ),
        }
    }
}

/// Which of the divisibility conditions behind the exact formulas hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divisibility {
    /// `n | N`
    pub group_divides_population: bool,
    /// `m | N`
    pub community_divides_population: bool,
    /// `n | m`
    pub group_divides_community: bool,
    /// `m | n`
    pub community_divides_group: bool,
}

impl Divisibility {
    pub fn of(params: &ModelParams) -> Self {
        let divides = |d: usize, x: usize| d > 0 && x.is_multiple_of(d);
        Self {
            group_divides_population: divides(params.group_size, params.population),
            community_divides_population: divides(params.community_size, params.population),
            group_divides_community: divides(params.group_size, params.community_size),
            community_divides_group: divides(params.community_size, params.group_size),
        }
    }

    pub fn dorfman_exact(&self) -> bool {
        self.group_divides_population
    }

    /// Uniform communities tile the population and tile (or are tiled by) groups.
    pub fn network_exact(&self) -> bool {
        self.group_divides_population
            && self.community_divides_population
            && (self.group_divides_community || self.community_divides_group)
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub divisibility: Divisibility,
    /// `v` implied by the supplied `alpha`.
    pub implied_prevalence: f64,
    /// `alpha` implied by the supplied `v`, when it is defined and within `[0, 1]`.
    pub calibrated_transmission: Option<f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// The closed forms are exact, not approximations.
    pub fn exact(&self) -> bool {
        self.divisibility.network_exact()
    }
}

fn unit_interval(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

/// Checks every structural constraint and reports all of the broken ones.
pub fn validate(params: &ModelParams) -> ValidationReport {
    let mut violations = params.pooling().violations();
    let population = params.population;
    let community_size = params.community_size;
    if community_size <= 1 || community_size >= population {
        violations.push(Violation::CommunitySize {
            community_size,
            population,
        });
    }
    let mut probabilities_ok = true;
    for (name, value) in [("p", params.p_within), ("q", params.q_between)] {
        if !unit_interval(value) {
            probabilities_ok = false;
            violations.push(Violation::Probability { name, value });
        }
    }
    if probabilities_ok && params.q_between > params.p_within {
        violations.push(Violation::QExceedsP {
            p: params.p_within,
            q: params.q_between,
        });
    }
    if !unit_interval(params.transmission) {
        violations.push(Violation::Transmission(params.transmission));
    }

    if violations.is_empty() {
        let network = expected_infected_network(params);
        let dorfman = expected_infected_dorfman(params);
        if (network - dorfman).abs() > CALIBRATION_TOLERANCE * dorfman {
            violations.push(Violation::CalibrationMismatch { network, dorfman });
        }
    }

    ValidationReport {
        violations,
        divisibility: Divisibility::of(params),
        implied_prevalence: implied_prevalence(
            population,
            community_size,
            params.p_within,
            params.q_between,
            params.transmission,
        ),
        calibrated_transmission: calibrate_alpha(
            population,
            community_size,
            params.p_within,
            params.q_between,
            params.prevalence,
        )
        .ok(),
    }
}

/// Expected number of seed contacts: `(m-1)p + (N-m)q`.
fn contact_mass(population: usize, community_size: usize, p: f64, q: f64) -> f64 {
    (community_size as f64 - 1.0) * p + (population as f64 - community_size as f64) * q
}

/// Solves `E[I_NG] = E[I_D]` for `alpha`: `alpha = (N-1)v / [(m-1)p + (N-m)q]`.
///
/// Values of `alpha` above one are rejected rather than clamped. When both the
/// denominator and `v` are zero every `alpha` is calibrated and zero is returned.
pub fn calibrate_alpha(
    population: usize,
    community_size: usize,
    p_within: f64,
    q_between: f64,
    prevalence: f64,
) -> Result<f64> {
    let mut violations = Vec::new();
    if community_size <= 1 || community_size >= population {
        violations.push(Violation::CommunitySize {
            community_size,
            population,
        });
    }
    for (name, value) in [("p", p_within), ("q", q_between)] {
        if !unit_interval(value) {
            violations.push(Violation::Probability { name, value });
        }
    }
    if violations.is_empty() && q_between > p_within {
        violations.push(Violation::QExceedsP {
            p: p_within,
            q: q_between,
        });
    }
    if !unit_interval(prevalence) {
        violations.push(Violation::Prevalence(prevalence));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidParameters(violations));
    }

    let denominator = contact_mass(population, community_size, p_within, q_between);
    if denominator == 0.0 {
        return if prevalence == 0.0 {
            Ok(0.0)
        } else {
            Err(Error::DegenerateModel)
        };
    }
    let alpha = (population as f64 - 1.0) * prevalence / denominator;
    if alpha > 1.0 {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(alpha)
}

/// Inverse of [`calibrate_alpha`]: `v = alpha [(m-1)p + (N-m)q] / (N-1)`.
pub fn implied_prevalence(
    population: usize,
    community_size: usize,
    p_within: f64,
    q_between: f64,
    transmission: f64,
) -> f64 {
    if population <= 1 {
        return 0.0;
    }
    transmission * contact_mass(population, community_size, p_within, q_between)
        / (population as f64 - 1.0)
}

/// `E[I_D] = 1 + (N-1)v`.
pub fn expected_infected_dorfman(params: &ModelParams) -> f64 {
    params.pooling().expected_infected()
}

/// `E[I_NG] = 1 + (m-1)p alpha + (N-m)q alpha`.
pub fn expected_infected_network(params: &ModelParams) -> f64 {
    1.0 + params.transmission
        * contact_mass(
            params.population,
            params.community_size,
            params.p_within,
            params.q_between,
        )
}
