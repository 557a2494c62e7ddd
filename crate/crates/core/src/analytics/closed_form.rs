use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::model::{Divisibility, ModelParams, PoolingParams};

/// A closed-form value and whether the divisibility conditions make it exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub exact: bool,
}

/// Probability that a pool of `group_size` independent members, each positive
/// with probability `x`, is positive: `1 - (1 - x)^n`.
pub fn positive_probability(x: f64, group_size: usize) -> f64 {
    -(group_size as f64 * (-x).ln_1p()).exp_m1()
}

/// `E[T_D] = N/n + n[1 + (N/n - 1) v']` with `v' = 1 - (1 - v)^n`.
pub fn expected_tests_dorfman(pool: &PoolingParams) -> Result<Estimate> {
    pool.check()?;
    let n = pool.group_size as f64;
    let groups = pool.population as f64 / n;
    let v_prime = positive_probability(pool.prevalence, pool.group_size);
    Ok(Estimate {
        value: groups + n * (1.0 + (groups - 1.0) * v_prime),
        exact: pool.is_divisible(),
    })
}

/// Two-stage lower bound `T_LB = N/n + max(n, 1 + (N-1)v)`.
pub fn lower_bound(pool: &PoolingParams) -> Result<Estimate> {
    pool.check()?;
    let n = pool.group_size as f64;
    Ok(Estimate {
        value: pool.population as f64 / n + n.max(pool.expected_infected()),
        exact: pool.is_divisible(),
    })
}

/// Lower bound with the infected count rounded up to a whole individual:
/// `N/n + max(n, ceil(1 + (N-1)v))`, then rounded up to a whole test.
///
/// This is the integer reading of the bound; for `N = 1000, n = 10, v = 0.05`
/// it is 151 where [`lower_bound`] gives 150.95.
pub fn lower_bound_ceiling(pool: &PoolingParams) -> Result<u64> {
    pool.check()?;
    let n = pool.group_size as f64;
    let infected = pool.expected_infected().ceil();
    Ok((pool.population as f64 / n + n.max(infected)).ceil() as u64)
}

/// `E[T_NG] = N/n + n[1 + (m/n - 1)+ p' + (N/n - 1 - (m/n - 1)+) q']`.
pub fn expected_tests_network(params: &ModelParams) -> Result<Estimate> {
    params.check()?;
    let n = params.group_size as f64;
    let groups = params.population as f64 / n;
    let mate_groups = (params.community_size as f64 / n - 1.0).max(0.0);
    let p_prime = positive_probability(params.within_infection(), params.group_size);
    let q_prime = positive_probability(params.between_infection(), params.group_size);
    Ok(Estimate {
        value: groups + n * (1.0 + mate_groups * p_prime + (groups - 1.0 - mate_groups) * q_prime),
        exact: Divisibility::of(params).network_exact(),
    })
}

/// The three closed forms, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosedForm {
    Dorfman,
    Network,
    LowerBound,
}

impl ClosedForm {
    pub const ALL: [ClosedForm; 3] = [
        ClosedForm::Dorfman,
        ClosedForm::Network,
        ClosedForm::LowerBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosedForm::Dorfman => "dorfman",
            ClosedForm::Network => "network",
            ClosedForm::LowerBound => "lower-bound",
        }
    }

    pub fn evaluate(self, params: &ModelParams) -> Result<Estimate> {
        match self {
            ClosedForm::Dorfman => expected_tests_dorfman(&params.pooling()),
            ClosedForm::Network => expected_tests_network(params),
            ClosedForm::LowerBound => lower_bound(&params.pooling()),
        }
    }

    /// Whether the form can be evaluated from `(N, n, v)` alone.
    pub fn needs_network(self) -> bool {
        matches!(self, ClosedForm::Network)
    }

    pub fn evaluate_pooling(self, pool: &PoolingParams) -> Option<Result<Estimate>> {
        match self {
            ClosedForm::Dorfman => Some(expected_tests_dorfman(pool)),
            ClosedForm::LowerBound => Some(lower_bound(pool)),
            ClosedForm::Network => None,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClosedForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dorfman" => Ok(ClosedForm::Dorfman),
            "network" => Ok(ClosedForm::Network),
            "lower-bound" | "lower_bound" | "lb" => Ok(ClosedForm::LowerBound),
            other => Err(format!(
                "unknown strategy '{other}' (expected dorfman, network or lower-bound)"
            )),
        }
    }
}
