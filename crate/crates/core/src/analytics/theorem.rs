//! Numerical check of the network-grouping sandwich
//! `T_LB <= E[T_NG] <= E[T_D]` and of monotonicity of `E[T_NG]` in `q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::ModelParams;

use super::closed_form::{expected_tests_dorfman, expected_tests_network, lower_bound};

/// Absolute slack on `T_LB <= E[T_NG] <= E[T_D]`.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;
/// Slack on consecutive `E[T_NG]` values along a q-sweep, relative to `max(1, |E[T_NG]|)`.
pub const MONOTONE_TOLERANCE: f64 = 1e-12;
/// Absolute tolerance for the `q = p` and `q = 0, n >= m` equalities.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Fixed `(N, n, m, p, v)` with `q` swept over `q_values` (ascending, within `[0, p]`).
#[derive(Debug, Clone, PartialEq)]
pub struct QSweep {
    pub population: usize,
    pub group_size: usize,
    pub community_size: usize,
    pub p_within: f64,
    pub prevalence: f64,
    pub q_values: Vec<f64>,
}

impl QSweep {
    /// `points` evenly spaced values from 0 to `p` inclusive.
    pub fn even(
        population: usize,
        group_size: usize,
        community_size: usize,
        p_within: f64,
        prevalence: f64,
        points: usize,
    ) -> Self {
        let q_values = match points {
            0 => Vec::new(),
            1 => vec![0.0],
            _ => (0..points)
                .map(|i| {
                    if i + 1 == points {
                        p_within
                    } else {
                        p_within * i as f64 / (points - 1) as f64
                    }
                })
                .collect(),
        };
        Self {
            population,
            group_size,
            community_size,
            p_within,
            prevalence,
            q_values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    /// `q = p` and `E[T_NG] = E[T_D]`.
    EqualsDorfman,
    /// `q = 0`, `n >= m` and `E[T_NG] = T_LB`.
    EqualsLowerBound,
    Violation,
}

impl PointStatus {
    pub fn name(self) -> &'static str {
        match self {
            PointStatus::Ok => "ok",
            PointStatus::EqualsDorfman => "eq-dorfman",
            PointStatus::EqualsLowerBound => "eq-lower-bound",
            PointStatus::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Row {
    pub sweep: usize,
    pub index: usize,
    pub params: ModelParams,
    pub lower_bound: f64,
    pub network: f64,
    pub dorfman: f64,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Theorem1Violation {
    InvalidPoint {
        sweep: usize,
        index: usize,
        reason: String,
    },
    BelowLowerBound {
        sweep: usize,
        index: usize,
        gap: f64,
    },
    AboveDorfman {
        sweep: usize,
        index: usize,
        gap: f64,
    },
    NotMonotone {
        sweep: usize,
        index: usize,
        drop: f64,
    },
    BoundaryMismatch {
        sweep: usize,
        index: usize,
        expected: f64,
        actual: f64,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Theorem1Report {
    pub rows: Vec<Theorem1Row>,
    pub violations: Vec<Theorem1Violation>,
}

impl Theorem1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, status: PointStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

/// Evaluates the three closed forms at every sweep point, recalibrating
/// `alpha` for each `q`, and lists every broken inequality or identity.
pub fn verify_theorem1(sweeps: &[QSweep]) -> Theorem1Report {
    let mut report = Theorem1Report::default();
    for (sweep_index, sweep) in sweeps.iter().enumerate() {
        let mut previous: Option<f64> = None;
        for (index, &q) in sweep.q_values.iter().enumerate() {
            let point = ModelParams::calibrated(
                sweep.population,
                sweep.group_size,
                sweep.community_size,
                sweep.p_within,
                q,
                sweep.prevalence,
            )
            .and_then(|params| {
                Ok((
                    params,
                    lower_bound(&params.pooling())?.value,
                    expected_tests_network(&params)?.value,
                    expected_tests_dorfman(&params.pooling())?.value,
                ))
            });
            let (params, lb, ng, d) = match point {
                Ok(values) => values,
                Err(e) => {
                    report.violations.push(Theorem1Violation::InvalidPoint {
                        sweep: sweep_index,
                        index,
                        reason: e.to_string(),
                    });
                    previous = None;
                    continue;
                }
            };

            let mut status = PointStatus::Ok;
            let mut flag = |v: Theorem1Violation, status: &mut PointStatus| {
                *status = PointStatus::Violation;
                report.violations.push(v);
            };
            if ng < lb - SANDWICH_TOLERANCE {
                flag(
                    Theorem1Violation::BelowLowerBound {
                        sweep: sweep_index,
                        index,
                        gap: lb - ng,
                    },
                    &mut status,
                );
            }
            if ng > d + SANDWICH_TOLERANCE {
                flag(
                    Theorem1Violation::AboveDorfman {
                        sweep: sweep_index,
                        index,
                        gap: ng - d,
                    },
                    &mut status,
                );
            }
            if let Some(prev) = previous {
                if ng < prev - MONOTONE_TOLERANCE * prev.abs().max(1.0) {
                    flag(
                        Theorem1Violation::NotMonotone {
                            sweep: sweep_index,
                            index,
                            drop: prev - ng,
                        },
                        &mut status,
                    );
                }
            }
            previous = Some(ng);

            let boundary = if q == params.p_within {
                Some((d, PointStatus::EqualsDorfman))
            } else if q == 0.0 && params.group_size >= params.community_size {
                Some((lb, PointStatus::EqualsLowerBound))
            } else {
                None
            };
            if let Some((expected, equal_status)) = boundary {
                if (ng - expected).abs() <= BOUNDARY_TOLERANCE {
                    if status == PointStatus::Ok {
                        status = equal_status;
                    }
                } else {
                    flag(
                        Theorem1Violation::BoundaryMismatch {
                            sweep: sweep_index,
                            index,
                            expected,
                            actual: ng,
                        },
                        &mut status,
                    );
                }
            }

            report.rows.push(Theorem1Row {
                sweep: sweep_index,
                index,
                params,
                lower_bound: lb,
                network: ng,
                dorfman: d,
                status,
            });
        }
    }
    report
}

/// Draws `count` sweeps whose every point satisfies the model assumptions.
///
/// `v` is kept at or below `(m-1)p/(N-1)` so that `alpha <= 1` even at `q = 0`.
pub fn random_sweeps(count: usize, points: usize, seed: u64) -> Vec<QSweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let population = rng.gen_range(3..=2000usize);
            let community_size = rng.gen_range(2..population);
            let group_size = if rng.gen_bool(0.5) {
                rng.gen_range(1..=population.min(100))
            } else {
                rng.gen_range(1..=population)
            };
            let p_within = rng.gen_range(0.01..=1.0);
            let v_max = (community_size as f64 - 1.0) * p_within / (population as f64 - 1.0);
            let prevalence = v_max.min(1.0) * rng.gen::<f64>();
            QSweep::even(population, group_size, community_size, p_within, prevalence, points)
        })
        .collect()
}

/// Two-point sweeps `q in {0, p}` with `n >= m`, exercising both equality cases.
pub fn boundary_sweeps(count: usize, seed: u64) -> Vec<QSweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let population = rng.gen_range(3..=2000usize);
            let community_size = rng.gen_range(2..population);
            let group_size = rng.gen_range(community_size..=population);
            let p_within = rng.gen_range(0.01..=1.0);
            let v_max = (community_size as f64 - 1.0) * p_within / (population as f64 - 1.0);
            let prevalence = v_max.min(1.0) * rng.gen::<f64>();
            QSweep {
                population,
                group_size,
                community_size,
                p_within,
                prevalence,
                q_values: vec![0.0, p_within],
            }
        })
        .collect()
}
