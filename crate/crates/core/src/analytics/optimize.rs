use std::ops::RangeInclusive;

use crate::error::{Error, Result};

use super::closed_form::Estimate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub group_size: usize,
    pub expected_tests: f64,
    pub exact: bool,
}

/// Exhaustive argmin of `evaluate(n)` over `range`; ties go to the smaller `n`.
///
/// `range` must lie within `1..=population`.
pub fn optimal_group_size(
    population: usize,
    range: RangeInclusive<usize>,
    mut evaluate: impl FnMut(usize) -> Result<Estimate>,
) -> Result<Optimum> {
    if range.is_empty() {
        return Err(Error::EmptyRange);
    }
    let (start, end) = (*range.start(), *range.end());
    if start < 1 || end > population {
        return Err(Error::RangeOutOfBounds {
            start,
            end,
            population,
        });
    }
    let mut best: Option<Optimum> = None;
    for n in range {
        let estimate = evaluate(n)?;
        if best.is_none_or(|b| estimate.value < b.expected_tests) {
            best = Some(Optimum {
                group_size: n,
                expected_tests: estimate.value,
                exact: estimate.exact,
            });
        }
    }
    Ok(best.expect("range is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{expected_tests_dorfman, expected_tests_network, ClosedForm};
    use crate::model::{ModelParams, PoolingParams};

    #[test]
    fn dorfman_thousand_optimum_is_five() {
        let eval = |n| expected_tests_dorfman(&PoolingParams::new(1000, n, 0.05).unwrap());
        let best = optimal_group_size(1000, 2..=50, eval).unwrap();
        assert_eq!(best.group_size, 5);
        let hand = 200.0 + 5.0 * (1.0 + 199.0 * (1.0 - 0.95f64.powi(5)));
        assert!((best.expected_tests - hand).abs() < 1e-9);
        // Brute-force oracle over the same range.
        let brute = (2..=50)
            .map(|n| (n, eval(n).unwrap().value))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(brute.0, best.group_size);
    }

    #[test]
    fn zero_prevalence_minimizes_n_plus_n_over_n() {
        let eval = |n| expected_tests_dorfman(&PoolingParams::new(1000, n, 0.0).unwrap());
        let best = optimal_group_size(1000, 1..=1000, eval).unwrap();
        assert_eq!(best.group_size, 32);
        assert!((best.expected_tests - (1000.0 / 32.0 + 32.0)).abs() < 1e-12);
    }

    #[test]
    fn network_isolated_communities() {
        let base = ModelParams::calibrated(1000, 10, 10, 0.5, 0.0, 0.004).unwrap();
        let best = optimal_group_size(1000, 2..=50, |n| {
            ClosedForm::Network.evaluate(&base.with_group_size(n))
        })
        .unwrap();
        assert!(best.group_size >= 10);
        let n = best.group_size as f64;
        assert!((best.expected_tests - (1000.0 / n + n)).abs() < 1e-10);
        let brute = (2..=50)
            .map(|n| expected_tests_network(&base.with_group_size(n)).unwrap().value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(brute, best.expected_tests);
    }

    #[test]
    fn ties_go_to_smaller_n() {
        let best = optimal_group_size(10, 1..=10, |_| {
            Ok(Estimate {
                value: 3.0,
                exact: true,
            })
        })
        .unwrap();
        assert_eq!(best.group_size, 1);
    }

    #[test]
    fn range_errors() {
        let eval = |_| unreachable!();
        #[allow(clippy::reversed_empty_ranges)]
        let empty = optimal_group_size(10, 5..=4, eval);
        assert!(matches!(empty, Err(Error::EmptyRange)));
        let eval = |_| unreachable!();
        assert!(matches!(
            optimal_group_size(10, 0..=4, eval),
            Err(Error::RangeOutOfBounds { .. })
        ));
    }
}
