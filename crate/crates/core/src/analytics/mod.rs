//! Closed-form test counts and their exact distributions.
//!
//! Every formula here is an expectation over the SBM ensemble with a single
//! uniformly chosen seed. Formulas are evaluated with real-valued `N/n` and
//! `m/n` even when the sizes do not divide; such results carry `exact = false`.

mod closed_form;
mod distribution;
mod optimize;
mod theorem;

pub use closed_form::{
    expected_tests_dorfman, expected_tests_network, lower_bound, lower_bound_ceiling,
    positive_probability, ClosedForm, Estimate,
};
pub use distribution::{
    binomial_pmf, convolve, dorfman_distribution, network_distribution,
    perfect_grouping_distribution, TestCountDistribution,
};
pub use optimize::{optimal_group_size, Optimum};
pub use theorem::{
    boundary_sweeps, random_sweeps, verify_theorem1, PointStatus, QSweep, Theorem1Report,
    Theorem1Row, Theorem1Violation, BOUNDARY_TOLERANCE, MONOTONE_TOLERANCE, SANDWICH_TOLERANCE,
};
