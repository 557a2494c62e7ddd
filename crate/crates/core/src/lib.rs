//! Group testing on social networks.
//!
//! - [`model`]: parameters, validity checks and transmission-rate calibration.
//! - [`analytics`]: closed-form expected test counts, exact distributions,
//!   the dominance check and group-size optimization.
//! - [`netgen`]: SBM generation, edge-list ingestion, Louvain and density estimates.
//! - [`epidemic`]: outbreak simulation, pooling strategies and Monte Carlo.

pub mod analytics;
pub mod epidemic;
mod error;
pub mod model;
pub mod netgen;

pub use error::{Error, Result};
