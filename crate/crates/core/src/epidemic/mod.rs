//! Seeded single-generation outbreaks, pooling strategies and the
//! replicate-parallel Monte Carlo driver.

mod grouping;
mod infection;
mod monte_carlo;

pub use grouping::{
    group_by_community, group_perfect, group_random, run_two_stage, GroupAssignment, TwoStageOutcome,
};
pub use infection::{seed_epidemic, ContactModel, InfectionState, SbmEnsemble};
pub use monte_carlo::{
    mean_and_std_error, monte_carlo, replicate_rng, ReplicateRecord, SimStats, SimStrategy,
};
