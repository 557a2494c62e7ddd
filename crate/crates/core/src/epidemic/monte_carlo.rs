use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Violation;
use crate::netgen::Partition;

use super::grouping::{group_by_community, group_perfect, group_random, run_two_stage};
use super::infection::ContactModel;

/// Independent stream for replicate `replicate` under `master_seed`.
///
/// ChaCha is a counter-based generator: the key comes from the master seed and
/// the replicate index selects the stream, so a replicate's draws do not depend
/// on which thread runs it or in what order.
pub fn replicate_rng(master_seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimStrategy {
    Dorfman,
    Network,
    Perfect,
}

impl SimStrategy {
    pub const ALL: [SimStrategy; 3] = [SimStrategy::Dorfman, SimStrategy::Network, SimStrategy::Perfect];

    pub fn name(self) -> &'static str {
        match self {
            SimStrategy::Dorfman => "dorfman",
            SimStrategy::Network => "network",
            SimStrategy::Perfect => "perfect",
        }
    }
}

impl fmt::Display for SimStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dorfman" => Ok(SimStrategy::Dorfman),
            "network" => Ok(SimStrategy::Network),
            "perfect" => Ok(SimStrategy::Perfect),
            other => Err(format!(
                "unknown strategy '{other}' (expected dorfman, network or perfect)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed_node: usize,
    pub infected: usize,
    pub positive_groups: usize,
    pub tests: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub strategy: SimStrategy,
    pub group_size: usize,
    pub master_seed: u64,
    /// One record per replicate, in replicate order.
    pub records: Vec<ReplicateRecord>,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replicates)`; zero for one replicate.
    pub std_error: f64,
}

impl SimStats {
    fn from_records(strategy: SimStrategy, group_size: usize, master_seed: u64, records: Vec<ReplicateRecord>) -> Self {
        let (mean, std_error) = mean_and_std_error(records.iter().map(|r| r.tests as f64));
        Self {
            strategy,
            group_size,
            master_seed,
            records,
            mean,
            std_error,
        }
    }

    pub fn replicates(&self) -> usize {
        self.records.len()
    }

    pub fn replicate_tests(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.tests).collect()
    }
}

/// Mean and standard error of the mean, summed in iteration order.
pub fn mean_and_std_error(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count();
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / count as f64;
    if count < 2 {
        return (mean, 0.0);
    }
    let variance = values.map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
    (mean, (variance / count as f64).sqrt())
}

/// Runs `replicates` outbreaks and two-stage screens.
///
/// Replicate `r` draws everything (seed, transmissions, random pools) from
/// [`replicate_rng`]`(master_seed, r)`. Community pools are a fixed function of
/// the partition and are built once. Replicates run on the current rayon pool;
/// results are identical for any thread count.
pub fn monte_carlo<C: ContactModel + ?Sized>(
    contacts: &C,
    partition: &Partition,
    alpha: f64,
    group_size: usize,
    strategy: SimStrategy,
    replicates: usize,
    master_seed: u64,
) -> Result<SimStats> {
    let population = contacts.node_count();
    let mut violations = Vec::new();
    if group_size < 1 || group_size > population {
        violations.push(Violation::GroupSize {
            group_size,
            population,
        });
    }
    if !(0.0..=1.0).contains(&alpha) {
        violations.push(Violation::Transmission(alpha));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidParameters(violations));
    }
    if replicates == 0 {
        return Err(Error::NoReplicates);
    }
    if partition.node_count() != population {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, network has {population}",
            partition.node_count()
        )));
    }

    let community_pools = (strategy == SimStrategy::Network).then(|| group_by_community(partition, group_size));

    let records = (0..replicates)
        .into_par_iter()
        .map(|replicate| {
            let mut rng = replicate_rng(master_seed, replicate as u64);
            let state = contacts.draw_epidemic(alpha, &mut rng);
            let outcome = match strategy {
                SimStrategy::Dorfman => run_two_stage(&state, &group_random(population, group_size, &mut rng)),
                SimStrategy::Network => run_two_stage(&state, community_pools.as_ref().expect("built above")),
                SimStrategy::Perfect => run_two_stage(&state, &group_perfect(&state, group_size)),
            };
            ReplicateRecord {
                replicate,
                seed_node: state.seed,
                infected: state.infected_count(),
                positive_groups: outcome.positive_groups,
                tests: outcome.total_tests,
            }
        })
        .collect();

    Ok(SimStats::from_records(strategy, group_size, master_seed, records))
}
