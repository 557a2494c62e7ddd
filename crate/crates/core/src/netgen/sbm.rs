use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Violation;

use super::network::Network;
use super::partition::Partition;

/// Planted-partition SBM: consecutive blocks of `community_size` nodes, the
/// last block holding the remainder when `community_size` does not divide
/// `population`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmSpec {
    pub population: usize,
    pub community_size: usize,
    pub p_within: f64,
    pub q_between: f64,
}

impl SbmSpec {
    pub fn new(population: usize, community_size: usize, p_within: f64, q_between: f64) -> Result<Self> {
        let mut violations = Vec::new();
        if community_size < 1 || community_size > population {
            violations.push(Violation::CommunitySize {
                community_size,
                population,
            });
        }
        let mut probabilities_ok = true;
        for (name, value) in [("p", p_within), ("q", q_between)] {
            if !(0.0..=1.0).contains(&value) {
                probabilities_ok = false;
                violations.push(Violation::Probability { name, value });
            }
        }
        if probabilities_ok && q_between > p_within {
            violations.push(Violation::QExceedsP {
                p: p_within,
                q: q_between,
            });
        }
        if !violations.is_empty() {
            return Err(Error::InvalidParameters(violations));
        }
        Ok(Self {
            population,
            community_size,
            p_within,
            q_between,
        })
    }

    pub fn community_of(&self, node: usize) -> usize {
        node / self.community_size
    }

    /// Every community has exactly `community_size` members.
    pub fn is_uniform(&self) -> bool {
        self.population.is_multiple_of(self.community_size)
    }

    pub fn planted_labels(&self) -> Vec<usize> {
        (0..self.population).map(|i| self.community_of(i)).collect()
    }

    pub fn planted_partition(&self) -> Partition {
        Partition::from_labels(&self.planted_labels())
    }

    pub fn edge_probability(&self, u: usize, v: usize) -> f64 {
        if self.community_of(u) == self.community_of(v) {
            self.p_within
        } else {
            self.q_between
        }
    }

    /// Draws one realization. Pairs are visited in lexicographic order with one
    /// Bernoulli draw each, so the edge set is a function of `seed` alone.
    pub fn generate(&self, seed: u64) -> SbmSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..self.population {
            for v in u + 1..self.population {
                if rng.gen_bool(self.edge_probability(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        let network = Network::from_canonical(self.population, edges);
        let partition = Partition::scored(&network, &self.planted_labels())
            .expect("planted labels cover every node");
        SbmSample {
            network,
            partition,
            uniform: self.is_uniform(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SbmSample {
    pub network: Network,
    /// Ground-truth blocks, scored against `network`.
    pub partition: Partition,
    /// False when the last community is a smaller remainder block.
    pub uniform: bool,
}

pub fn generate_sbm(
    population: usize,
    community_size: usize,
    p_within: f64,
    q_between: f64,
    seed: u64,
) -> Result<SbmSample> {
    Ok(SbmSpec::new(population, community_size, p_within, q_between)?.generate(seed))
}
