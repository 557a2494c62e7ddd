use rand::Rng;

use crate::netgen::{Network, SbmSpec};

/// One realized single-generation outbreak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfectionState {
    pub seed: usize,
    pub infected: Vec<bool>,
}

impl InfectionState {
    pub fn infected_count(&self) -> usize {
        self.infected.iter().filter(|&&i| i).count()
    }

    pub fn node_count(&self) -> usize {
        self.infected.len()
    }

    pub fn infected_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.infected
            .iter()
            .enumerate()
            .filter_map(|(i, &inf)| inf.then_some(i))
    }
}

/// Picks a uniform seed and lets it infect each neighbour independently with
/// probability `alpha`. Neighbours are visited in ascending index order.
pub fn seed_epidemic<R: Rng + ?Sized>(network: &Network, alpha: f64, rng: &mut R) -> InfectionState {
    let seed = rng.gen_range(0..network.node_count());
    let mut infected = vec![false; network.node_count()];
    infected[seed] = true;
    for &neighbor in network.neighbors(seed) {
        if rng.gen_bool(alpha) {
            infected[neighbor] = true;
        }
    }
    InfectionState { seed, infected }
}

/// Source of contacts for the seed node.
pub trait ContactModel: Sync {
    fn node_count(&self) -> usize;

    fn draw_epidemic(&self, alpha: f64, rng: &mut dyn rand::RngCore) -> InfectionState;
}

impl ContactModel for Network {
    fn node_count(&self) -> usize {
        Network::node_count(self)
    }

    fn draw_epidemic(&self, alpha: f64, rng: &mut dyn rand::RngCore) -> InfectionState {
        seed_epidemic(self, alpha, rng)
    }
}

/// A fresh SBM realization per outbreak.
///
/// Only the seed's incident edges can affect the outbreak, so each draw
/// realizes the seed's row of the adjacency matrix (one Bernoulli per other
/// node) instead of the whole graph. The planted blocks stay fixed.
#[derive(Debug, Clone, Copy)]
pub struct SbmEnsemble {
    pub spec: SbmSpec,
}

impl ContactModel for SbmEnsemble {
    fn node_count(&self) -> usize {
        self.spec.population
    }

    fn draw_epidemic(&self, alpha: f64, rng: &mut dyn rand::RngCore) -> InfectionState {
        let population = self.spec.population;
        let seed = rng.gen_range(0..population);
        let mut infected = vec![false; population];
        infected[seed] = true;
        for (node, slot) in infected.iter_mut().enumerate() {
            if node == seed {
                continue;
            }
            if rng.gen_bool(self.spec.edge_probability(seed, node)) && rng.gen_bool(alpha) {
                *slot = true;
            }
        }
        InfectionState { seed, infected }
    }
}
