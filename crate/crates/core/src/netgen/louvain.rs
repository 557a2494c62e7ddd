//! Louvain modularity maximization.
//!
//! Phase one moves single nodes to the neighbouring community with the
//! largest modularity gain until no move improves modularity. Phase two
//! collapses each community into one weighted node (internal edges become a
//! self-loop) and the process repeats on the smaller graph until a level
//! makes no move.
//!
//! Runs are reproducible: the node visit order is a seeded shuffle per pass,
//! ties between equally good target communities go to the lowest community
//! id, and all accumulations use index-ordered vectors.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::Network;
use super::partition::{modularity, Partition};

/// Minimum gain (in edge-weight units) for a node move to count.
const MIN_GAIN: f64 = 1e-10;
const MAX_PASSES: usize = 10_000;

#[derive(Debug, Clone)]
pub struct LouvainRun {
    pub partition: Partition,
    /// Modularity at the chosen resolution: first for singletons, then after each level.
    pub level_modularity: Vec<f64>,
}

pub fn louvain(network: &Network, seed: u64, resolution: f64) -> Partition {
    louvain_run(network, seed, resolution).partition
}

pub fn louvain_run(network: &Network, seed: u64, resolution: f64) -> LouvainRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = WeightedGraph::from_network(network);
    let mut membership: Vec<usize> = (0..network.node_count()).collect();
    let mut level_modularity = vec![modularity(network, &membership, resolution)];

    loop {
        let (communities, moved) = level.local_moves(resolution, &mut rng);
        if !moved {
            break;
        }
        let (communities, count) = renumber(&communities);
        for m in membership.iter_mut() {
            *m = communities[*m];
        }
        level_modularity.push(modularity(network, &membership, resolution));
        level = level.aggregate(&communities, count);
    }

    LouvainRun {
        partition: Partition::scored(network, &membership).expect("membership covers every node"),
        level_modularity,
    }
}

/// Dense ids in order of first appearance.
fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let out = labels
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (out, next)
}

struct WeightedGraph {
    /// Neighbour lists without self-loops, sorted by neighbour.
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Total weight of edges internal to each node.
    self_weight: Vec<f64>,
}

impl WeightedGraph {
    fn from_network(network: &Network) -> Self {
        Self {
            adjacency: (0..network.node_count())
                .map(|i| network.neighbors(i).iter().map(|&j| (j, 1.0)).collect())
                .collect(),
            self_weight: vec![0.0; network.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    fn strength(&self, node: usize) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_weight[node]
    }

    fn local_moves(&self, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|i| self.strength(i)).collect();
        let two_m: f64 = strength.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        if two_m == 0.0 {
            return (community, false);
        }
        let mut total = strength.clone();
        let mut weight_to = vec![0.0; n];
        let mut touched = vec![false; n];
        let mut candidates: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any_moved = false;

        for _ in 0..MAX_PASSES {
            order.shuffle(rng);
            let mut moved = false;
            for &node in &order {
                let current = community[node];
                let k = strength[node];
                total[current] -= k;

                candidates.clear();
                touched[current] = true;
                candidates.push(current);
                for &(neighbor, w) in &self.adjacency[node] {
                    let c = community[neighbor];
                    if !touched[c] {
                        touched[c] = true;
                        candidates.push(c);
                    }
                    weight_to[c] += w;
                }
                candidates.sort_unstable();

                let gain = |c: usize| weight_to[c] - resolution * total[c] * k / two_m;
                let stay = gain(current);
                let mut best = current;
                let mut best_gain = f64::NEG_INFINITY;
                for &c in &candidates {
                    let g = gain(c);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                if best != current && best_gain > stay + MIN_GAIN {
                    community[node] = best;
                    moved = true;
                } else {
                    best = current;
                }
                total[best] += k;

                for &c in &candidates {
                    weight_to[c] = 0.0;
                    touched[c] = false;
                }
            }
            if !moved {
                break;
            }
            any_moved = true;
        }
        (community, any_moved)
    }

    fn aggregate(&self, communities: &[usize], count: usize) -> Self {
        let mut self_weight = vec![0.0; count];
        let mut links: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        for (node, neighbors) in self.adjacency.iter().enumerate() {
            let c = communities[node];
            self_weight[c] += self.self_weight[node];
            for &(other, w) in neighbors {
                if other <= node {
                    continue;
                }
                let d = communities[other];
                if c == d {
                    self_weight[c] += w;
                } else {
                    links[c].push((d, w));
                    links[d].push((c, w));
                }
            }
        }
        let adjacency = links
            .into_iter()
            .map(|mut list| {
                list.sort_by_key(|&(d, _)| d);
                let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
                for (d, w) in list {
                    match merged.last_mut() {
                        Some((last, acc)) if *last == d => *acc += w,
                        _ => merged.push((d, w)),
                    }
                }
                merged
            })
            .collect();
        Self {
            adjacency,
            self_weight,
        }
    }
}
