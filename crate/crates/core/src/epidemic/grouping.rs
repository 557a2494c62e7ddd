//! Pool assignments and two-stage test counting.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::netgen::Partition;

use super::infection::InfectionState;

/// Every node in exactly one pool. All pools have the nominal size except
/// possibly the last, which holds the remainder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAssignment {
    group_of: Vec<usize>,
    group_sizes: Vec<usize>,
    nominal: usize,
}

impl GroupAssignment {
    /// Chunks `order` into consecutive pools of `group_size`.
    pub fn from_order(order: &[usize], group_size: usize) -> Self {
        assert!(group_size >= 1, "group size must be positive");
        let mut group_of = vec![usize::MAX; order.len()];
        let mut group_sizes = Vec::with_capacity(order.len().div_ceil(group_size));
        for (g, chunk) in order.chunks(group_size).enumerate() {
            for &node in chunk {
                group_of[node] = g;
            }
            group_sizes.push(chunk.len());
        }
        debug_assert!(group_of.iter().all(|&g| g != usize::MAX));
        Self {
            group_of,
            group_sizes,
            nominal: group_size,
        }
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.group_of[node]
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    pub fn group_count(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn nominal_size(&self) -> usize {
        self.nominal
    }

    pub fn node_count(&self) -> usize {
        self.group_of.len()
    }

    /// Members of each pool, ascending by node index.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.group_count()];
        for (node, &g) in self.group_of.iter().enumerate() {
            members[g].push(node);
        }
        members
    }
}

/// Dorfman pooling: a uniform random permutation chunked into pools.
pub fn group_random<R: Rng + ?Sized>(population: usize, group_size: usize, rng: &mut R) -> GroupAssignment {
    let mut order: Vec<usize> = (0..population).collect();
    order.shuffle(rng);
    GroupAssignment::from_order(&order, group_size)
}

/// Network pooling.
///
/// Communities are taken largest first (ties by community id), members in
/// ascending node order. Each community fills as many whole pools as it can;
/// the leftover members of all communities are then concatenated in the same
/// community order and chunked into the remaining pools.
pub fn group_by_community(partition: &Partition, group_size: usize) -> GroupAssignment {
    let members = partition.members();
    let mut by_size: Vec<usize> = (0..members.len()).collect();
    by_size.sort_by(|&a, &b| members[b].len().cmp(&members[a].len()).then(a.cmp(&b)));

    let mut full = Vec::with_capacity(partition.node_count());
    let mut leftovers = Vec::new();
    for &c in &by_size {
        let whole = members[c].len() / group_size * group_size;
        full.extend_from_slice(&members[c][..whole]);
        leftovers.extend_from_slice(&members[c][whole..]);
    }
    full.extend(leftovers);
    GroupAssignment::from_order(&full, group_size)
}

/// Oracle pooling: infected nodes occupy exactly `max(1, ceil(I/n))` pools.
///
/// When `n` does not divide `N` the last pool is short. It is used as one of
/// the positive pools whenever the other `k - 1` can hold the rest, which makes
/// the retest count the minimum over all assignments.
pub fn group_perfect(state: &InfectionState, group_size: usize) -> GroupAssignment {
    let infected: Vec<usize> = state.infected_nodes().collect();
    let healthy = (0..state.node_count()).filter(|&i| !state.infected[i]);
    let remainder = state.node_count() % group_size;
    let positive = infected.len().div_ceil(group_size).max(1);
    let use_remainder =
        remainder > 0 && infected.len().saturating_sub(remainder) <= group_size * (positive - 1);

    let tail = if use_remainder { infected.len().min(remainder) } else { 0 };
    let mut order: Vec<usize> = infected[tail..].to_vec();
    order.extend(healthy);
    order.extend_from_slice(&infected[..tail]);
    GroupAssignment::from_order(&order, group_size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoStageOutcome {
    pub groups: usize,
    pub positive_groups: usize,
    pub total_tests: usize,
}

/// One test per pool, then one per member of every pool holding an infected node.
pub fn run_two_stage(state: &InfectionState, assignment: &GroupAssignment) -> TwoStageOutcome {
    assert_eq!(
        state.node_count(),
        assignment.node_count(),
        "assignment and outbreak cover different populations"
    );
    let mut positive = vec![false; assignment.group_count()];
    for node in state.infected_nodes() {
        positive[assignment.group_of(node)] = true;
    }
    let (positive_groups, retests) = positive
        .iter()
        .zip(assignment.group_sizes())
        .filter(|(&p, _)| p)
        .fold((0, 0), |(count, tests), (_, &size)| (count + 1, tests + size));
    TwoStageOutcome {
        groups: assignment.group_count(),
        positive_groups,
        total_tests: assignment.group_count() + retests,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn state(population: usize, infected: &[usize]) -> InfectionState {
        let mut flags = vec![false; population];
        for &i in infected {
            flags[i] = true;
        }
        InfectionState {
            seed: infected[0],
            infected: flags,
        }
    }

    #[test]
    fn random_groups_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = group_random(20, 10, &mut rng);
        assert_eq!(a.group_sizes(), &[10, 10]);
        let a = group_random(20, 20, &mut rng);
        assert_eq!(a.group_count(), 1);
        let a = group_random(25, 10, &mut rng);
        assert_eq!(a.group_sizes(), &[10, 10, 5]);
    }

    #[test]
    fn random_groups_pair_probability() {
        // Two fixed nodes share a pool with probability 9/19 for N = 20, n = 10.
        let trials = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let together = (0..trials)
            .filter(|_| {
                let a = group_random(20, 10, &mut rng);
                a.group_of(3) == a.group_of(17)
            })
            .count();
        let p = 9.0 / 19.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = together as f64 / trials as f64;
        assert!((observed - p).abs() < 4.0 * se, "{observed}");
    }

    #[test]
    fn community_pools_split_large_communities() {
        let labels: Vec<usize> = (0..100).map(|i| i / 20).collect();
        let partition = Partition::from_labels(&labels);
        let a = group_by_community(&partition, 10);
        assert_eq!(a.group_count(), 10);
        for members in a.members() {
            assert!(members.iter().all(|&m| labels[m] == labels[members[0]]));
        }
    }

    #[test]
    fn community_pools_merge_small_communities() {
        let labels: Vec<usize> = (0..100).map(|i| i / 5).collect();
        let partition = Partition::from_labels(&labels);
        let a = group_by_community(&partition, 10);
        for members in a.members() {
            let mut comms: Vec<usize> = members.iter().map(|&m| labels[m]).collect();
            comms.dedup();
            assert_eq!(comms.len(), 2);
        }
    }

    #[test]
    fn community_pools_uneven_sizes() {
        // A = 0..7, B = 7..14, C = 14..20; hand trace of the rule.
        let labels: Vec<usize> = (0..20).map(|i| if i < 7 { 0 } else if i < 14 { 1 } else { 2 }).collect();
        let a = group_by_community(&Partition::from_labels(&labels), 10);
        let members = a.members();
        assert_eq!(members.len(), 2);
        assert_eq!(members[0], (0..10).collect::<Vec<_>>());
        assert_eq!(members[1], (10..20).collect::<Vec<_>>());
    }

    #[test]
    fn community_pools_largest_first() {
        // Community 1 (size 12) before community 0 (size 8); n = 4.
        let labels: Vec<usize> = (0..20).map(|i| if i < 8 { 0 } else { 1 }).collect();
        let a = group_by_community(&Partition::from_labels(&labels), 4);
        assert_eq!(a.group_of(8), 0);
        assert_eq!(a.group_of(0), 3);
    }

    #[test]
    fn perfect_packing() {
        let s = state(100, &[5]);
        assert_eq!(run_two_stage(&s, &group_perfect(&s, 10)).positive_groups, 1);
        let many: Vec<usize> = (0..20).map(|i| i * 5).collect();
        let s = state(100, &many);
        assert_eq!(run_two_stage(&s, &group_perfect(&s, 10)).positive_groups, 2);
        let s = state(100, &many[..11]);
        assert_eq!(run_two_stage(&s, &group_perfect(&s, 10)).positive_groups, 2);
    }

    #[test]
    fn perfect_uses_short_pool() {
        // N = 25, n = 10: pools of 10, 10, 5.
        let s = state(25, &[0]);
        assert_eq!(run_two_stage(&s, &group_perfect(&s, 10)).total_tests, 3 + 5);
        let s = state(25, &(0..12).collect::<Vec<_>>());
        assert_eq!(run_two_stage(&s, &group_perfect(&s, 10)).total_tests, 3 + 15);
        // I = 10 fits one full pool; the short pool would need a second.
        let s = state(25, &(0..10).collect::<Vec<_>>());
        let outcome = run_two_stage(&s, &group_perfect(&s, 10));
        assert_eq!((outcome.positive_groups, outcome.total_tests), (1, 13));
        let s = state(25, &(0..16).collect::<Vec<_>>());
        let outcome = run_two_stage(&s, &group_perfect(&s, 10));
        assert_eq!((outcome.positive_groups, outcome.total_tests), (2, 23));
    }

    #[test]
    fn two_stage_counts() {
        let a = GroupAssignment::from_order(&(0..50).collect::<Vec<_>>(), 10);
        assert_eq!(run_two_stage(&state(50, &[17]), &a).total_tests, 15);
        let all: Vec<usize> = (0..50).collect();
        let outcome = run_two_stage(&state(50, &all), &a);
        assert_eq!(outcome.total_tests, 55);
        assert_eq!(outcome.positive_groups, 5);
        // Remainder pool retests only its actual members.
        let a = GroupAssignment::from_order(&(0..25).collect::<Vec<_>>(), 10);
        assert_eq!(run_two_stage(&state(25, &[22]), &a).total_tests, 3 + 5);
    }
}
