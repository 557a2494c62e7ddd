use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::network::Network;

/// Assignment of every node to exactly one community.
///
/// Community ids are dense, numbered in order of first appearance when nodes
/// are scanned by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    community_of: Vec<usize>,
    community_sizes: Vec<usize>,
    modularity: Option<f64>,
}

impl Partition {
    /// Partition from arbitrary per-node labels, without a modularity score.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = HashMap::new();
        let mut community_sizes = Vec::new();
        let community_of = labels
            .iter()
            .map(|label| {
                let id = *remap.entry(*label).or_insert_with(|| {
                    community_sizes.push(0);
                    community_sizes.len() - 1
                });
                community_sizes[id] += 1;
                id
            })
            .collect();
        Self {
            community_of,
            community_sizes,
            modularity: None,
        }
    }

    /// Partition of `network` from per-node labels, scored by modularity.
    pub fn scored(network: &Network, labels: &[usize]) -> Result<Self> {
        if labels.len() != network.node_count() {
            return Err(Error::InvalidPartition(format!(
                "{} labels for {} nodes",
                labels.len(),
                network.node_count()
            )));
        }
        let mut partition = Self::from_labels(labels);
        partition.modularity = Some(modularity(network, &partition.community_of, 1.0));
        Ok(partition)
    }

    pub fn singletons(network: &Network) -> Self {
        let labels: Vec<usize> = (0..network.node_count()).collect();
        Self::scored(network, &labels).expect("one label per node")
    }

    pub fn whole(network: &Network) -> Self {
        Self::scored(network, &vec![0; network.node_count()]).expect("one label per node")
    }

    pub fn node_count(&self) -> usize {
        self.community_of.len()
    }

    pub fn community_count(&self) -> usize {
        self.community_sizes.len()
    }

    pub fn community_of(&self, node: usize) -> usize {
        self.community_of[node]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.community_of
    }

    pub fn community_sizes(&self) -> &[usize] {
        &self.community_sizes
    }

    /// Modularity against the network the partition was scored on.
    pub fn modularity(&self) -> Option<f64> {
        self.modularity
    }

    /// Members of each community, ascending by node index.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members: Vec<Vec<usize>> = self
            .community_sizes
            .iter()
            .map(|&s| Vec::with_capacity(s))
            .collect();
        for (node, &c) in self.community_of.iter().enumerate() {
            members[c].push(node);
        }
        members
    }

    /// Same grouping up to a relabelling of community ids.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        // Dense first-appearance ids make equal groupings identical vectors.
        self.community_of == other.community_of
    }
}

/// Newman modularity with resolution `gamma`:
/// `sum_c [ L_c / M - gamma (d_c / 2M)^2 ]`, zero for an edgeless graph.
pub fn modularity(network: &Network, community_of: &[usize], resolution: f64) -> f64 {
    let total = network.edge_count() as f64;
    if total == 0.0 {
        return 0.0;
    }
    let communities = community_of.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0; communities];
    let mut degree = vec![0.0; communities];
    for &(u, v) in network.edges() {
        let (cu, cv) = (community_of[u], community_of[v]);
        if cu == cv {
            internal[cu] += 1.0;
        }
        degree[cu] += 1.0;
        degree[cv] += 1.0;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / total - resolution * (d / (2.0 * total)).powi(2))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionStats {
    pub communities: usize,
    pub mean_size: f64,
    pub min_size: usize,
    pub max_size: usize,
}

impl PartitionStats {
    /// Community size to plug into the equal-size closed forms.
    pub fn effective_community_size(&self) -> usize {
        self.mean_size.round() as usize
    }
}

pub fn partition_stats(partition: &Partition) -> PartitionStats {
    let sizes = partition.community_sizes();
    PartitionStats {
        communities: sizes.len(),
        mean_size: if sizes.is_empty() {
            0.0
        } else {
            partition.node_count() as f64 / sizes.len() as f64
        },
        min_size: sizes.iter().copied().min().unwrap_or(0),
        max_size: sizes.iter().copied().max().unwrap_or(0),
    }
}

/// Edge densities within and between communities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeDensities {
    pub p_hat: f64,
    /// Absent when there is only one community.
    pub q_hat: Option<f64>,
    pub within_edges: usize,
    pub within_pairs: usize,
    pub between_edges: usize,
    pub between_pairs: usize,
}

/// Maximum-likelihood block densities: edges over node pairs, within and between.
pub fn estimate_pq(network: &Network, partition: &Partition) -> Result<EdgeDensities> {
    if partition.node_count() != network.node_count() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} nodes, network has {}",
            partition.node_count(),
            network.node_count()
        )));
    }
    let pairs = |s: usize| s * s.saturating_sub(1) / 2;
    let within_pairs: usize = partition.community_sizes().iter().map(|&s| pairs(s)).sum();
    let between_pairs = pairs(network.node_count()) - within_pairs;
    let within_edges = network
        .edges()
        .iter()
        .filter(|&&(u, v)| partition.community_of(u) == partition.community_of(v))
        .count();
    let between_edges = network.edge_count() - within_edges;
    if within_pairs == 0 {
        return Err(Error::DegeneratePartition(
            "no community has two or more members",
        ));
    }
    Ok(EdgeDensities {
        p_hat: within_edges as f64 / within_pairs as f64,
        q_hat: (between_pairs > 0).then(|| between_edges as f64 / between_pairs as f64),
        within_edges,
        within_pairs,
        between_edges,
        between_pairs,
    })
}

/// Reads a `node,community` CSV. Node ids are matched against the network's
/// labels (or indices when unlabelled); every node must appear exactly once.
pub fn read_partition<R: Read>(network: &Network, source: R) -> Result<Partition> {
    let index = network.label_index();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "node" || &headers[1] != "community" {
        return Err(Error::Parse {
            line: 1,
            message: "expected header 'node,community'".into(),
        });
    }
    let mut community_ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<Option<usize>> = vec![None; network.node_count()];
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let (node, community) = match (record.get(0), record.get(1)) {
            (Some(n), Some(c)) => (n, c),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected two columns".into(),
                })
            }
        };
        let &node_index = index.get(node).ok_or_else(|| Error::Parse {
            line,
            message: format!("unknown node '{node}'"),
        })?;
        let next = community_ids.len();
        let id = *community_ids.entry(community.to_string()).or_insert(next);
        if labels[node_index].replace(id).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("node '{node}' assigned twice"),
            });
        }
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| {
                Error::InvalidPartition(format!("node '{}' has no community", network.label(i)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::scored(network, &labels)
}

/// Writes the `node,community` CSV in node-index order.
pub fn write_partition<W: Write>(network: &Network, partition: &Partition, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["node", "community"])?;
    for node in 0..partition.node_count() {
        writer.write_record([network.label(node), partition.community_of(node).to_string()])?;
    }
    writer.flush()?;
    Ok(())
}
