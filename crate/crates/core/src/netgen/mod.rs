//! Networks: SBM generation, edge-list ingestion, community detection and
//! block-density estimation.

mod edge_list;
mod louvain;
mod network;
mod partition;
mod sbm;

pub use edge_list::{load_edge_list, read_edge_list_file, LoadedEdgeList};
pub use louvain::{louvain, louvain_run, LouvainRun};
pub use network::Network;
pub use partition::{
    estimate_pq, modularity, partition_stats, read_partition, write_partition, EdgeDensities,
    Partition, PartitionStats,
};
pub use sbm::{generate_sbm, SbmSample, SbmSpec};
