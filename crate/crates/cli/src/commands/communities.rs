use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::netgen::{estimate_pq, louvain, partition_stats};

use super::{load_network, load_partition};
use crate::output::{self, num};
use crate::{resolve_seed, CliResult, Command, OutputArgs, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CommunitiesArgs {
    /// Edge list: two node ids per line
    #[arg(long, value_name = "PATH")]
    pub edge_list: PathBuf,
    /// Use this node,community CSV instead of running Louvain
    #[arg(long, value_name = "PATH")]
    pub partition: Option<PathBuf>,
    /// Louvain resolution
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    /// Seed for Louvain's visit order
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 2] = ["node", "community"];

pub fn run(mut args: CommunitiesArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    output::no_plot(&args.output)?;
    let network = load_network(&args.edge_list, stderr)?;
    let partition = match &args.partition {
        Some(path) => load_partition(&network, path)?,
        None => {
            let seed = resolve_seed(&mut args.seed, stderr);
            louvain(&network, seed, args.resolution)
        }
    };

    let stats = partition_stats(&partition);
    let _ = writeln!(stderr, "nodes: {}, edges: {}", network.node_count(), network.edge_count());
    let _ = writeln!(
        stderr,
        "communities: {}, mean size: {}, min: {}, max: {}, modularity: {}",
        stats.communities,
        num(stats.mean_size),
        stats.min_size,
        stats.max_size,
        partition.modularity().map_or_else(|| "-".into(), num),
    );
    match estimate_pq(&network, &partition) {
        Ok(d) => {
            let q_hat = d.q_hat.map_or_else(|| "-".into(), num);
            let _ = writeln!(stderr, "p_hat: {}, q_hat: {q_hat}", num(d.p_hat));
        }
        Err(e) => {
            let _ = writeln!(stderr, "p_hat/q_hat unavailable: {e}");
        }
    }

    let rows: Vec<Vec<String>> = (0..network.node_count())
        .map(|node| vec![network.label(node), partition.community_of(node).to_string()])
        .collect();
    let out = args.output.out.clone();
    let document = output::csv_document(&Command::Communities(args), &HEADER, &rows)?;
    output::emit(out.as_deref(), &document, stdout)?;
    Ok(EXIT_OK)
}
