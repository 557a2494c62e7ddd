use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::netgen::{generate_sbm, write_partition};

use crate::output::{self, echo};
use crate::{resolve_seed, CliResult, Command, Failure, OutputArgs, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    /// Number of nodes
    #[arg(long = "N", value_name = "N")]
    pub population: usize,
    /// Community size; a smaller final block takes any remainder
    #[arg(long = "m", value_name = "M")]
    pub community_size: usize,
    /// Within-community edge probability
    #[arg(long = "p", value_name = "P")]
    pub p_within: f64,
    /// Between-community edge probability
    #[arg(long = "q", value_name = "Q")]
    pub q_between: f64,
    /// Seed for the graph draw
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the planted blocks as a node,community CSV
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub partition_out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub fn run(mut args: GenerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    output::no_plot(&args.output)?;
    let seed = resolve_seed(&mut args.seed, stderr);
    let sample = generate_sbm(
        args.population,
        args.community_size,
        args.p_within,
        args.q_between,
        seed,
    )?;
    let isolated = (0..sample.network.node_count())
        .filter(|&i| sample.network.degree(i) == 0)
        .count();
    if isolated > 0 {
        let _ = writeln!(
            stderr,
            "warning: {isolated} isolated nodes will not appear in the edge list"
        );
    }
    if !sample.uniform {
        let _ = writeln!(stderr, "notice: N is not a multiple of m; the last block is smaller");
    }

    let out = args.output.out.clone();
    let partition_out = args.partition_out.clone();
    let header = echo(&Command::Generate(args))?;

    let mut edges = header.clone().into_bytes();
    sample.network.write_edge_list(&mut edges).map_err(|e| Failure::input(e.to_string()))?;
    output::emit(out.as_deref(), &edges, stdout)?;

    if let Some(path) = partition_out {
        let mut partition = header.into_bytes();
        write_partition(&sample.network, &sample.partition, &mut partition)?;
        output::emit(Some(&path), &partition, stdout)?;
    }
    Ok(EXIT_OK)
}
