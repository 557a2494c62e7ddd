pub mod analytic;
pub mod communities;
pub mod generate;
pub mod optimize;
pub mod simulate;
pub mod verify;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use netpool::netgen::{read_edge_list_file, read_partition, Network, Partition};

use crate::{CliResult, Failure};

/// Loads an edge list, reporting dropped self-loops and duplicates on stderr.
pub(crate) fn load_network(path: &Path, stderr: &mut dyn Write) -> CliResult<Network> {
    let loaded = read_edge_list_file(path).map_err(|e| with_path(path, e))?;
    if loaded.self_loops > 0 {
        let _ = writeln!(stderr, "warning: dropped {} self-loops", loaded.self_loops);
    }
    if loaded.duplicates > 0 {
        let _ = writeln!(stderr, "notice: collapsed {} repeated edges", loaded.duplicates);
    }
    Ok(loaded.network)
}

pub(crate) fn load_partition(network: &Network, path: &Path) -> CliResult<Partition> {
    let file = File::open(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    read_partition(network, BufReader::new(file)).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: netpool::Error) -> Failure {
    let mut failure = Failure::from(e);
    failure.message = format!("{}: {}", path.display(), failure.message);
    failure
}
