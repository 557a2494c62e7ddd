//! Plain-text edge lists.
//!
//! One edge per line: two node identifiers separated by a comma, a tab or a
//! run of spaces. Further columns are ignored. Blank lines and lines starting
//! with `#` or `%` are skipped. Identifiers are arbitrary strings and are
//! numbered in order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

use super::network::Network;

#[derive(Debug, Clone)]
pub struct LoadedEdgeList {
    pub network: Network,
    /// Lines whose two endpoints were the same node.
    pub self_loops: usize,
    /// Lines repeating an edge already seen, in either orientation.
    pub duplicates: usize,
}

pub fn load_edge_list<R: BufRead>(source: R) -> Result<LoadedEdgeList> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut self_loops = 0;

    let mut intern = |token: &str| -> usize {
        if let Some(&i) = ids.get(token) {
            return i;
        }
        labels.push(token.to_string());
        ids.insert(token.to_string(), labels.len() - 1);
        labels.len() - 1
    };

    for (number, line) in source.split(b'\n').enumerate() {
        let line_number = number + 1;
        let raw = line?;
        let text = std::str::from_utf8(&raw).map_err(|_| Error::Parse {
            line: line_number,
            message: "not valid UTF-8".into(),
        })?;
        let text = text.trim();
        if text.is_empty() || text.starts_with('#') || text.starts_with('%') {
            continue;
        }
        let mut tokens = text
            .split([',', '\t', ' '])
            .map(str::trim)
            .filter(|t| !t.is_empty());
        let (a, b) = match (tokens.next(), tokens.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: line_number,
                    message: format!("expected two node ids, found '{text}'"),
                })
            }
        };
        let (u, v) = (intern(a), intern(b));
        if u == v {
            self_loops += 1;
            continue;
        }
        edges.push((u.min(v), u.max(v)));
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let raw_edges = edges.len();
    let network = Network::from_canonical(labels.len(), edges).with_labels(labels)?;
    Ok(LoadedEdgeList {
        duplicates: raw_edges - network.edge_count(),
        network,
        self_loops,
    })
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<LoadedEdgeList> {
    load_edge_list(BufReader::new(File::open(path)?))
}
