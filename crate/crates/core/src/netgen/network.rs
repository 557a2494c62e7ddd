use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// Undirected simple graph on dense node indices `0..node_count`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted, and neighbour lists
/// are sorted ascending, so iteration order depends only on the edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl Network {
    pub fn empty(node_count: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); node_count],
            edges: Vec::new(),
            labels: None,
        }
    }

    /// Builds a network from index pairs. Orientation and repeats are ignored;
    /// self-loops and out-of-range endpoints are errors.
    pub fn from_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidNetwork(format!("self-loop on node {u}")));
            }
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({u}, {v}) outside 0..{node_count}"
                )));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        Ok(Self::from_canonical(node_count, canonical))
    }

    /// `edges` must already satisfy `u < v < node_count`.
    pub(crate) fn from_canonical(node_count: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            adjacency,
            edges,
            labels: None,
        }
    }

    /// Attaches original identifiers, one per node.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count() {
            return Err(Error::InvalidNetwork(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.node_count()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Original identifier of `node`, or its index when the network is unlabelled.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    /// Map from identifier (as written by [`Network::label`]) to node index.
    pub fn label_index(&self) -> HashMap<String, usize> {
        (0..self.node_count()).map(|i| (self.label(i), i)).collect()
    }

    /// Writes one `u v` line per edge in ascending index-pair order, using
    /// node labels when present.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for &(u, v) in &self.edges {
            writeln!(out, "{} {}", self.label(u), self.label(v))?;
        }
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedupes_and_orients() {
        let g = Network::from_edges(4, [(1, 0), (0, 1), (2, 3), (3, 2), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(0, 3));
        assert_eq!(g.degree(3), 1);
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(Network::from_edges(3, [(1, 1)]).is_err());
        assert!(Network::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn edge_list_export_is_canonical() {
        let a = Network::from_edges(3, [(2, 1), (1, 0)]).unwrap();
        let b = Network::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut out_a = Vec::new();
        let mut out_b = Vec::new();
        a.write_edge_list(&mut out_a).unwrap();
        b.write_edge_list(&mut out_b).unwrap();
        assert_eq!(out_a, out_b);
        assert_eq!(String::from_utf8(out_a).unwrap(), "0 1\n1 2\n");
    }

    #[test]
    fn labels() {
        let g = Network::from_edges(2, [(0, 1)])
            .unwrap()
            .with_labels(vec!["a".into(), "b".into()])
            .unwrap();
        assert_eq!(g.label(1), "b");
        assert_eq!(g.label_index()["a"], 0);
        assert!(Network::empty(2).with_labels(vec!["x".into()]).is_err());
    }
}
