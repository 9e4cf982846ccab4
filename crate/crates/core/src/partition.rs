//! Integer partitions and the merge graphs on them.
//!
//! Every graph here has partitions as nodes and joins a partition `p`
//! containing two parts `x, y` to the partition `p′` in which they are
//! replaced by `x + y`, subject to an admissibility rule that depends on the
//! graph. The rule is always evaluated on the longer partition `p`, and the
//! merged partition must itself be a node.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::choose2;
use crate::connectivity;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("connectivity of an empty graph is undefined")]
    Empty,
    #[error("breadth-first search says connected = {bfs} but union-find says {dsu}")]
    Inconsistent { bfs: bool, dsu: bool },
}

/// A partition of `n` into positive parts, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts `parts` into non-increasing order.
    ///
    /// # Panics
    ///
    /// If `parts` is empty or contains a zero.
    pub fn new(mut parts: Vec<u32>) -> Self {
        assert!(!parts.is_empty(), "a partition has at least one part");
        assert!(parts.iter().all(|&x| x > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every distinct partition obtained by merging two parts, together with
    /// the merged values `(x, y)` with `x ≥ y`.
    pub fn merges(&self) -> Vec<(Partition, u32, u32)> {
        let mut out: Vec<(Partition, u32, u32)> = Vec::new();
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                let (x, y) = (self.0[i], self.0[j]);
                if out.iter().any(|&(_, a, b)| (a, b) == (x, y)) {
                    continue;
                }
                let mut parts = self.0.clone();
                parts.remove(j);
                parts[i] = x + y;
                out.push((Partition::new(parts), x, y));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    /// `a+b+c`, as used for DOT labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// All partitions of `n` with `len_min ≤ length ≤ len_max`, in
/// lexicographic order of their (non-increasing) part lists.
pub fn enumerate_partitions(n: u32, len_min: i64, len_max: i64) -> Vec<Partition> {
    fn go(remaining: u32, cap: u32, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(parts.clone());
            return;
        }
        for x in (1..=remaining.min(cap)).rev() {
            parts.push(x);
            go(remaining - x, x, parts, out);
            parts.pop();
        }
    }
    assert!(n >= 1, "partitions of {n} are not defined here");
    let mut all = Vec::new();
    go(n, n, &mut Vec::new(), &mut all);
    let mut selected: Vec<Partition> = all
        .into_iter()
        .filter(|p| (len_min..=len_max).contains(&(p.len() as i64)))
        .map(Partition)
        .collect();
    selected.sort();
    selected
}

/// Compositions (ordered partitions) of `n`, in lexicographic order.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn go(remaining: u32, parts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(parts.clone());
            return;
        }
        for x in 1..=remaining {
            parts.push(x);
            go(remaining - x, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

/// Which merge graph a [`PartitionGraph`] is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum GraphMode {
    /// Partitions of `n` of length at least `k`; a merge of `x, y` in `p` is
    /// an edge when `min{x, y} + k ≤ length(p)`.
    AtLeast { n: u32, k: i64 },
    /// Partitions of `n` of length at most `k`; every merge is an edge.
    AtMost { n: u32, k: i64 },
    /// Partitions of `d − 1` whose length `r` keeps the vertex genus
    /// `g − r + 1` within `0..=C(d−2, 2)`; a merge is an edge when
    /// `min{x, y} ≤ C(d−2, 2) − g + length(p) − 1`.
    Single { d: u32, g: u32 },
}

impl GraphMode {
    /// Whether merging `x, y` inside `p` is allowed.
    pub fn admits(&self, p: &Partition, x: u32, y: u32) -> bool {
        let min = i64::from(x.min(y));
        let len = p.len() as i64;
        match *self {
            GraphMode::AtLeast { k, .. } => min + k <= len,
            GraphMode::AtMost { .. } => true,
            GraphMode::Single { d, g } => {
                min < choose2(i64::from(d) - 2) - i64::from(g) + len
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionEdge {
    /// Index of the longer partition, the one whose parts are merged.
    pub from: usize,
    /// Index of the merged partition.
    pub to: usize,
    pub x: u32,
    pub y: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionGraph {
    pub mode: GraphMode,
    pub nodes: Vec<Partition>,
    pub edges: Vec<PartitionEdge>,
    /// Merges between two nodes that the admissibility rule rejects.
    pub rejected: Vec<PartitionEdge>,
    /// Set when the inputs lie outside the range where connectivity is
    /// claimed.
    pub warnings: Vec<String>,
}

impl PartitionGraph {
    fn build(mode: GraphMode, nodes: Vec<Partition>) -> Self {
        let index: BTreeMap<&Partition, usize> =
            nodes.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut edges = Vec::new();
        let mut rejected = Vec::new();
        for (from, p) in nodes.iter().enumerate() {
            for (merged, x, y) in p.merges() {
                let Some(&to) = index.get(&merged) else {
                    continue;
                };
                let edge = PartitionEdge { from, to, x, y };
                if mode.admits(p, x, y) {
                    edges.push(edge);
                } else {
                    rejected.push(edge);
                }
            }
        }
        PartitionGraph {
            mode,
            nodes,
            edges,
            rejected,
            warnings: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.nodes.iter().position(|q| q == p)
    }

    /// Whether the graph has an edge between `a` and `b`, in either
    /// direction.
    pub fn has_edge(&self, a: &Partition, b: &Partition) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self
                .edges
                .iter()
                .any(|e| (e.from, e.to) == (i, j) || (e.from, e.to) == (j, i)),
            _ => false,
        }
    }

    /// Connectivity by breadth-first search, cross-checked with union–find.
    pub fn is_connected(&self) -> Result<bool, GraphError> {
        if self.nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        connectivity::cross_checked_connected(self.nodes.len(), &pairs)
            .map_err(|(bfs, dsu)| GraphError::Inconsistent { bfs, dsu })
    }

    /// Graphviz rendering. Rejected merges are drawn dashed when
    /// `show_rejected` is set.
    pub fn to_dot(&self, show_rejected: bool) -> String {
        let mut out = String::from("graph partitions {\n  node [shape=box];\n");
        for (i, p) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{p}\"];\n"));
        }
        for e in &self.edges {
            out.push_str(&format!("  n{} -- n{};\n", e.from, e.to));
        }
        if show_rejected {
            for e in &self.rejected {
                out.push_str(&format!(
                    "  n{} -- n{} [style=dashed, label=\"not an edge\"];\n",
                    e.from, e.to
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Partitions of `n` of length at least `k`.
pub fn graph_geq(n: u32, k: i64) -> PartitionGraph {
    let mut graph = PartitionGraph::build(
        GraphMode::AtLeast { n, k },
        enumerate_partitions(n, k, i64::from(n)),
    );
    if k > i64::from(n) {
        graph.warnings.push(format!("k = {k} exceeds n = {n}; the graph is empty"));
    }
    graph
}

/// Partitions of `n` of length at most `k`.
pub fn graph_leq(n: u32, k: i64) -> PartitionGraph {
    let mut graph = PartitionGraph::build(
        GraphMode::AtMost { n, k },
        enumerate_partitions(n, 1, k),
    );
    if n < 3 {
        graph.warnings.push(format!("n = {n} is below 3"));
    }
    if k >= i64::from(n) {
        graph.warnings.push(format!("k = {k} is not below n = {n}"));
    }
    graph
}

/// The graph on edge-weight partitions of single-vertex small profiles of
/// degree `d` and genus `g`.
///
/// # Panics
///
/// If `d < 2`.
pub fn graph_p(d: u32, g: u32) -> PartitionGraph {
    assert!(d >= 2, "degree {d} has no single-vertex profiles");
    let (g, c) = (i64::from(g), choose2(i64::from(d) - 2));
    let mut graph = PartitionGraph::build(
        GraphMode::Single { d, g: g as u32 },
        enumerate_partitions(d - 1, g + 1 - c, g + 1),
    );
    let max = choose2(i64::from(d) - 1);
    if g > max {
        graph.warnings.push(format!("g = {g} exceeds C(d-1, 2) = {max}"));
    }
    graph
}

/// Connectivity of a partition graph; see [`PartitionGraph::is_connected`].
pub fn is_connected(graph: &PartitionGraph) -> Result<bool, GraphError> {
    graph.is_connected()
}

/// Sweeps the two merge-graph connectivity lemmas: every `graph_geq(n, k)`
/// with `1 ≤ n ≤ n_max`, `−n ≤ k ≤ n`, and every `graph_leq(n, k)` with
/// `3 ≤ n ≤ n_max`, `1 ≤ k < n`, must be connected.
pub fn verify_partition_lemmas(n_max: u32) -> ValidationReport {
    let mut report = ValidationReport::new();
    for n in 1..=n_max {
        let n_signed = i64::from(n);
        for k in -n_signed..=n_signed {
            let graph = graph_geq(n, k);
            match graph.is_connected() {
                Ok(true) => {}
                Ok(false) => report.push("geq", format!("graph_geq({n}, {k}) is disconnected")),
                Err(e) => report.push("geq", format!("graph_geq({n}, {k}): {e}")),
            }
        }
    }
    for n in 3..=n_max {
        for k in 1..i64::from(n) {
            let graph = graph_leq(n, k);
            match graph.is_connected() {
                Ok(true) => {}
                Ok(false) => report.push("leq", format!("graph_leq({n}, {k}) is disconnected")),
                Err(e) => report.push("leq", format!("graph_leq({n}, {k}): {e}")),
            }
        }
    }
    report
}
