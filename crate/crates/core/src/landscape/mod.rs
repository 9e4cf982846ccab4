//! The small landscape: small profiles of a context joined by the three
//! elementary rewrites.

mod enumerate;
mod ops;

pub use enumerate::enumerate_small_profiles;
pub use ops::{
    applications, lower_disconnected, upper_connected, upper_disconnected, OpError, OpKind,
    OpWitness,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::connectivity::{bfs_tree, DisjointSet};
use crate::partition::{graph_p, Partition};
use crate::profile::{
    canonicalize, is_small, CanonicalKey, EnumerationContext, ProfileDocument, TopologicalProfile,
};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LandscapeError {
    #[error("rewrite {op} of {source_key} produced {result_key}, which is not an enumerated small profile")]
    Closure {
        source_key: String,
        result_key: String,
        op: String,
    },
    #[error("the landscape of {0} is empty")]
    Empty(String),
    #[error("profile is not small for {0}")]
    NotSmall(String),
    #[error("breadth-first search says connected = {bfs} but union-find says {dsu}")]
    Inconsistent { bfs: bool, dsu: bool },
    #[error("no rewrite reduces {0}")]
    Stuck(String),
}

/// A rewrite result, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub key: CanonicalKey,
    pub profile: TopologicalProfile,
    pub witness: OpWitness,
}

impl Neighbor {
    pub fn op(&self) -> OpKind {
        self.witness.kind()
    }
}

/// All results of admissible rewrites of `profile`, one per isomorphism
/// class, ordered by key. The witness kept for each class is the first one
/// found in [`applications`] order.
///
/// Inadmissible upper-connected merges are skipped; any other failure of a
/// generated application would be a bug and panics.
pub fn neighbors(profile: &TopologicalProfile, ctx: &EnumerationContext) -> Vec<Neighbor> {
    let classes = ctx.leg_classes();
    let mut found: BTreeMap<CanonicalKey, Neighbor> = BTreeMap::new();
    for witness in applications(profile) {
        let result = match witness.apply(profile) {
            Ok(result) => result,
            Err(OpError::Inadmissible(_)) => continue,
            Err(e) => panic!("generated application {witness} failed: {e}"),
        };
        let (key, form) = canonicalize(&result, &classes);
        found.entry(key.clone()).or_insert(Neighbor {
            key,
            profile: form,
            witness,
        });
    }
    found.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LandscapeNode {
    pub key: CanonicalKey,
    pub profile: TopologicalProfile,
}

/// An undirected landscape edge. The rewrite described by `witness` turns
/// node `source` into the other endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LandscapeEdge {
    pub a: usize,
    pub b: usize,
    pub op: OpKind,
    pub source: usize,
    pub witness: OpWitness,
}

impl LandscapeEdge {
    pub fn target(&self) -> usize {
        if self.source == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandscapeGraph {
    pub context: EnumerationContext,
    /// Sorted by key.
    pub nodes: Vec<LandscapeNode>,
    /// Sorted by `(a, b)` with `a < b`.
    pub edges: Vec<LandscapeEdge>,
}

/// The small landscape of `ctx`.
///
/// Every rewrite result must already be an enumerated node; anything else
/// is reported as a closure error.
pub fn build_landscape(ctx: &EnumerationContext) -> Result<LandscapeGraph, LandscapeError> {
    let nodes: Vec<LandscapeNode> = enumerate::enumerate_with_keys(ctx)
        .into_iter()
        .map(|(key, profile)| LandscapeNode { key, profile })
        .collect();
    let index: BTreeMap<&CanonicalKey, usize> =
        nodes.iter().enumerate().map(|(i, n)| (&n.key, i)).collect();
    let per_node: Vec<Vec<Neighbor>> = nodes
        .par_iter()
        .map(|node| neighbors(&node.profile, ctx))
        .collect();
    let mut edges: BTreeMap<(usize, usize), LandscapeEdge> = BTreeMap::new();
    for (source, found) in per_node.into_iter().enumerate() {
        for nb in found {
            let Some(&target) = index.get(&nb.key) else {
                return Err(LandscapeError::Closure {
                    source_key: nodes[source].key.to_string(),
                    result_key: nb.key.to_string(),
                    op: nb.witness.to_string(),
                });
            };
            let (a, b) = (source.min(target), source.max(target));
            edges.entry((a, b)).or_insert(LandscapeEdge {
                a,
                b,
                op: nb.op(),
                source,
                witness: nb.witness,
            });
        }
    }
    Ok(LandscapeGraph {
        context: ctx.clone(),
        nodes,
        edges: edges.into_values().collect(),
    })
}

/// One tree edge of a connectivity certificate: `node` is reached from
/// `parent` through landscape edge `edge`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStep {
    pub node: usize,
    pub parent: usize,
    pub edge: usize,
    pub op: OpKind,
}

/// A breadth-first spanning tree rooted at node 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub root: usize,
    pub steps: Vec<TreeStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    /// Spans the component of the root; spans the whole graph iff connected.
    pub certificate: Certificate,
}

impl LandscapeGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.key.cmp(key)).ok()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let (a, b) = (i.min(j), i.max(j));
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
            .is_ok()
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.a, e.b)).collect()
    }

    /// Connectivity with a breadth-first spanning tree as certificate,
    /// cross-checked against union–find.
    pub fn connectivity(&self) -> Result<Connectivity, LandscapeError> {
        if self.nodes.is_empty() {
            return Err(LandscapeError::Empty(self.context.to_string()));
        }
        let pairs = self.pairs();
        let (via, reached) = bfs_tree(self.nodes.len(), &pairs, 0);
        let mut dsu = DisjointSet::new(self.nodes.len());
        for &(a, b) in &pairs {
            dsu.union(a, b);
        }
        let (bfs, dsu) = (reached == self.nodes.len(), dsu.component_count() == 1);
        if bfs != dsu {
            return Err(LandscapeError::Inconsistent { bfs, dsu });
        }
        let steps = via
            .iter()
            .enumerate()
            .filter_map(|(node, via)| {
                via.map(|edge| {
                    let e = &self.edges[edge];
                    TreeStep {
                        node,
                        parent: if e.a == node { e.b } else { e.a },
                        edge,
                        op: e.op,
                    }
                })
            })
            .collect();
        Ok(Connectivity {
            connected: bfs,
            certificate: Certificate { root: 0, steps },
        })
    }

    /// Checks that `certificate` is a spanning tree of this graph made of
    /// its edges: every non-root node appears once, through an existing edge
    /// with the recorded operation, and every parent chain ends at the root.
    pub fn verify_certificate(&self, certificate: &Certificate) -> bool {
        let n = self.nodes.len();
        if certificate.root >= n || certificate.steps.len() + 1 != n {
            return false;
        }
        let mut parent = vec![None; n];
        for step in &certificate.steps {
            let Some(edge) = self.edges.get(step.edge) else {
                return false;
            };
            let endpoints = (edge.a.min(edge.b), edge.a.max(edge.b));
            let claimed = (step.node.min(step.parent), step.node.max(step.parent));
            if endpoints != claimed
                || edge.op != step.op
                || step.node == certificate.root
                || parent[step.node].is_some()
            {
                return false;
            }
            parent[step.node] = Some(step.parent);
        }
        (0..n).all(|start| {
            let mut v = start;
            for _ in 0..n {
                if v == certificate.root {
                    return true;
                }
                match parent[v] {
                    Some(p) => v = p,
                    None => return false,
                }
            }
            false
        })
    }

    /// Compares the subgraph on profiles with one P-vertex and one F-vertex
    /// with the single-vertex partition graph, matching each profile to the
    /// partition formed by its edge weights.
    pub fn sublandscape_report(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let (d, g) = (self.context.d(), i64::from(self.context.g()));
        let mut image: BTreeMap<Partition, usize> = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let p = &node.profile;
            if p.p_vertices.len() != 1 || p.f_vertices.len() != 1 {
                continue;
            }
            let partition = Partition::new(p.edges.iter().map(|e| e.mu).collect());
            let genus = i64::from(p.p_vertices[0].genus);
            let expected = g - partition.len() as i64 + 1;
            if genus != expected {
                report.push(
                    "genus",
                    format!("node {} has genus {genus}, expected {expected}", node.key),
                );
            }
            if let Some(other) = image.insert(partition.clone(), i) {
                report.push(
                    "injective",
                    format!("nodes {other} and {i} both map to {partition}"),
                );
            }
        }
        let target = graph_p(d, g as u32);
        let mapped: BTreeSet<&Partition> = image.keys().collect();
        let expected: BTreeSet<&Partition> = target.nodes.iter().collect();
        for p in mapped.difference(&expected) {
            report.push("nodes", format!("{p} is in the landscape only"));
        }
        for p in expected.difference(&mapped) {
            report.push("nodes", format!("{p} is in the partition graph only"));
        }
        for e in &target.edges {
            let (x, y) = (&target.nodes[e.from], &target.nodes[e.to]);
            if let (Some(&i), Some(&j)) = (image.get(x), image.get(y)) {
                if !self.has_edge(i, j) {
                    report.push("edges", format!("{x} – {y} is in the partition graph only"));
                }
            }
        }
        let inverse: BTreeMap<usize, &Partition> = image.iter().map(|(p, &i)| (i, p)).collect();
        for e in &self.edges {
            if let (Some(x), Some(y)) = (inverse.get(&e.a), inverse.get(&e.b)) {
                if !target.has_edge(x, y) {
                    report.push("edges", format!("{x} – {y} is in the landscape only"));
                }
            }
        }
        report
    }

    /// `{"context": …, "nodes": [profile], "edges": [{"a", "b", "op", "witness"}]}`
    /// with nodes in key order and edges referring to node keys.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<ProfileDocument> = self
            .nodes
            .iter()
            .map(|n| ProfileDocument::verbatim(&n.profile, &self.context))
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "a": self.nodes[e.a].key,
                    "b": self.nodes[e.b].key,
                    "op": e.op,
                    "source": self.nodes[e.source].key,
                    "witness": e.witness,
                })
            })
            .collect();
        serde_json::json!({
            "context": self.context,
            "nodes": nodes,
            "keys": self.nodes.iter().map(|n| &n.key).collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    /// Graphviz rendering: one cluster per profile, P-vertices as circles
    /// showing their genus, F-vertices as boxes listing leg multiplicities
    /// (with `κ` marked) and edge labels giving weights. Landscape edges
    /// join clusters and are labelled by operation.
    pub fn to_dot(&self) -> String {
        let m = self.context.m();
        let mut out = String::from("graph landscape {\n  compound=true;\n  node [fontsize=10];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let p = &node.profile;
            let _ = writeln!(out, "  subgraph cluster_{i} {{");
            let _ = writeln!(out, "    label=\"{i}\";");
            for v in &p.p_vertices {
                let _ = writeln!(
                    out,
                    "    n{i}_{} [shape=circle, label=\"{}\", xlabel=\"{}\"];",
                    v.id, v.genus, v.deg
                );
            }
            for v in &p.f_vertices {
                let legs: Vec<String> = v
                    .legs
                    .iter()
                    .map(|&l| m.of_leg(l).unwrap_or(0).to_string())
                    .collect();
                let mark = if v.is_distinguished() { "κ " } else { "" };
                let _ = writeln!(
                    out,
                    "    n{i}_{} [shape=box, label=\"{mark}{}\"];",
                    v.id,
                    legs.join(",")
                );
            }
            for e in &p.edges {
                let _ = writeln!(out, "    n{i}_{} -- n{i}_{} [label=\"{}\"];", e.p, e.f, e.mu);
            }
            out.push_str("  }\n");
        }
        for e in &self.edges {
            let anchor = |k: usize| format!("n{k}_{}", self.nodes[k].profile.p_vertices[0].id);
            let _ = writeln!(
                out,
                "  {} -- {} [ltail=cluster_{}, lhead=cluster_{}, style=bold, color=blue, label=\"{}\"];",
                anchor(e.a),
                anchor(e.b),
                e.a,
                e.b,
                e.op
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the landscape of `ctx` and decides its connectivity.
pub fn landscape_connected(ctx: &EnumerationContext) -> Result<Connectivity, LandscapeError> {
    build_landscape(ctx)?.connectivity()
}

/// Sub-landscape check for `ctx`; see [`LandscapeGraph::sublandscape_report`].
pub fn sublandscape_partition_isomorphism(ctx: &EnumerationContext) -> ValidationReport {
    match build_landscape(ctx) {
        Ok(graph) => graph.sublandscape_report(),
        Err(e) => {
            let mut report = ValidationReport::new();
            report.push("closure", e.to_string());
            report
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub from: CanonicalKey,
    pub to: CanonicalKey,
    pub op: OpKind,
    pub witness: OpWitness,
}

/// A walk of disconnected rewrites ending at a profile with one P-vertex
/// and one F-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionPath {
    pub start: CanonicalKey,
    pub steps: Vec<ReductionStep>,
    pub end: TopologicalProfile,
}

impl ReductionPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Merges P-vertices, then crimps fibers into `κ`, one vertex at a time.
pub fn reduce_to_core(
    profile: &TopologicalProfile,
    ctx: &EnumerationContext,
) -> Result<ReductionPath, LandscapeError> {
    if !is_small(profile, ctx) {
        return Err(LandscapeError::NotSmall(ctx.to_string()));
    }
    let classes = ctx.leg_classes();
    let (start, mut current) = canonicalize(profile, &classes);
    let mut key = start.clone();
    let mut steps = Vec::new();
    while current.vertex_count() > 2 {
        let wanted = if current.p_vertices.len() > 1 {
            OpKind::UpperDisconnected
        } else {
            OpKind::LowerDisconnected
        };
        let witness = applications(&current)
            .into_iter()
            .find(|w| w.kind() == wanted)
            .ok_or_else(|| LandscapeError::Stuck(key.to_string()))?;
        let next = witness
            .apply(&current)
            .map_err(|_| LandscapeError::Stuck(key.to_string()))?;
        let (next_key, next_form) = canonicalize(&next, &classes);
        steps.push(ReductionStep {
            from: key,
            to: next_key.clone(),
            op: wanted,
            witness,
        });
        key = next_key;
        current = next_form;
    }
    Ok(ReductionPath {
        start,
        steps,
        end: current,
    })
}
