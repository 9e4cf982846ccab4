//! The three elementary rewrites of a small profile.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::choose2;
use crate::identities::uc_condition;
use crate::profile::{TopologicalProfile, WeightedEdge};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    /// The arguments do not describe a valid application.
    #[error("{0}")]
    Domain(String),
    /// The application is well-formed but the merge inequality fails.
    #[error("inadmissible: {0}")]
    Inadmissible(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    UpperConnected,
    UpperDisconnected,
    LowerDisconnected,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::UpperConnected => "upper-connected",
            OpKind::UpperDisconnected => "upper-disconnected",
            OpKind::LowerDisconnected => "lower-disconnected",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The vertex and edge choices of one application, by identifier in the
/// profile the rewrite was applied to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum OpWitness {
    UpperConnected { v: String, e1: String, e2: String },
    UpperDisconnected { v1: String, v2: String, e1: String, e2: String },
    LowerDisconnected { vp: String, vf: String, e: String, e_tilde: String },
}

impl OpWitness {
    pub fn kind(&self) -> OpKind {
        match self {
            OpWitness::UpperConnected { .. } => OpKind::UpperConnected,
            OpWitness::UpperDisconnected { .. } => OpKind::UpperDisconnected,
            OpWitness::LowerDisconnected { .. } => OpKind::LowerDisconnected,
        }
    }

    pub fn apply(&self, profile: &TopologicalProfile) -> Result<TopologicalProfile, OpError> {
        match self {
            OpWitness::UpperConnected { v, e1, e2 } => upper_connected(profile, v, e1, e2),
            OpWitness::UpperDisconnected { v1, v2, e1, e2 } => {
                upper_disconnected(profile, v1, v2, e1, e2)
            }
            OpWitness::LowerDisconnected { vp, vf, e, e_tilde } => {
                lower_disconnected(profile, vp, vf, e, e_tilde)
            }
        }
    }
}

impl fmt::Display for OpWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpWitness::UpperConnected { v, e1, e2 } => {
                write!(f, "upper-connected at {v} merging {e1}, {e2}")
            }
            OpWitness::UpperDisconnected { v1, v2, e1, e2 } => {
                write!(f, "upper-disconnected merging {v1}, {v2} along {e1}, {e2}")
            }
            OpWitness::LowerDisconnected { vp, vf, e, e_tilde } => {
                write!(f, "lower-disconnected crimping {vf} at {vp} along {e}, {e_tilde}")
            }
        }
    }
}

fn kappa_id(profile: &TopologicalProfile) -> Result<String, OpError> {
    profile
        .distinguished_f_vertex()
        .map(|k| k.id.clone())
        .map_err(|e| OpError::Domain(e.to_string()))
}

fn edge<'a>(profile: &'a TopologicalProfile, id: &str) -> Result<&'a WeightedEdge, OpError> {
    profile
        .edge(id)
        .ok_or_else(|| OpError::Domain(format!("no edge {id:?}")))
}

fn joins(edge: &WeightedEdge, p: &str, f: &str) -> Result<(), OpError> {
    if edge.p == p && edge.f == f {
        Ok(())
    } else {
        Err(OpError::Domain(format!(
            "edge {:?} joins {} and {}, not {p} and {f}",
            edge.id, edge.p, edge.f
        )))
    }
}

/// Replaces `keep` by an edge of weight `μ(keep) + μ(drop)` and removes `drop`.
fn merge_edges(profile: &mut TopologicalProfile, keep: &str, drop: &str) {
    let extra = profile.edge(drop).map(|e| e.mu).unwrap_or(0);
    profile.edges.retain(|e| e.id != drop);
    if let Some(e) = profile.edges.iter_mut().find(|e| e.id == keep) {
        e.mu += extra;
    }
}

/// Merges the parallel edges `e1, e2` between `v` and `κ` into one edge of
/// weight `μ(e1) + μ(e2)` and raises `g(v)` by one.
pub fn upper_connected(
    profile: &TopologicalProfile,
    v: &str,
    e1: &str,
    e2: &str,
) -> Result<TopologicalProfile, OpError> {
    let kappa = kappa_id(profile)?;
    if e1 == e2 {
        return Err(OpError::Domain(format!("cannot merge edge {e1:?} with itself")));
    }
    let vertex = profile
        .p_vertex(v)
        .ok_or_else(|| OpError::Domain(format!("no P-vertex {v:?}")))?;
    let (a, b) = (edge(profile, e1)?, edge(profile, e2)?);
    joins(a, v, &kappa)?;
    joins(b, v, &kappa)?;
    if !uc_condition(vertex.deg, vertex.genus, a.mu, b.mu) {
        return Err(OpError::Inadmissible(format!(
            "g({v}) = {} > C({} − 1, 2) − min{{{}, {}}} = {}",
            vertex.genus,
            vertex.deg,
            a.mu,
            b.mu,
            choose2(i64::from(vertex.deg) - 1) - i64::from(a.mu.min(b.mu))
        )));
    }
    let mut out = profile.clone();
    merge_edges(&mut out, e1, e2);
    if let Some(p) = out.p_vertices.iter_mut().find(|p| p.id == v) {
        p.genus += 1;
    }
    Ok(out)
}

/// Merges the P-vertices `v1, v2` (degrees and genera add) and their edges
/// `e1, e2` to `κ`; every other edge of `v2` moves to the merged vertex.
pub fn upper_disconnected(
    profile: &TopologicalProfile,
    v1: &str,
    v2: &str,
    e1: &str,
    e2: &str,
) -> Result<TopologicalProfile, OpError> {
    let kappa = kappa_id(profile)?;
    if v1 == v2 {
        return Err(OpError::Domain(format!("cannot merge P-vertex {v1:?} with itself")));
    }
    let second = profile
        .p_vertex(v2)
        .ok_or_else(|| OpError::Domain(format!("no P-vertex {v2:?}")))?
        .clone();
    if profile.p_vertex(v1).is_none() {
        return Err(OpError::Domain(format!("no P-vertex {v1:?}")));
    }
    joins(edge(profile, e1)?, v1, &kappa)?;
    joins(edge(profile, e2)?, v2, &kappa)?;
    let mut out = profile.clone();
    merge_edges(&mut out, e1, e2);
    out.p_vertices.retain(|p| p.id != v2);
    if let Some(p) = out.p_vertices.iter_mut().find(|p| p.id == v1) {
        p.deg += second.deg;
        p.genus += second.genus;
        p.legs.extend(second.legs);
        p.legs.sort_unstable();
    }
    for e in out.edges.iter_mut().filter(|e| e.p == v2) {
        e.p = v1.to_string();
    }
    Ok(out)
}

/// Crimps the F-vertex `vf` into `κ`: `df`, `e` and legs add, and the edge
/// `e` (joining `vp` and `vf`) merges with `ẽ` (joining `vp` and `κ`) into
/// one edge of weight `μ(e) + μ(ẽ)`.
pub fn lower_disconnected(
    profile: &TopologicalProfile,
    vp: &str,
    vf: &str,
    e: &str,
    e_tilde: &str,
) -> Result<TopologicalProfile, OpError> {
    let kappa = kappa_id(profile)?;
    if vf == kappa {
        return Err(OpError::Domain(format!("{vf:?} is the distinguished vertex")));
    }
    let fiber = profile
        .f_vertex(vf)
        .ok_or_else(|| OpError::Domain(format!("no F-vertex {vf:?}")))?
        .clone();
    joins(edge(profile, e)?, vp, vf)?;
    let tilde = profile
        .edge(e_tilde)
        .ok_or_else(|| OpError::Domain(format!("{vp} has no edge {e_tilde:?} to κ")))?;
    joins(tilde, vp, &kappa)?;
    let mut out = profile.clone();
    merge_edges(&mut out, e_tilde, e);
    out.f_vertices.retain(|f| f.id != vf);
    if let Some(k) = out.f_vertices.iter_mut().find(|f| f.id == kappa) {
        k.df += fiber.df;
        k.e += fiber.e;
        k.genus += fiber.genus;
        k.legs.extend(fiber.legs);
        k.legs.sort_unstable();
    }
    for edge in out.edges.iter_mut().filter(|edge| edge.f == vf) {
        edge.f = kappa.clone();
    }
    Ok(out)
}

/// Every well-formed application of the three rewrites to `profile`,
/// admissible or not, in a fixed order.
pub fn applications(profile: &TopologicalProfile) -> Vec<OpWitness> {
    let Ok(kappa) = kappa_id(profile) else {
        return Vec::new();
    };
    let to_kappa = |v: &str| -> Vec<String> {
        profile
            .edges_between(v, &kappa)
            .map(|e| e.id.clone())
            .collect()
    };
    let mut out = Vec::new();
    for v in &profile.p_vertices {
        let edges = to_kappa(&v.id);
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                out.push(OpWitness::UpperConnected {
                    v: v.id.clone(),
                    e1: edges[i].clone(),
                    e2: edges[j].clone(),
                });
            }
        }
    }
    for (i, a) in profile.p_vertices.iter().enumerate() {
        for b in &profile.p_vertices[i + 1..] {
            for e1 in to_kappa(&a.id) {
                for e2 in to_kappa(&b.id) {
                    out.push(OpWitness::UpperDisconnected {
                        v1: a.id.clone(),
                        v2: b.id.clone(),
                        e1: e1.clone(),
                        e2,
                    });
                }
            }
        }
    }
    for f in profile.f_vertices.iter().filter(|f| f.id != kappa) {
        for e in profile.incident(&f.id) {
            for e_tilde in to_kappa(&e.p) {
                out.push(OpWitness::LowerDisconnected {
                    vp: e.p.clone(),
                    vf: f.id.clone(),
                    e: e.id.clone(),
                    e_tilde,
                });
            }
        }
    }
    out
}
