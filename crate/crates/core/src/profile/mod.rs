//! Topological profiles: weighted bipartite multigraphs between components
//! mapping to the plane `P` and components mapping to the ruled surface `F`.
//!
//! A profile carries
//!
//! * P-vertices with a degree `deg` and a genus,
//! * F-vertices with the intersection numbers `e` (with the double line) and
//!   `df` (with the transported line `L₀`), a genus and the ordinary legs they
//!   carry,
//! * weighted edges, one per distinguished marked point, each joining a
//!   P-vertex to an F-vertex.
//!
//! Identifiers are opaque strings and only matter for addressing vertices
//! and edges when applying rewrites; equality of profiles "as shapes" is
//! decided by [`canonical_key`].

mod canon;
mod json;
mod validate;

pub use canon::{are_isomorphic, canonical_form, canonical_key, canonicalize, CanonicalKey, LegClasses};
pub use json::{ProfileDocument, ProfileJsonError};
pub use validate::{is_small, smallness_report, validate_profile, tags};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choose2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("the multiplicity vector is empty")]
    EmptyMultiplicities,
    #[error("multiplicity m_{leg} is zero; tangency orders must be positive")]
    ZeroMultiplicity { leg: usize },
    #[error("multiplicities sum to {sum}, expected the degree {d}")]
    SumMismatch { sum: u64, d: u32 },
    #[error("degree {d} is unsupported; the landscape needs d >= 2")]
    DegreeTooSmall { d: u32 },
    #[error("genus {g} is outside 0..={max} for degree {d}")]
    GenusOutOfRange { d: u32, g: u32, max: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("no F-vertex has df = e + 1")]
    NoDistinguishedVertex,
    #[error("{0} F-vertices have df = e + 1; a small profile has exactly one")]
    SeveralDistinguishedVertices(usize),
}

/// Ordered tangency multiplicities `m = (m_1, ..., m_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityVector(Vec<u32>);

impl MultiplicityVector {
    pub fn new(m: Vec<u32>) -> Result<Self, ContextError> {
        if m.is_empty() {
            return Err(ContextError::EmptyMultiplicities);
        }
        if let Some(i) = m.iter().position(|&x| x == 0) {
            return Err(ContextError::ZeroMultiplicity { leg: i + 1 });
        }
        Ok(MultiplicityVector(m))
    }

    /// The all-ones vector of length `d`.
    pub fn ones(d: u32) -> Self {
        MultiplicityVector(vec![1; d as usize])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of the 1-based leg `leg`.
    pub fn of_leg(&self, leg: usize) -> Option<u32> {
        leg.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// How legs are compared when deciding whether two profiles are the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LegSymmetry {
    /// Legs with equal multiplicity are interchangeable. This is how the
    /// landscape is drawn, with legs labelled only by their tangency order.
    #[default]
    Multiplicity,
    /// Every leg keeps its own index.
    Labeled,
}

/// Degree, genus and tangency data fixing which profiles are admissible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EnumerationContext {
    d: u32,
    g: u32,
    m: MultiplicityVector,
    #[serde(skip)]
    legs: LegSymmetry,
}

impl EnumerationContext {
    pub fn new(d: u32, g: u32, m: Vec<u32>) -> Result<Self, ContextError> {
        Self::with_multiplicities(d, g, MultiplicityVector::new(m)?)
    }

    pub fn with_multiplicities(
        d: u32,
        g: u32,
        m: MultiplicityVector,
    ) -> Result<Self, ContextError> {
        if d < 2 {
            return Err(ContextError::DegreeTooSmall { d });
        }
        if m.total() != u64::from(d) {
            return Err(ContextError::SumMismatch { sum: m.total(), d });
        }
        let max = choose2(i64::from(d) - 1);
        if i64::from(g) > max {
            return Err(ContextError::GenusOutOfRange { d, g, max });
        }
        Ok(EnumerationContext {
            d,
            g,
            m,
            legs: LegSymmetry::default(),
        })
    }

    pub fn with_leg_symmetry(mut self, legs: LegSymmetry) -> Self {
        self.legs = legs;
        self
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn m(&self) -> &MultiplicityVector {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn leg_symmetry(&self) -> LegSymmetry {
        self.legs
    }

    pub fn leg_classes(&self) -> LegClasses {
        match self.legs {
            LegSymmetry::Multiplicity => LegClasses::by_multiplicity(&self.m),
            LegSymmetry::Labeled => LegClasses::labeled(),
        }
    }

    pub fn canonical_key(&self, profile: &TopologicalProfile) -> CanonicalKey {
        canonical_key(profile, &self.leg_classes())
    }
}

impl std::fmt::Display for EnumerationContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m: Vec<String> = self.m.0.iter().map(u32::to_string).collect();
        write!(f, "(d={}, g={}, m=({}))", self.d, self.g, m.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PVertex {
    pub id: String,
    pub deg: u32,
    pub genus: u32,
    /// Legs on the plane side. Always empty for small profiles.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub legs: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FVertex {
    pub id: String,
    /// Intersection number with the double line `ℓ`.
    pub e: u32,
    /// Intersection number with `L₀`.
    pub df: u32,
    pub genus: u32,
    pub legs: Vec<usize>,
}

impl FVertex {
    pub fn is_distinguished(&self) -> bool {
        self.df == self.e + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub id: String,
    pub p: String,
    pub f: String,
    pub mu: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct TopologicalProfile {
    pub p_vertices: Vec<PVertex>,
    pub f_vertices: Vec<FVertex>,
    pub edges: Vec<WeightedEdge>,
}

impl TopologicalProfile {
    pub fn builder() -> ProfileBuilder {
        ProfileBuilder::default()
    }

    pub fn p_vertex(&self, id: &str) -> Option<&PVertex> {
        self.p_vertices.iter().find(|v| v.id == id)
    }

    pub fn f_vertex(&self, id: &str) -> Option<&FVertex> {
        self.f_vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&WeightedEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex_count(&self) -> usize {
        self.p_vertices.len() + self.f_vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges joining the P-vertex `p` to the F-vertex `f`, in storage order.
    pub fn edges_between<'a>(
        &'a self,
        p: &'a str,
        f: &'a str,
    ) -> impl Iterator<Item = &'a WeightedEdge> + 'a {
        self.edges.iter().filter(move |e| e.p == p && e.f == f)
    }

    /// Edges with `id` as one endpoint.
    pub fn incident<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a WeightedEdge> + 'a {
        self.edges.iter().filter(move |e| e.p == id || e.f == id)
    }

    /// `Σ_{v ∈ V(F)} (df(v) − e(v))`: the multiplicity of the line after
    /// the degeneration.
    pub fn height(&self) -> i64 {
        self.f_vertices
            .iter()
            .map(|v| i64::from(v.df) - i64::from(v.e))
            .sum()
    }

    /// The unique F-vertex with `df = e + 1`.
    pub fn distinguished_f_vertex(&self) -> Result<&FVertex, ProfileError> {
        let mut found = self.f_vertices.iter().filter(|v| v.is_distinguished());
        match (found.next(), found.count()) {
            (None, _) => Err(ProfileError::NoDistinguishedVertex),
            (Some(v), 0) => Ok(v),
            (Some(_), rest) => Err(ProfileError::SeveralDistinguishedVertices(rest + 1)),
        }
    }

    /// Total genus `Σ g(v) − |V| + |E| + 1` of the glued curve.
    pub fn arithmetic_genus(&self) -> i64 {
        let genera: i64 = self
            .p_vertices
            .iter()
            .map(|v| i64::from(v.genus))
            .chain(self.f_vertices.iter().map(|v| i64::from(v.genus)))
            .sum();
        genera - self.vertex_count() as i64 + self.edge_count() as i64 + 1
    }

    /// Copy of the profile with vertices and edges reordered by the given
    /// permutations and every identifier replaced by a fresh one.
    ///
    /// `p_order[i]` is the index of the P-vertex placed at position `i`, and
    /// likewise for the other two.
    ///
    /// # Panics
    ///
    /// If an order is not a permutation of the corresponding index range.
    pub fn permuted(&self, p_order: &[usize], f_order: &[usize], e_order: &[usize]) -> Self {
        fn check(order: &[usize], len: usize) {
            let mut seen = vec![false; len];
            assert_eq!(order.len(), len, "permutation has the wrong length");
            for &i in order {
                assert!(!std::mem::replace(&mut seen[i], true), "not a permutation");
            }
        }
        check(p_order, self.p_vertices.len());
        check(f_order, self.f_vertices.len());
        check(e_order, self.edges.len());

        let rename_p = |old: &str| {
            let i = self.p_vertices.iter().position(|v| v.id == old);
            i.map(|i| format!("u{}", p_order.iter().position(|&j| j == i).unwrap()))
                .unwrap_or_else(|| old.to_string())
        };
        let rename_f = |old: &str| {
            let i = self.f_vertices.iter().position(|v| v.id == old);
            i.map(|i| format!("w{}", f_order.iter().position(|&j| j == i).unwrap()))
                .unwrap_or_else(|| old.to_string())
        };
        TopologicalProfile {
            p_vertices: p_order
                .iter()
                .map(|&i| PVertex {
                    id: rename_p(&self.p_vertices[i].id),
                    ..self.p_vertices[i].clone()
                })
                .collect(),
            f_vertices: f_order
                .iter()
                .map(|&i| FVertex {
                    id: rename_f(&self.f_vertices[i].id),
                    ..self.f_vertices[i].clone()
                })
                .collect(),
            edges: e_order
                .iter()
                .enumerate()
                .map(|(pos, &i)| {
                    let e = &self.edges[i];
                    WeightedEdge {
                        id: format!("x{pos}"),
                        p: rename_p(&e.p),
                        f: rename_f(&e.f),
                        mu: e.mu,
                    }
                })
                .collect(),
        }
    }
}

/// Incremental construction with generated identifiers `p0, p1, ...`,
/// `f0, ...` and `e0, ...`.
#[derive(Debug, Default)]
pub struct ProfileBuilder {
    profile: TopologicalProfile,
}

impl ProfileBuilder {
    pub fn p_vertex(&mut self, deg: u32, genus: u32) -> String {
        let id = format!("p{}", self.profile.p_vertices.len());
        self.profile.p_vertices.push(PVertex {
            id: id.clone(),
            deg,
            genus,
            legs: Vec::new(),
        });
        id
    }

    pub fn f_vertex(&mut self, e: u32, df: u32, legs: &[usize]) -> String {
        let id = format!("f{}", self.profile.f_vertices.len());
        self.profile.f_vertices.push(FVertex {
            id: id.clone(),
            e,
            df,
            genus: 0,
            legs: legs.to_vec(),
        });
        id
    }

    pub fn edge(&mut self, p: &str, f: &str, mu: u32) -> String {
        let id = format!("e{}", self.profile.edges.len());
        self.profile.edges.push(WeightedEdge {
            id: id.clone(),
            p: p.to_string(),
            f: f.to_string(),
            mu,
        });
        id
    }

    pub fn build(self) -> TopologicalProfile {
        self.profile
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic_single() -> TopologicalProfile {
        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(3, 1);
        let k = b.f_vertex(3, 4, &[1, 2, 3]);
        b.edge(&p, &k, 3);
        b.build()
    }

    #[test]
    fn context_rejects_bad_data() {
        assert_eq!(
            EnumerationContext::new(4, 1, vec![2, 1]),
            Err(ContextError::SumMismatch { sum: 3, d: 4 })
        );
        assert_eq!(
            EnumerationContext::new(1, 0, vec![1]),
            Err(ContextError::DegreeTooSmall { d: 1 })
        );
        assert!(matches!(
            EnumerationContext::new(4, 4, vec![4]),
            Err(ContextError::GenusOutOfRange { max: 3, .. })
        ));
        assert_eq!(
            EnumerationContext::new(3, 0, vec![3, 0]),
            Err(ContextError::ZeroMultiplicity { leg: 2 })
        );
        assert!(EnumerationContext::new(4, 3, vec![4]).is_ok());
    }

    #[test]
    fn height_is_additive() {
        assert_eq!(quartic_single().height(), 1);

        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(2, 0);
        let f = b.f_vertex(2, 2, &[1]);
        b.edge(&p, &f, 2);
        assert_eq!(b.build().height(), 0);

        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(3, 0);
        let f1 = b.f_vertex(1, 2, &[1]);
        let f2 = b.f_vertex(2, 2, &[2]);
        b.edge(&p, &f1, 1);
        b.edge(&p, &f2, 2);
        assert_eq!(b.build().height(), 1);
    }

    #[test]
    fn distinguished_vertex() {
        let single = quartic_single();
        assert_eq!(single.distinguished_f_vertex().unwrap().id, "f0");

        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(2, 0);
        let f = b.f_vertex(2, 2, &[1]);
        b.edge(&p, &f, 2);
        assert_eq!(
            b.build().distinguished_f_vertex(),
            Err(ProfileError::NoDistinguishedVertex)
        );

        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(2, 0);
        let f1 = b.f_vertex(1, 2, &[1]);
        let f2 = b.f_vertex(1, 2, &[2]);
        b.edge(&p, &f1, 1);
        b.edge(&p, &f2, 1);
        assert_eq!(
            b.build().distinguished_f_vertex(),
            Err(ProfileError::SeveralDistinguishedVertices(2))
        );
    }

    #[test]
    fn permuted_renames_consistently() {
        let mut b = TopologicalProfile::builder();
        let p0 = b.p_vertex(2, 0);
        let p1 = b.p_vertex(1, 0);
        let k = b.f_vertex(3, 4, &[1, 2, 3]);
        b.edge(&p0, &k, 1);
        b.edge(&p0, &k, 1);
        b.edge(&p1, &k, 1);
        let profile = b.build();
        let shuffled = profile.permuted(&[1, 0], &[0], &[2, 0, 1]);
        assert_eq!(shuffled.p_vertices[0].deg, 1);
        assert_eq!(shuffled.edges[0].p, shuffled.p_vertices[0].id);
        assert_eq!(shuffled.edges_between("u1", "w0").count(), 2);
    }
}
