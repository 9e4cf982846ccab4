use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    canonical_form, ContextError, EnumerationContext, FVertex, PVertex, TopologicalProfile,
    WeightedEdge,
};

#[derive(Debug, Error)]
pub enum ProfileJsonError {
    #[error("malformed profile JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid context in profile JSON: {0}")]
    Context(#[from] ContextError),
    #[error("F-vertex {id:?} is marked distinguished = {marked} but has e = {e}, df = {df}")]
    DistinguishedFlag { id: String, marked: bool, e: u32, df: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVertexDocument {
    pub id: String,
    pub e: u32,
    pub df: u32,
    pub genus: u32,
    pub distinguished: bool,
    pub legs: Vec<usize>,
}

/// The JSON form of a profile together with its context.
///
/// Field order is fixed: `d, g, m, p_vertices, f_vertices, edges`. Documents
/// built with [`ProfileDocument::canonical`] serialize to identical bytes
/// exactly when the profiles are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub d: u32,
    pub g: u32,
    pub m: Vec<u32>,
    pub p_vertices: Vec<PVertex>,
    pub f_vertices: Vec<FVertexDocument>,
    pub edges: Vec<WeightedEdge>,
}

impl ProfileDocument {
    /// Document for `profile` as given, without canonical relabelling.
    pub fn verbatim(profile: &TopologicalProfile, ctx: &EnumerationContext) -> Self {
        ProfileDocument {
            d: ctx.d(),
            g: ctx.g(),
            m: ctx.m().as_slice().to_vec(),
            p_vertices: profile.p_vertices.clone(),
            f_vertices: profile
                .f_vertices
                .iter()
                .map(|v| FVertexDocument {
                    id: v.id.clone(),
                    e: v.e,
                    df: v.df,
                    genus: v.genus,
                    distinguished: v.is_distinguished(),
                    legs: v.legs.clone(),
                })
                .collect(),
            edges: profile.edges.clone(),
        }
    }

    /// Document for the canonical representative of `profile`.
    pub fn canonical(profile: &TopologicalProfile, ctx: &EnumerationContext) -> Self {
        Self::verbatim(&canonical_form(profile, &ctx.leg_classes()), ctx)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileJsonError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Splits the document into its context and profile, checking that the
    /// `distinguished` flags agree with the degree data.
    pub fn into_parts(self) -> Result<(EnumerationContext, TopologicalProfile), ProfileJsonError> {
        let ctx = EnumerationContext::new(self.d, self.g, self.m)?;
        let mut f_vertices = Vec::with_capacity(self.f_vertices.len());
        for v in self.f_vertices {
            let actual = v.df == v.e + 1;
            if v.distinguished != actual {
                return Err(ProfileJsonError::DistinguishedFlag {
                    id: v.id,
                    marked: v.distinguished,
                    e: v.e,
                    df: v.df,
                });
            }
            f_vertices.push(FVertex {
                id: v.id,
                e: v.e,
                df: v.df,
                genus: v.genus,
                legs: v.legs,
            });
        }
        Ok((
            ctx,
            TopologicalProfile {
                p_vertices: self.p_vertices,
                f_vertices,
                edges: self.edges,
            },
        ))
    }
}

impl TopologicalProfile {
    /// Canonical JSON serialization; byte-equal exactly for isomorphic
    /// profiles of the same context.
    pub fn to_canonical_json(&self, ctx: &EnumerationContext) -> String {
        ProfileDocument::canonical(self, ctx).to_json()
    }
}
