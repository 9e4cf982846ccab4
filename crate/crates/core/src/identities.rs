//! Closed-form arithmetic around the landscape: expected dimensions, the
//! cycle-rank rearrangement, the two admissibility inequalities and the
//! `h⁰ = 2d + g` count for multiplicity-one profiles.

use serde::Serialize;
use thiserror::Error;

use crate::choose2;
use crate::landscape::enumerate_small_profiles;
use crate::profile::{is_small, EnumerationContext, TopologicalProfile};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("degree {d} is below the minimum {min}")]
    DegreeTooSmall { d: i64, min: i64 },
    #[error("genus {g} is outside 0..={max} for degree {d}")]
    GenusOutOfRange { d: i64, g: i64, max: i64 },
    #[error("{0}")]
    Precondition(String),
    #[error("no multiplicity-one profile exists for {0}")]
    NotFound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub d: u32,
    pub g: u32,
    /// Number of mobile contact points.
    pub k: u32,
    pub vdim: i64,
    pub tangent_deg: i64,
    pub node_count: i64,
}

/// Expected dimension, degree of the twisted normal bundle and number of
/// nodes for degree `d`, genus `g` and `k` mobile contact points.
pub fn dimension_report(d: u32, g: u32, k: u32) -> Result<DimensionReport, IdentityError> {
    let (di, gi, ki) = (i64::from(d), i64::from(g), i64::from(k));
    if d < 1 {
        return Err(IdentityError::DegreeTooSmall { d: di, min: 1 });
    }
    let max = choose2(di - 1);
    if gi > max {
        return Err(IdentityError::GenusOutOfRange { d: di, g: gi, max });
    }
    Ok(DimensionReport {
        d,
        g,
        k,
        vdim: 2 * di + gi + ki - 1,
        tangent_deg: 2 * gi - 2 + 2 * di + ki,
        node_count: max - gi,
    })
}

/// Both sides of an integer identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    /// A report with one violation tagged `tag` when the sides differ.
    pub fn report(&self, tag: &str) -> ValidationReport {
        let mut report = ValidationReport::new();
        if !self.holds() {
            report.push(tag, format!("lhs {} ≠ rhs {}", self.lhs, self.rhs));
        }
        report
    }
}

/// `Σ_{i<j} μᵢμⱼ + Σ C(μᵢ − 1, 2)` against `C(Σμ − 1, 2) + r − 1`.
///
/// # Panics
///
/// If `mu` is empty.
pub fn cycle_rank_identity(mu: &[u32]) -> IdentityCheck {
    assert!(!mu.is_empty(), "the weight list must be nonempty");
    let mu: Vec<i64> = mu.iter().map(|&x| i64::from(x)).collect();
    let mut cross = 0;
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            cross += mu[i] * mu[j];
        }
    }
    let own: i64 = mu.iter().map(|&x| choose2(x - 1)).sum();
    let total: i64 = mu.iter().sum();
    IdentityCheck {
        lhs: cross + own,
        rhs: choose2(total - 1) + mu.len() as i64 - 1,
    }
}

/// Whether two parallel edges of weights `mu1, mu2` at a P-vertex of degree
/// `d_v` and genus `g_v` may be merged: `g_v ≤ C(d_v − 1, 2) − min{mu1, mu2}`.
///
/// This is the only implementation of the inequality; the landscape calls
/// it for every merge of parallel edges.
pub fn uc_condition(d_v: u32, g_v: u32, mu1: u32, mu2: u32) -> bool {
    i64::from(g_v) <= choose2(i64::from(d_v) - 1) - i64::from(mu1.min(mu2))
}

/// `g1 + g2 − 1 ≤ C(d1 + d2 − 1, 2) − min{mu1, mu2}`, the bound that holds
/// without assumption when two P-vertices are merged.
pub fn ud_automatic_check(
    d1: u32,
    g1: u32,
    d2: u32,
    g2: u32,
    mu1: u32,
    mu2: u32,
) -> Result<bool, IdentityError> {
    for (d, g, mu) in [(d1, g1, mu1), (d2, g2, mu2)] {
        let max = choose2(i64::from(d) - 1);
        if i64::from(g) > max {
            return Err(IdentityError::GenusOutOfRange {
                d: d.into(),
                g: g.into(),
                max,
            });
        }
        if mu < 1 || mu > d {
            return Err(IdentityError::Precondition(format!(
                "weight {mu} is outside 1..={d}"
            )));
        }
    }
    let lhs = i64::from(g1) + i64::from(g2) - 1;
    let rhs = choose2(i64::from(d1) + i64::from(d2) - 1) - i64::from(mu1.min(mu2));
    Ok(lhs <= rhs)
}

/// The dimension count `1 + Σ_v (1 + 3·deg(v) + 2g(v) − 2 − g(v)) + d − (d − 1)`
/// for a small profile with all weights 1 and a single F-vertex.
///
/// This is an arithmetic consistency check and equals `2d + g` whenever the
/// genus formula holds; it does not compute any cohomology.
pub fn h0_profile_dimension(
    profile: &TopologicalProfile,
    ctx: &EnumerationContext,
) -> Result<u64, IdentityError> {
    if !is_small(profile, ctx) {
        return Err(IdentityError::Precondition("profile is not small".into()));
    }
    if profile.edges.iter().any(|e| e.mu != 1) {
        return Err(IdentityError::Precondition("some edge weight exceeds 1".into()));
    }
    if profile.f_vertices.len() != 1 {
        return Err(IdentityError::Precondition(format!(
            "profile has {} F-vertices",
            profile.f_vertices.len()
        )));
    }
    let d = i64::from(ctx.d());
    let per_vertex: i64 = profile
        .p_vertices
        .iter()
        .map(|v| {
            let (deg, g) = (i64::from(v.deg), i64::from(v.genus));
            1 + 3 * deg + 2 * g - 2 - g
        })
        .sum();
    let total = 1 + per_vertex + d - (d - 1);
    u64::try_from(total)
        .map_err(|_| IdentityError::Precondition(format!("negative count {total}")))
}

/// The first small profile, in canonical order, with all weights 1 and a
/// single F-vertex.
pub fn find_multiplicity_one_profile(
    ctx: &EnumerationContext,
) -> Result<TopologicalProfile, IdentityError> {
    enumerate_small_profiles(ctx)
        .into_iter()
        .find(|p| p.f_vertices.len() == 1 && p.edges.iter().all(|e| e.mu == 1))
        .ok_or_else(|| IdentityError::NotFound(ctx.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let r = dimension_report(4, 1, 0).unwrap();
        assert_eq!((r.vdim, r.node_count, r.tangent_deg), (8, 2, 8));
        let r = dimension_report(1, 0, 0).unwrap();
        assert_eq!((r.vdim, r.node_count), (1, 0));
        assert_eq!(dimension_report(6, 10, 0).unwrap().node_count, 0);
        assert!(matches!(
            dimension_report(6, 11, 0),
            Err(IdentityError::GenusOutOfRange { .. })
        ));
        assert!(dimension_report(0, 0, 0).is_err());
    }

    #[test]
    fn cycle_rank_examples() {
        assert_eq!(cycle_rank_identity(&[2, 2]), IdentityCheck { lhs: 4, rhs: 4 });
        assert_eq!(cycle_rank_identity(&[1, 1, 1]), IdentityCheck { lhs: 3, rhs: 3 });
        for d in 1..10 {
            assert!(cycle_rank_identity(&[d]).holds());
        }
        assert!(cycle_rank_identity(&[3, 1]).report("cycle").ok);
    }

    #[test]
    fn uc_examples() {
        assert!(!uc_condition(3, 1, 1, 1));
        assert!(uc_condition(3, 0, 1, 2));
        assert!(!uc_condition(2, 0, 1, 1));
        assert!(uc_condition(4, 0, 2, 1));
    }

    #[test]
    fn ud_examples() {
        assert_eq!(ud_automatic_check(1, 0, 1, 0, 1, 1), Ok(true));
        assert_eq!(ud_automatic_check(4, 3, 4, 3, 4, 4), Ok(true));
        assert!(ud_automatic_check(3, 2, 1, 0, 1, 1).is_err());
        assert!(ud_automatic_check(3, 0, 1, 0, 4, 1).is_err());
    }
}
