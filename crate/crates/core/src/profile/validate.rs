use std::collections::{HashMap, HashSet};

use super::{EnumerationContext, TopologicalProfile};
use crate::choose2;
use crate::connectivity::DisjointSet;
use crate::report::ValidationReport;

/// Tags attached to violations reported by [`validate_profile`] and
/// [`smallness_report`].
pub mod tags {
    pub const STRUCTURAL: &str = "structural";
    /// Connectedness of the multigraph.
    pub const D1: &str = "D1";
    /// Positive edge weights.
    pub const D3: &str = "D3";
    /// Degree data: `deg ≥ 1` on P-vertices, `df ∈ {e, e+1}` on F-vertices.
    pub const D4: &str = "D4";
    /// Degree balance: `Σ deg = Σ e` and `Σ df = d`.
    pub const C1: &str = "C1";
    /// Incident weights sum to `deg` (P-side) or `e` (F-side).
    pub const C2: &str = "C2";
    /// Genus bound `g(v) ≤ C(deg − 1, 2)` on P-vertices.
    pub const C3: &str = "C3";
    /// Arithmetic genus of the glued curve equals `g`.
    pub const C4: &str = "C4";
    pub const LEGS: &str = "legs";
    pub const SMALL: &str = "small";
}

/// Checks the profile data and the constraints tying it to `ctx`.
///
/// Never panics: dangling references are reported as `structural`
/// violations and the remaining checks run on whatever is well-formed.
pub fn validate_profile(profile: &TopologicalProfile, ctx: &EnumerationContext) -> ValidationReport {
    let mut report = ValidationReport::new();

    // Structural well-formedness.
    let mut ids: HashSet<&str> = HashSet::new();
    for id in profile
        .p_vertices
        .iter()
        .map(|v| v.id.as_str())
        .chain(profile.f_vertices.iter().map(|v| v.id.as_str()))
    {
        if !ids.insert(id) {
            report.push(tags::STRUCTURAL, format!("vertex id {id:?} is used twice"));
        }
    }
    let mut edge_ids: HashSet<&str> = HashSet::new();
    for e in &profile.edges {
        if !edge_ids.insert(e.id.as_str()) {
            report.push(tags::STRUCTURAL, format!("edge id {:?} is used twice", e.id));
        }
    }
    let p_index: HashMap<&str, usize> = profile
        .p_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();
    let np = profile.p_vertices.len();
    let f_index: HashMap<&str, usize> = profile
        .f_vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), np + i))
        .collect();
    let mut resolved = Vec::with_capacity(profile.edges.len());
    for e in &profile.edges {
        match (p_index.get(e.p.as_str()), f_index.get(e.f.as_str())) {
            (Some(&a), Some(&b)) => resolved.push((a, b, e.mu)),
            (a, b) => {
                let mut missing = Vec::new();
                if a.is_none() {
                    missing.push(format!("P-endpoint {:?}", e.p));
                }
                if b.is_none() {
                    missing.push(format!("F-endpoint {:?}", e.f));
                }
                report.push(
                    tags::STRUCTURAL,
                    format!("edge {:?} has no {}", e.id, missing.join(" and no ")),
                );
            }
        }
    }

    // D1: connectedness.
    let nv = profile.vertex_count();
    if nv == 0 {
        report.push(tags::D1, "the multigraph has no vertices");
    } else {
        let mut dsu = DisjointSet::new(nv);
        for &(a, b, _) in &resolved {
            dsu.union(a, b);
        }
        let components = dsu.component_count();
        if components > 1 {
            report.push(
                tags::D1,
                format!("the multigraph has {components} connected components"),
            );
        }
    }

    // D3, D4.
    for e in &profile.edges {
        if e.mu == 0 {
            report.push(tags::D3, format!("edge {:?} has weight 0", e.id));
        }
    }
    for v in &profile.p_vertices {
        if v.deg == 0 {
            report.push(tags::D4, format!("P-vertex {:?} has degree 0", v.id));
        }
    }
    for v in &profile.f_vertices {
        if v.df != v.e && v.df != v.e + 1 {
            report.push(
                tags::D4,
                format!("F-vertex {:?} has df = {} outside {{e, e+1}} = {{{}, {}}}", v.id, v.df, v.e, v.e + 1),
            );
        }
    }

    // C1.
    let sum_deg: u64 = profile.p_vertices.iter().map(|v| u64::from(v.deg)).sum();
    let sum_e: u64 = profile.f_vertices.iter().map(|v| u64::from(v.e)).sum();
    let sum_df: u64 = profile.f_vertices.iter().map(|v| u64::from(v.df)).sum();
    if sum_deg != sum_e {
        report.push(tags::C1, format!("Σ deg = {sum_deg} but Σ e = {sum_e}"));
    }
    if sum_df != u64::from(ctx.d()) {
        report.push(tags::C1, format!("Σ df = {sum_df} but d = {}", ctx.d()));
    }

    // C2.
    let mut weight = vec![0u64; nv];
    for &(a, b, mu) in &resolved {
        weight[a] += u64::from(mu);
        weight[b] += u64::from(mu);
    }
    for (i, v) in profile.p_vertices.iter().enumerate() {
        if weight[i] != u64::from(v.deg) {
            report.push(
                tags::C2,
                format!("P-vertex {:?}: incident weights sum to {} ≠ deg {}", v.id, weight[i], v.deg),
            );
        }
    }
    for (i, v) in profile.f_vertices.iter().enumerate() {
        if weight[np + i] != u64::from(v.e) {
            report.push(
                tags::C2,
                format!("F-vertex {:?}: incident weights sum to {} ≠ e {}", v.id, weight[np + i], v.e),
            );
        }
    }

    // C3.
    for v in &profile.p_vertices {
        let bound = choose2(i64::from(v.deg) - 1);
        if i64::from(v.genus) > bound {
            report.push(
                tags::C3,
                format!("P-vertex {:?}: genus {} > C({}, 2) = {bound}", v.id, v.genus, i64::from(v.deg) - 1),
            );
        }
    }

    // C4.
    let genus = profile.arithmetic_genus();
    if genus != i64::from(ctx.g()) {
        report.push(
            tags::C4,
            format!("Σ g(v) − |V| + |E| + 1 = {genus} but g = {}", ctx.g()),
        );
    }

    // Leg assignment.
    let n = ctx.n();
    let mut owners = vec![0usize; n];
    let all_legs = profile
        .p_vertices
        .iter()
        .flat_map(|v| v.legs.iter().map(move |&l| (v.id.as_str(), l)))
        .chain(
            profile
                .f_vertices
                .iter()
                .flat_map(|v| v.legs.iter().map(move |&l| (v.id.as_str(), l))),
        );
    for (id, leg) in all_legs {
        if leg == 0 || leg > n {
            report.push(tags::LEGS, format!("vertex {id:?} carries leg {leg} outside 1..={n}"));
        } else {
            owners[leg - 1] += 1;
        }
    }
    for (i, &count) in owners.iter().enumerate() {
        match count {
            1 => {}
            0 => report.push(tags::LEGS, format!("leg {} is not assigned", i + 1)),
            c => report.push(tags::LEGS, format!("leg {} is assigned {c} times", i + 1)),
        }
    }

    report
}

/// Every reason `profile` fails to be a small profile of `ctx`, including
/// ordinary validation failures.
///
/// Beyond height one, genus-zero F-side and legs covering exactly the
/// F-vertices (one leg per non-distinguished F-vertex), the tangency data
/// must match `m`: a non-distinguished F-vertex is a fiber with
/// `e = df = m_leg` hanging off a single edge, and the legs at the
/// distinguished vertex `κ` have multiplicities summing to `df(κ)`.
pub fn smallness_report(profile: &TopologicalProfile, ctx: &EnumerationContext) -> ValidationReport {
    let mut report = validate_profile(profile, ctx);
    if !report.ok {
        return report;
    }
    let height = profile.height();
    if height != 1 {
        report.push(tags::SMALL, format!("height is {height}, not 1"));
    }
    for v in &profile.p_vertices {
        if !v.legs.is_empty() {
            report.push(tags::SMALL, format!("P-vertex {:?} carries legs", v.id));
        }
    }
    for v in &profile.f_vertices {
        if v.genus != 0 {
            report.push(tags::SMALL, format!("F-vertex {:?} has genus {}", v.id, v.genus));
        }
        if v.legs.is_empty() {
            report.push(tags::SMALL, format!("F-vertex {:?} carries no leg", v.id));
        }
        let leg_sum: u64 = v
            .legs
            .iter()
            .filter_map(|&l| ctx.m().of_leg(l))
            .map(u64::from)
            .sum();
        if v.df == v.e {
            if v.legs.len() != 1 {
                report.push(
                    tags::SMALL,
                    format!("fiber vertex {:?} carries {} legs, expected one", v.id, v.legs.len()),
                );
            }
            let degree = profile.incident(&v.id).count();
            if degree != 1 {
                report.push(
                    tags::SMALL,
                    format!("fiber vertex {:?} has {degree} edges, expected one", v.id),
                );
            }
        }
        if leg_sum != u64::from(v.df) {
            report.push(
                tags::SMALL,
                format!("F-vertex {:?}: leg multiplicities sum to {leg_sum} ≠ df {}", v.id, v.df),
            );
        }
    }
    report
}

/// Whether `profile` is a valid small profile of `ctx`.
pub fn is_small(profile: &TopologicalProfile, ctx: &EnumerationContext) -> bool {
    smallness_report(profile, ctx).ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{FVertex, PVertex, WeightedEdge};

    fn ctx() -> EnumerationContext {
        EnumerationContext::new(4, 1, vec![2, 1, 1]).unwrap()
    }

    fn single(genus: u32, mu: u32) -> TopologicalProfile {
        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(3, genus);
        let k = b.f_vertex(3, 4, &[1, 2, 3]);
        b.edge(&p, &k, mu);
        b.build()
    }

    #[test]
    fn accepts_the_single_vertex_profile() {
        let report = validate_profile(&single(1, 3), &ctx());
        assert!(report.ok, "{report}");
        assert!(is_small(&single(1, 3), &ctx()));
    }

    #[test]
    fn genus_bound_boundary() {
        let report = validate_profile(&single(2, 3), &ctx());
        assert!(report.has_tag(tags::C3), "{report}");
    }

    #[test]
    fn weight_mismatch_hits_both_endpoints() {
        let report = validate_profile(&single(1, 2), &ctx());
        assert_eq!(report.count_tag(tags::C2), 2, "{report}");
        assert!(!report.has_tag(tags::C1));
    }

    #[test]
    fn dangling_edge_is_structural() {
        let mut profile = single(1, 3);
        profile.edges.push(WeightedEdge {
            id: "ghost".into(),
            p: "nowhere".into(),
            f: "f0".into(),
            mu: 1,
        });
        let report = validate_profile(&profile, &ctx());
        assert!(report.has_tag(tags::STRUCTURAL));
        // The dangling edge is still counted towards |E| in (C4).
        assert!(report.has_tag(tags::C4));
    }

    #[test]
    fn disconnected_profile() {
        let mut profile = single(1, 3);
        profile.p_vertices.push(PVertex {
            id: "lonely".into(),
            deg: 1,
            genus: 0,
            legs: vec![],
        });
        let report = validate_profile(&profile, &ctx());
        assert!(report.has_tag(tags::D1));
        assert!(report.has_tag(tags::C2));
    }

    #[test]
    fn legs_must_be_a_bijection() {
        let mut profile = single(1, 3);
        profile.f_vertices[0].legs = vec![1, 1, 5];
        let report = validate_profile(&profile, &ctx());
        assert_eq!(report.count_tag(tags::LEGS), 4, "{report}");
    }

    #[test]
    fn height_zero_is_not_small() {
        let ctx = EnumerationContext::new(2, 0, vec![2]).unwrap();
        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(2, 0);
        let f = b.f_vertex(2, 2, &[1]);
        b.edge(&p, &f, 2);
        let profile = b.build();
        assert!(validate_profile(&profile, &ctx).ok);
        assert!(smallness_report(&profile, &ctx).has_tag(tags::SMALL));
        assert!(!is_small(&profile, &ctx));
    }

    #[test]
    fn legs_on_the_plane_side_are_not_small() {
        let ctx = EnumerationContext::new(3, 0, vec![2, 1]).unwrap();
        let profile = TopologicalProfile {
            p_vertices: vec![PVertex {
                id: "p".into(),
                deg: 2,
                genus: 0,
                legs: vec![2],
            }],
            f_vertices: vec![FVertex {
                id: "k".into(),
                e: 2,
                df: 3,
                genus: 0,
                legs: vec![1],
            }],
            edges: vec![WeightedEdge {
                id: "e".into(),
                p: "p".into(),
                f: "k".into(),
                mu: 2,
            }],
        };
        assert!(validate_profile(&profile, &ctx).ok);
        let report = smallness_report(&profile, &ctx);
        assert!(report.has_tag(tags::SMALL), "{report}");
    }
}
