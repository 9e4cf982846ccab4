//! Exhaustive verification sweeps, reported as [`SuiteReport`]s.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::choose2;
use crate::curve::{cross_ratio, cross_ratio_check, extra_critical_point, verify_example, LinePoint, Mobius};
use crate::identities::{
    cycle_rank_identity, dimension_report, find_multiplicity_one_profile, h0_profile_dimension,
    uc_condition, ud_automatic_check,
};
use crate::landscape::{
    applications, build_landscape, enumerate_small_profiles, reduce_to_core, LandscapeGraph, OpError,
    OpWitness,
};
use crate::partition::{compositions, graph_geq, graph_leq, graph_p};
use crate::profile::{is_small, EnumerationContext, LegSymmetry, TopologicalProfile};
use crate::report::{SuiteReport, ValidationReport};

/// Largest degree accepted by the landscape and identity sweeps.
pub const MAX_DEGREE: u32 = 8;
/// Largest `n` accepted by the partition sweeps.
pub const MAX_N: u32 = 14;

/// Every context with `2 ≤ d ≤ dmax`, every genus `0..=C(d−1, 2)` and every
/// composition `m` of `d`.
pub fn all_contexts(dmax: u32, legs: LegSymmetry) -> Vec<EnumerationContext> {
    let mut out = Vec::new();
    for d in 2..=dmax {
        for m in compositions(d) {
            for g in 0..=choose2(i64::from(d) - 1) as u32 {
                let ctx = EnumerationContext::new(d, g, m.clone()).expect("valid by construction");
                out.push(ctx.with_leg_symmetry(legs));
            }
        }
    }
    out
}

fn outcome(report: &ValidationReport) -> Result<(), String> {
    if report.ok {
        Ok(())
    } else {
        Err(report.to_string())
    }
}

/// Everything checked about one context's landscape.
#[derive(Debug, Clone, Serialize)]
pub struct ContextAudit {
    pub context: String,
    pub nodes: usize,
    pub edges: usize,
    /// Connectivity verdict, or why it could not be decided; a certificate
    /// that fails verification is an error.
    pub connected: Result<bool, String>,
    /// Number of rewrite applications examined.
    pub applications: usize,
    /// Closure, smallness and genus formula after every rewrite, plus the
    /// merge inequalities.
    pub rewrites: ValidationReport,
    pub sublandscape: ValidationReport,
    pub reductions: ValidationReport,
    /// The multiplicity-one dimension count and existence.
    pub multiplicity_one: ValidationReport,
}

/// Builds the landscape of `ctx` and runs every per-context check on it.
pub fn audit_context(ctx: &EnumerationContext) -> ContextAudit {
    let mut audit = ContextAudit {
        context: ctx.to_string(),
        nodes: 0,
        edges: 0,
        connected: Err("not built".into()),
        applications: 0,
        rewrites: ValidationReport::new(),
        sublandscape: ValidationReport::new(),
        reductions: ValidationReport::new(),
        multiplicity_one: ValidationReport::new(),
    };
    let graph = match build_landscape(ctx) {
        Ok(graph) => graph,
        Err(e) => {
            audit.connected = Err(e.to_string());
            audit.rewrites.push("closure", e.to_string());
            return audit;
        }
    };
    audit.nodes = graph.node_count();
    audit.edges = graph.edge_count();
    audit.connected = match graph.connectivity() {
        Ok(c) if graph.verify_certificate(&c.certificate) || !c.connected => Ok(c.connected),
        Ok(_) => Err("certificate does not verify".into()),
        Err(e) => Err(e.to_string()),
    };
    audit.applications = audit_rewrites(&graph, &mut audit.rewrites);
    audit.sublandscape = graph.sublandscape_report();
    audit.reductions = audit_reductions(&graph);
    audit.multiplicity_one = audit_multiplicity_one(ctx, graph.nodes.iter().map(|n| &n.profile));
    audit
}

/// Applies every rewrite to every node and checks the result; returns the
/// number of applications examined.
pub fn audit_rewrites(graph: &LandscapeGraph, report: &mut ValidationReport) -> usize {
    let ctx = &graph.context;
    let g = i64::from(ctx.g());
    let mut count = 0;
    for node in &graph.nodes {
        let p = &node.profile;
        for witness in applications(p) {
            count += 1;
            let result = witness.apply(p);
            if let OpWitness::UpperConnected { v, e1, e2 } = &witness {
                let vertex = p.p_vertex(v).expect("witness vertex");
                let (a, b) = (p.edge(e1).expect("edge").mu, p.edge(e2).expect("edge").mu);
                let deg = i64::from(vertex.deg);
                let independent =
                    i64::from(vertex.genus) + i64::from(a.min(b)) <= (deg - 1) * (deg - 2) / 2;
                let shared = uc_condition(vertex.deg, vertex.genus, a, b);
                let applied = !matches!(result, Err(OpError::Inadmissible(_)));
                if independent != shared || shared != applied {
                    report.push(
                        "uc",
                        format!("{witness} on {}: formula {independent}, predicate {shared}, applied {applied}", node.key),
                    );
                }
            }
            if let OpWitness::UpperDisconnected { v1, v2, e1, e2 } = &witness {
                let (a, b) = (p.p_vertex(v1).expect("vertex"), p.p_vertex(v2).expect("vertex"));
                let (m1, m2) = (p.edge(e1).expect("edge").mu, p.edge(e2).expect("edge").mu);
                if ud_automatic_check(a.deg, a.genus, b.deg, b.genus, m1, m2) != Ok(true) {
                    report.push("ud", format!("{witness} on {}", node.key));
                }
            }
            let result = match result {
                Ok(result) => result,
                Err(OpError::Inadmissible(_)) => continue,
                Err(e) => {
                    report.push("domain", format!("{witness} on {}: {e}", node.key));
                    continue;
                }
            };
            if !is_small(&result, ctx) {
                report.push("small", format!("{witness} on {} leaves the small profiles", node.key));
            }
            if result.arithmetic_genus() != g {
                report.push(
                    "genus",
                    format!("{witness} on {} gives genus {}", node.key, result.arithmetic_genus()),
                );
            }
            let key = ctx.canonical_key(&result);
            if key == node.key {
                report.push("identity", format!("{witness} fixes {}", node.key));
            }
            match graph.index_of(&key) {
                None => report.push("closure", format!("{witness} on {} gives {key}", node.key)),
                Some(j) => {
                    let i = graph.index_of(&node.key).expect("node indexed");
                    if !graph.has_edge(i, j) {
                        report.push("edge", format!("{} – {key} is missing", node.key));
                    }
                }
            }
        }
    }
    count
}

/// Reduces every node and checks length `|V| − 2` and that each step is a
/// landscape edge.
pub fn audit_reductions(graph: &LandscapeGraph) -> ValidationReport {
    let mut report = ValidationReport::new();
    for node in &graph.nodes {
        match reduce_to_core(&node.profile, &graph.context) {
            Err(e) => report.push("reduce", format!("{}: {e}", node.key)),
            Ok(path) => {
                let expected = node.profile.vertex_count() - 2;
                if path.len() != expected {
                    report.push("length", format!("{}: {} steps, expected {expected}", node.key, path.len()));
                }
                for step in &path.steps {
                    let ends = (graph.index_of(&step.from), graph.index_of(&step.to));
                    let ok = matches!(ends, (Some(i), Some(j)) if graph.has_edge(i, j));
                    if !ok {
                        report.push("walk", format!("{} → {} is not an edge", step.from, step.to));
                    }
                }
            }
        }
    }
    report
}

/// `h⁰ = 2d + g` on every qualifying profile, and existence of one.
pub fn audit_multiplicity_one<'a>(
    ctx: &EnumerationContext,
    profiles: impl Iterator<Item = &'a TopologicalProfile>,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let expected = 2 * u64::from(ctx.d()) + u64::from(ctx.g());
    for p in profiles.filter(|p| p.f_vertices.len() == 1 && p.edges.iter().all(|e| e.mu == 1)) {
        match h0_profile_dimension(p, ctx) {
            Ok(h0) if h0 == expected => {}
            Ok(h0) => report.push("h0", format!("{h0} ≠ {expected}")),
            Err(e) => report.push("h0", e.to_string()),
        }
    }
    if let Err(e) = find_multiplicity_one_profile(ctx) {
        report.push("exists", e.to_string());
    }
    report
}

/// Merge-graph connectivity for `n ≤ nmax`, the single-vertex graphs for
/// `d − 1 ≤ nmax`, and the one-node property at degree 3.
pub fn lemmas_suite(nmax: u32) -> SuiteReport {
    let mut suite = SuiteReport::new("lemmas");
    for n in 1..=nmax {
        for k in -i64::from(n)..=i64::from(n) {
            let connected = graph_geq(n, k).is_connected().map_err(|e| e.to_string());
            suite.record(format!("geq({n},{k})"), expect_true(connected));
        }
    }
    for n in 3..=nmax {
        for k in 1..i64::from(n) {
            let connected = graph_leq(n, k).is_connected().map_err(|e| e.to_string());
            suite.record(format!("leq({n},{k})"), expect_true(connected));
        }
    }
    for d in 2..=nmax + 1 {
        for g in 0..=choose2(i64::from(d) - 1) as u32 {
            let graph = graph_p(d, g);
            let connected = graph.is_connected().map_err(|e| e.to_string());
            suite.record(format!("P({d},{g})"), expect_true(connected));
        }
    }
    for g in 0..=1 {
        let nodes = graph_p(3, g).node_count();
        suite.record(
            format!("P(3,{g}) single node"),
            if nodes == 1 { Ok(()) } else { Err(format!("{nodes} nodes")) },
        );
    }
    suite
}

fn expect_true(verdict: Result<bool, String>) -> Result<(), String> {
    match verdict {
        Ok(true) => Ok(()),
        Ok(false) => Err("disconnected".into()),
        Err(e) => Err(e),
    }
}

/// Every composition with sum at most `total`, the cycle-rank identity
/// holding on each.
pub fn cycle_rank_sweep(total: u32) -> ValidationReport {
    let mut report = ValidationReport::new();
    for n in 1..=total {
        for mu in compositions(n) {
            let check = cycle_rank_identity(&mu);
            if !check.holds() {
                report.push("cycle", format!("{mu:?}: {} ≠ {}", check.lhs, check.rhs));
            }
        }
    }
    report
}

/// The automatic merge bound over every admissible tuple with
/// `d1, d2 ≤ dmax`; returns the number of tuples checked.
pub fn ud_sweep(dmax: u32) -> (usize, ValidationReport) {
    let pairs: Vec<(u32, u32)> = (1..=dmax).flat_map(|a| (1..=dmax).map(move |b| (a, b))).collect();
    let results: Vec<(usize, ValidationReport)> = pairs
        .par_iter()
        .map(|&(d1, d2)| {
            let mut report = ValidationReport::new();
            let mut count = 0;
            for g1 in 0..=choose2(i64::from(d1) - 1) as u32 {
                for g2 in 0..=choose2(i64::from(d2) - 1) as u32 {
                    for mu1 in 1..=d1 {
                        for mu2 in 1..=d2 {
                            count += 1;
                            if ud_automatic_check(d1, g1, d2, g2, mu1, mu2) != Ok(true) {
                                report.push("ud", format!("({d1},{g1},{d2},{g2},{mu1},{mu2})"));
                            }
                        }
                    }
                }
            }
            (count, report)
        })
        .collect();
    results.into_iter().fold((0, ValidationReport::new()), |(n, mut acc), (c, r)| {
        acc.extend(r);
        (n + c, acc)
    })
}

/// Dimension reports, the cycle-rank and merge-bound sweeps, and the
/// multiplicity-one count over every context with `d ≤ dmax`.
pub fn identities_suite(dmax: u32) -> SuiteReport {
    let mut suite = SuiteReport::new("identities");
    for d in 1..=dmax {
        for g in 0..=choose2(i64::from(d) - 1) as u32 {
            let result = dimension_report(d, g, 0).map_err(|e| e.to_string()).and_then(|r| {
                let ok = r.vdim == 2 * i64::from(d) + i64::from(g) - 1
                    && r.tangent_deg == 2 * i64::from(g) - 2 + 2 * i64::from(d)
                    && r.node_count >= 0;
                ok.then_some(()).ok_or_else(|| format!("{r:?}"))
            });
            suite.record(format!("dimension({d},{g})"), result);
        }
    }
    suite.record("cycle-rank(≤15)", outcome(&cycle_rank_sweep(15)));
    suite.record("ud-bound(≤15)", outcome(&ud_sweep(15).1));
    let contexts = all_contexts(dmax, LegSymmetry::Multiplicity);
    let reports: Vec<(String, ValidationReport)> = contexts
        .par_iter()
        .map(|ctx| {
            let profiles = enumerate_small_profiles(ctx);
            (format!("h0{ctx}"), audit_multiplicity_one(ctx, profiles.iter()))
        })
        .collect();
    for (case, report) in reports {
        suite.record(case, outcome(&report));
    }
    suite
}

/// Every per-context landscape check for `d ≤ dmax`, plus connectivity with
/// labeled legs for `d ≤ min(dmax, 6)`.
pub fn landscape_suite(dmax: u32) -> SuiteReport {
    let mut suite = SuiteReport::new("landscape");
    let contexts = all_contexts(dmax, LegSymmetry::Multiplicity);
    let audits: Vec<ContextAudit> = contexts.par_iter().map(audit_context).collect();
    for a in audits {
        suite.record(format!("connected{}", a.context), expect_true(a.connected.clone()));
        suite.record(format!("rewrites{}", a.context), outcome(&a.rewrites));
        suite.record(format!("sublandscape{}", a.context), outcome(&a.sublandscape));
        suite.record(format!("reduce{}", a.context), outcome(&a.reductions));
    }
    let labeled = all_contexts(dmax.min(6), LegSymmetry::Labeled);
    let verdicts: Vec<(String, Result<(), String>)> = labeled
        .par_iter()
        .map(|ctx| {
            let verdict = build_landscape(ctx)
                .map_err(|e| e.to_string())
                .and_then(|g| g.connectivity().map_err(|e| e.to_string()))
                .map(|c| c.connected);
            (format!("labeled{ctx}"), expect_true(verdict))
        })
        .collect();
    for (case, result) in verdicts {
        suite.record(case, result);
    }
    suite
}

/// `count` random Möbius maps, each checked to preserve the cross-ratio
/// of the four ramification points within `tol`.
pub fn mobius_invariance(count: usize, tol: f64, seed: u64) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut done = 0;
    while done < count {
        let map = Mobius {
            a: random(&mut rng),
            b: random(&mut rng),
            c: random(&mut rng),
            d: random(&mut rng),
        };
        if map.determinant().norm() < 0.1 {
            continue;
        }
        done += 1;
        let (mu1, mu2) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let z = extra_critical_point(mu1, mu2);
        let points = [
            LinePoint::infinity(),
            LinePoint::finite(Complex64::new(z, 0.0)),
            LinePoint::finite(Complex64::new(0.0, 0.0)),
            LinePoint::finite(Complex64::new(1.0, 0.0)),
        ];
        let before = cross_ratio(points);
        let after = cross_ratio(points.map(|p| map.apply(p)));
        if (before - after).norm() > tol {
            report.push("mobius", format!("({mu1},{mu2}) under {map:?}: {before} vs {after}"));
        }
    }
    report
}

/// The curve checks for `3 ≤ d ≤ dmax`, the cross-ratios for weights up to
/// 6 and Möbius invariance.
pub fn curve_suite(dmax: u32, tol: f64, seed: u64) -> SuiteReport {
    let mut suite = SuiteReport::new("curve");
    for d in 3..=dmax.min(10) {
        let result = match verify_example(d, tol, seed) {
            Ok(r) if r.ok => Ok(()),
            Ok(r) => Err(format!(
                "{} nodes, {} boundary points, margin {:e}, {:?}",
                r.nodes.len(),
                r.boundary.len(),
                r.immersion_margin,
                r.ambiguities
            )),
            Err(e) => Err(e.to_string()),
        };
        suite.record(format!("example(d={d})"), result);
    }
    for mu1 in 1..=6 {
        for mu2 in 1..=6 {
            suite.record(
                format!("cross-ratio({mu1},{mu2})"),
                cross_ratio_check(mu1, mu2).map(|_| ()).map_err(|e| e.to_string()),
            );
        }
    }
    suite.record("mobius", outcome(&mobius_invariance(100, 1e-9, seed)));
    suite
}

/// Which suites to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Lemmas,
    Identities,
    Landscape,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub dmax: u32,
    pub nmax: u32,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            dmax: 7,
            nmax: 12,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// Runs `suite`; `All` folds every suite into one report named `all`.
pub fn run_suite(suite: Suite, options: &SuiteOptions) -> SuiteReport {
    let curve_dmax = options.dmax.max(3);
    match suite {
        Suite::Lemmas => lemmas_suite(options.nmax),
        Suite::Identities => identities_suite(options.dmax),
        Suite::Landscape => landscape_suite(options.dmax),
        Suite::Curve => curve_suite(curve_dmax, options.tol, options.seed),
        Suite::All => {
            let mut all = SuiteReport::new("all");
            all.absorb(lemmas_suite(options.nmax));
            all.absorb(identities_suite(options.dmax));
            all.absorb(landscape_suite(options.dmax));
            all.absorb(curve_suite(curve_dmax, options.tol, options.seed));
            all
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_counts() {
        // d = 2: m ∈ {(2), (1,1)}, g = 0. d = 3: four compositions, g ∈ {0, 1}.
        assert_eq!(all_contexts(2, LegSymmetry::Multiplicity).len(), 2);
        assert_eq!(all_contexts(3, LegSymmetry::Multiplicity).len(), 2 + 8);
    }

    #[test]
    fn quartic_211_audit() {
        let ctx = EnumerationContext::new(4, 1, vec![2, 1, 1]).unwrap();
        let audit = audit_context(&ctx);
        assert_eq!((audit.nodes, audit.edges), (7, 7));
        assert_eq!(audit.connected, Ok(true));
        assert!(audit.rewrites.ok, "{}", audit.rewrites);
        assert!(audit.sublandscape.ok && audit.reductions.ok && audit.multiplicity_one.ok);
        assert!(audit.applications >= audit.edges);
    }

    #[test]
    fn small_suites_pass() {
        let options = SuiteOptions { dmax: 4, nmax: 5, ..SuiteOptions::default() };
        for suite in [Suite::Lemmas, Suite::Landscape, Suite::Curve] {
            let report = run_suite(suite, &options);
            assert!(report.passed(), "{:?}", report.failures);
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn sweeps() {
        assert!(cycle_rank_sweep(8).ok);
        let (count, report) = ud_sweep(4);
        assert!(report.ok);
        // Σ_{d ≤ 4} (C(d−1,2) + 1)·d = 1 + 2 + 6 + 16 = 25 per side.
        assert_eq!(count, 25 * 25);
        assert!(mobius_invariance(20, 1e-9, 3).ok);
    }
}
