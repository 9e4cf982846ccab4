//! Acceptance criteria, one line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so that every criterion is
//! reported even when an earlier one fails; the process exits nonzero if
//! any criterion fails or overruns its time budget.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use severi_landscape::choose2;
use severi_landscape::curve::{cross_ratio_check, verify_example};
use severi_landscape::landscape::{enumerate_small_profiles, landscape_connected};
use severi_landscape::partition::{graph_geq, graph_leq, graph_p, Partition};
use severi_landscape::verify::{all_contexts, audit_context, cycle_rank_sweep, mobius_invariance, ud_sweep, ContextAudit};
use severi_landscape::{EnumerationContext, LegSymmetry};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: Box<dyn Fn(&Shared) -> Outcome>,
}

/// The d ≤ 7 landscape sweep is shared by several criteria and computed
/// once; its time is charged to criterion 3.
struct Shared {
    audits: std::cell::OnceCell<(Vec<ContextAudit>, Duration)>,
}

impl Shared {
    fn audits(&self) -> &(Vec<ContextAudit>, Duration) {
        self.audits.get_or_init(|| {
            let start = Instant::now();
            let contexts = all_contexts(7, LegSymmetry::Multiplicity);
            let audits = contexts.par_iter().map(audit_context).collect();
            (audits, start.elapsed())
        })
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec())
}

fn quartic_landscape(_: &Shared) -> Outcome {
    let ctx = EnumerationContext::new(4, 1, vec![2, 1, 1]).map_err(|e| e.to_string())?;
    let count = enumerate_small_profiles(&ctx).len();
    ensure(count == 7, || format!("{count} classes"))?;
    let conn = landscape_connected(&ctx).map_err(|e| e.to_string())?;
    ensure(conn.connected, || "landscape is disconnected".into())?;
    Ok("7 classes, connected".into())
}

fn quintic_partition_graph(_: &Shared) -> Outcome {
    let graph = graph_p(5, 3);
    ensure(graph.node_count() == 5, || format!("{} nodes", graph.node_count()))?;
    let expected: BTreeSet<(Partition, Partition)> = [
        (p(&[1, 1, 1, 1]), p(&[2, 1, 1])),
        (p(&[2, 1, 1]), p(&[3, 1])),
        (p(&[2, 1, 1]), p(&[2, 2])),
        (p(&[3, 1]), p(&[4])),
    ]
    .into_iter()
    .collect();
    let actual: BTreeSet<(Partition, Partition)> = graph
        .edges
        .iter()
        .map(|e| (graph.nodes[e.from].clone(), graph.nodes[e.to].clone()))
        .collect();
    ensure(actual == expected, || format!("edges {actual:?}"))?;
    ensure(!graph.has_edge(&p(&[2, 2]), &p(&[4])), || "(22)-(4) present".into())?;
    // The rejected merge fails because 2 > C(3,2) − 3 + 2 − 1 = 1.
    let bound = choose2(3) - 3 + 2 - 1;
    ensure(bound == 1 && 2 > bound, || format!("bound {bound}"))?;
    Ok("5 nodes, 4 edges, (22)-(4) rejected".into())
}

fn connectivity_sweep(shared: &Shared) -> Outcome {
    let (audits, elapsed) = shared.audits();
    let bad: Vec<String> = audits
        .iter()
        .filter(|a| a.connected != Ok(true))
        .map(|a| format!("{}: {:?}", a.context, a.connected))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let nodes: usize = audits.iter().map(|a| a.nodes).sum();
    ensure(*elapsed < Duration::from_secs(600), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("{} contexts, {nodes} profiles, all connected", audits.len()))
}

fn partition_merge_graphs(_: &Shared) -> Outcome {
    let mut cases = 0;
    for n in 1..=12u32 {
        for k in -i64::from(n)..=i64::from(n) {
            cases += 1;
            let verdict = graph_geq(n, k).is_connected();
            ensure(verdict == Ok(true), || format!("geq({n},{k}): {verdict:?}"))?;
        }
    }
    for n in 3..=12u32 {
        for k in 1..i64::from(n) {
            cases += 1;
            let verdict = graph_leq(n, k).is_connected();
            ensure(verdict == Ok(true), || format!("leq({n},{k}): {verdict:?}"))?;
        }
    }
    Ok(format!("{cases} graphs connected"))
}

fn degree_three(_: &Shared) -> Outcome {
    for g in 0..=1 {
        let nodes = graph_p(3, g).nodes;
        ensure(nodes.len() == 1, || format!("g={g}: {nodes:?}"))?;
    }
    Ok("one node for g = 0, 1".into())
}

fn cycle_rank(_: &Shared) -> Outcome {
    let report = cycle_rank_sweep(15);
    ensure(report.ok, || report.to_string())?;
    Ok(format!("{} compositions", (1u32 << 15) - 1))
}

fn ud_bound(_: &Shared) -> Outcome {
    let (count, report) = ud_sweep(15);
    ensure(report.ok, || report.to_string())?;
    Ok(format!("{count} tuples"))
}

fn multiplicity_one(shared: &Shared) -> Outcome {
    let (audits, _) = shared.audits();
    let bad: Vec<String> = audits
        .iter()
        .filter(|a| !a.multiplicity_one.ok)
        .map(|a| format!("{}: {}", a.context, a.multiplicity_one))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} contexts", audits.len()))
}

fn closure(shared: &Shared) -> Outcome {
    let (audits, _) = shared.audits();
    let bad: Vec<String> = audits
        .iter()
        .filter(|a| !a.rewrites.ok)
        .map(|a| format!("{}: {}", a.context, a.rewrites))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    let applications: usize = audits.iter().map(|a| a.applications).sum();
    Ok(format!("{applications} rewrite applications"))
}

fn sublandscape(shared: &Shared) -> Outcome {
    let (audits, _) = shared.audits();
    let bad: Vec<String> = audits
        .iter()
        .filter(|a| !a.sublandscape.ok)
        .map(|a| format!("{}: {}", a.context, a.sublandscape))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok(format!("{} contexts", audits.len()))
}

fn example_curve(_: &Shared) -> Outcome {
    let expected = Complex64::new(1.0, 0.0);
    for d in 3..=8 {
        let r = verify_example(d, 1e-8, 0).map_err(|e| e.to_string())?;
        let nodes = r.nodes.len() as i64;
        ensure(nodes == choose2(i64::from(d) - 1), || format!("d={d}: {nodes} nodes"))?;
        ensure(r.ambiguities.is_empty(), || format!("d={d}: {:?}", r.ambiguities))?;
        ensure(r.boundary.len() == 1, || format!("d={d}: {} boundary points", r.boundary.len()))?;
        let [x, y, z] = r.boundary[0].coords();
        let off = (x - expected).norm().max((y - expected).norm()).max(z.norm());
        ensure(off < 1e-8, || format!("d={d}: boundary off by {off:e}"))?;
        ensure(r.immersion_margin > 1e-6, || format!("d={d}: margin {:e}", r.immersion_margin))?;
        ensure(r.ok, || format!("d={d}: report not ok"))?;
    }
    Ok("d = 3..8".into())
}

fn cross_ratios(_: &Shared) -> Outcome {
    for mu1 in 1..=6 {
        for mu2 in 1..=6 {
            let value = cross_ratio_check(mu1, mu2).map_err(|e| e.to_string())?;
            let expected = -f64::from(mu2) / f64::from(mu1);
            let dev = (value - expected).norm();
            ensure(dev <= 1e-12, || format!("({mu1},{mu2}): {dev:e}"))?;
        }
    }
    let report = mobius_invariance(100, 1e-9, 0);
    ensure(report.ok, || report.to_string())?;
    Ok("36 weight pairs, 100 Möbius maps".into())
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() -> ExitCode {
    let criteria = vec![
        Criterion { id: 1, name: "landscape of (4, 1, (2,1,1))", budget: secs(1), run: Box::new(quartic_landscape) },
        Criterion { id: 2, name: "partition graph of (5, 3)", budget: secs(1), run: Box::new(quintic_partition_graph) },
        Criterion { id: 3, name: "landscape connectivity, d <= 7", budget: secs(600), run: Box::new(connectivity_sweep) },
        Criterion { id: 4, name: "partition merge graphs, n <= 12", budget: secs(60), run: Box::new(partition_merge_graphs) },
        Criterion { id: 5, name: "degree 3 single partition", budget: None, run: Box::new(degree_three) },
        Criterion { id: 6, name: "cycle-rank identity, sum <= 15", budget: secs(60), run: Box::new(cycle_rank) },
        Criterion { id: 7, name: "automatic merge bound, d1, d2 <= 15", budget: secs(60), run: Box::new(ud_bound) },
        Criterion { id: 8, name: "multiplicity-one dimension count", budget: None, run: Box::new(multiplicity_one) },
        Criterion { id: 9, name: "rewrite closure and genus formula", budget: None, run: Box::new(closure) },
        Criterion { id: 10, name: "single-vertex sub-landscape", budget: None, run: Box::new(sublandscape) },
        Criterion { id: 11, name: "explicit rational curve", budget: secs(10), run: Box::new(example_curve) },
        Criterion { id: 12, name: "cross-ratio of ramification points", budget: secs(1), run: Box::new(cross_ratios) },
    ];
    let shared = Shared {
        audits: std::cell::OnceCell::new(),
    };
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)(&shared);
        let elapsed = start.elapsed();
        if let (Ok(_), Some(budget)) = (&outcome, c.budget) {
            if elapsed > budget {
                outcome = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {} ({elapsed:.2?}): {detail}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
