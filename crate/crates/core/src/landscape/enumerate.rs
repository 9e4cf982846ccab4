//! Enumeration of the small profiles of a context, one per isomorphism
//! class.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::choose2;
use crate::partition::{compositions, enumerate_partitions};
use crate::profile::{canonicalize, is_small, CanonicalKey, EnumerationContext, TopologicalProfile};

/// One P-vertex before genera are chosen: the fiber legs hanging off it and
/// the weights of its edges to `κ`.
#[derive(Debug, Clone)]
struct Hub {
    fibers: Vec<usize>,
    kappa_edges: Vec<u32>,
}

/// Every small profile of `ctx`, in canonical form and sorted by canonical
/// key.
///
/// A small profile is determined by the legs `S` at `κ` (so that
/// `df(κ) = Σ_S m` and `e(κ) = df(κ) − 1`), a grouping of the remaining
/// legs, each a fiber of weight `m_i`, onto P-vertices, the weights of the
/// edges from each P-vertex to `κ` (at least one per vertex, by
/// connectivity), and a choice of genera that the genus formula and the
/// per-vertex bound allow. All of these are generated and the results are
/// deduplicated by canonical key.
pub fn enumerate_small_profiles(ctx: &EnumerationContext) -> Vec<TopologicalProfile> {
    enumerate_with_keys(ctx).into_values().collect()
}

pub(crate) fn enumerate_with_keys(
    ctx: &EnumerationContext,
) -> BTreeMap<CanonicalKey, TopologicalProfile> {
    let n = ctx.n();
    let subsets: Vec<u32> = (1u32..1 << n).collect();
    subsets
        .par_iter()
        .map(|&mask| {
            let mut found = BTreeMap::new();
            for_leg_subset(ctx, mask, &mut found);
            found
        })
        .reduce(BTreeMap::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn for_leg_subset(
    ctx: &EnumerationContext,
    mask: u32,
    found: &mut BTreeMap<CanonicalKey, TopologicalProfile>,
) {
    let m = ctx.m().as_slice();
    let (at_kappa, fibers): (Vec<usize>, Vec<usize>) =
        (1..=m.len()).partition(|&leg| mask & (1 << (leg - 1)) != 0);
    let df_kappa: u32 = at_kappa.iter().map(|&l| m[l - 1]).sum();
    let weight = df_kappa - 1;
    if weight == 0 {
        return;
    }
    let classes = ctx.leg_classes();
    for blocks in set_partitions(&fibers) {
        // Every P-vertex needs at least one unit of weight towards κ.
        let Some(max_bare) = (weight as usize).checked_sub(blocks.len()) else {
            continue;
        };
        for bare in 0..=max_bare {
            let hubs = blocks.len() + bare;
            if hubs == 0 {
                continue;
            }
            for split in compositions(weight).into_iter().filter(|c| c.len() == hubs) {
                let choices: Vec<Vec<Vec<u32>>> = split
                    .iter()
                    .map(|&c| {
                        enumerate_partitions(c, 1, i64::from(c))
                            .into_iter()
                            .map(|p| p.parts().to_vec())
                            .collect()
                    })
                    .collect();
                for_each_product(&choices, &mut |kappa_edges| {
                    let layout: Vec<Hub> = (0..hubs)
                        .map(|i| Hub {
                            fibers: blocks.get(i).cloned().unwrap_or_default(),
                            kappa_edges: kappa_edges[i].clone(),
                        })
                        .collect();
                    for profile in with_genera(ctx, &at_kappa, df_kappa, &layout) {
                        if is_small(&profile, ctx) {
                            let (key, form) = canonicalize(&profile, &classes);
                            found.entry(key).or_insert(form);
                        }
                    }
                });
            }
        }
    }
}

/// All profiles with the given layout, over every admissible genus
/// distribution.
fn with_genera(
    ctx: &EnumerationContext,
    at_kappa: &[usize],
    df_kappa: u32,
    layout: &[Hub],
) -> Vec<TopologicalProfile> {
    let m = ctx.m().as_slice();
    let degrees: Vec<u32> = layout
        .iter()
        .map(|h| h.fibers.iter().map(|&l| m[l - 1]).sum::<u32>() + h.kappa_edges.iter().sum::<u32>())
        .collect();
    let kappa_edge_count: usize = layout.iter().map(|h| h.kappa_edges.len()).sum();
    // Genus formula with genus-zero F-side: Σ g(v) = g + |P| − #(edges to κ).
    let total = i64::from(ctx.g()) + layout.len() as i64 - kappa_edge_count as i64;
    let caps: Vec<i64> = degrees.iter().map(|&d| choose2(i64::from(d) - 1)).collect();
    if total < 0 || total > caps.iter().sum() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for genera in distributions(total, &caps) {
        let mut b = TopologicalProfile::builder();
        let kappa = b.f_vertex(df_kappa - 1, df_kappa, at_kappa);
        for (i, hub) in layout.iter().enumerate() {
            let p = b.p_vertex(degrees[i], genera[i] as u32);
            for &mu in &hub.kappa_edges {
                b.edge(&p, &kappa, mu);
            }
            for &leg in &hub.fibers {
                let mu = m[leg - 1];
                let f = b.f_vertex(mu, mu, &[leg]);
                b.edge(&p, &f, mu);
            }
        }
        out.push(b.build());
    }
    out
}

/// Ways to write `total` as an ordered sum of `caps.len()` integers with
/// `0 ≤ xᵢ ≤ capsᵢ`.
fn distributions(total: i64, caps: &[i64]) -> Vec<Vec<i64>> {
    fn go(rest: i64, caps: &[i64], acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        match caps.split_first() {
            None => {
                if rest == 0 {
                    out.push(acc.clone());
                }
            }
            Some((&cap, tail)) => {
                let room: i64 = tail.iter().sum();
                for x in (rest - room).max(0)..=cap.min(rest) {
                    acc.push(x);
                    go(rest - x, tail, acc, out);
                    acc.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(total, caps, &mut Vec::new(), &mut out);
    out
}

/// Set partitions of `items` into nonempty blocks (restricted growth
/// strings). The empty list has the single partition with no blocks.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(items: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, rest)) = items.split_first() else {
            out.push(blocks.clone());
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].push(first);
            go(rest, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![first]);
        go(rest, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(items, &mut Vec::new(), &mut out);
    out
}

fn for_each_product<T: Clone>(choices: &[Vec<T>], f: &mut impl FnMut(&[T])) {
    fn go<T: Clone>(choices: &[Vec<T>], acc: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        match choices.split_first() {
            None => f(acc),
            Some((head, tail)) => {
                for item in head {
                    acc.push(item.clone());
                    go(tail, acc, f);
                    acc.pop();
                }
            }
        }
    }
    go(choices, &mut Vec::new(), f);
}
