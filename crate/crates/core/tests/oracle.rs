//! Independent brute-force enumeration of small profiles, compared with the
//! library's enumerator and canonical keys.
//!
//! The oracle shares no code with the library beyond the input data: it
//! builds every weighted bipartite multigraph with the right vertex data,
//! tests the small-profile conditions itself, and identifies isomorphic
//! shapes by minimizing over all vertex permutations.

use std::collections::{BTreeMap, BTreeSet};

use severi_landscape::{EnumerationContext, LegSymmetry, TopologicalProfile};

/// A profile as plain data: P-vertices `(deg, genus)`, F-vertices
/// `(e, df, leg labels)` and, for every pair, the sorted edge weights.
#[derive(Clone, Debug)]
struct Shape {
    p: Vec<(u32, u32)>,
    f: Vec<(u32, u32, Vec<u32>)>,
    w: Vec<Vec<Vec<u32>>>,
}

type Code = (Vec<(u32, u32)>, Vec<(u32, u32, Vec<u32>)>, Vec<Vec<Vec<u32>>>);

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for i in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

impl Shape {
    fn code(&self) -> Code {
        let mut best: Option<Code> = None;
        for sp in permutations(self.p.len()) {
            for sf in permutations(self.f.len()) {
                let code = (
                    sp.iter().map(|&i| self.p[i]).collect(),
                    sf.iter().map(|&j| self.f[j].clone()).collect(),
                    sp.iter()
                        .map(|&i| sf.iter().map(|&j| self.w[i][j].clone()).collect())
                        .collect(),
                );
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            }
        }
        best.unwrap()
    }

    #[allow(clippy::needless_range_loop)]
    fn connected(&self) -> bool {
        let (np, nf) = (self.p.len(), self.f.len());
        let mut seen = vec![false; np + nf];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in 0..np + nf {
                let adjacent = match (v < np, u < np) {
                    (true, false) => !self.w[v][u - np].is_empty(),
                    (false, true) => !self.w[u][v - np].is_empty(),
                    _ => false,
                };
                if adjacent && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

fn from_profile(profile: &TopologicalProfile, ctx: &EnumerationContext, labeled: bool) -> Shape {
    let label = |leg: usize| {
        if labeled {
            leg as u32
        } else {
            ctx.m().of_leg(leg).unwrap()
        }
    };
    let p_index: BTreeMap<&str, usize> =
        profile.p_vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let f_index: BTreeMap<&str, usize> =
        profile.f_vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let mut w = vec![vec![Vec::new(); profile.f_vertices.len()]; profile.p_vertices.len()];
    for e in &profile.edges {
        w[p_index[e.p.as_str()]][f_index[e.f.as_str()]].push(e.mu);
    }
    for row in &mut w {
        for cell in row {
            cell.sort_unstable();
        }
    }
    Shape {
        p: profile.p_vertices.iter().map(|v| (v.deg, v.genus)).collect(),
        f: profile
            .f_vertices
            .iter()
            .map(|v| {
                let mut legs: Vec<u32> = v.legs.iter().map(|&l| label(l)).collect();
                legs.sort_unstable();
                (v.e, v.df, legs)
            })
            .collect(),
        w,
    }
}

fn c2(a: i64) -> i64 {
    if a < 2 {
        0
    } else {
        a * (a - 1) / 2
    }
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for mut blocks in set_partitions(n - 1) {
        for i in 0..blocks.len() {
            let mut b = blocks.clone();
            b[i].push(n);
            out.push(b);
        }
        blocks.push(vec![n]);
        out.push(blocks);
    }
    out
}

/// Non-increasing lists of positive integers summing to `n`.
fn partitions(n: u32, cap: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for x in (1..=n.min(cap)).rev() {
        for mut rest in partitions(n - x, x) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Nonnegative matrices with the given row and column sums.
fn matrices(rows: &[u32], cols: &[u32]) -> Vec<Vec<Vec<u32>>> {
    let Some((&first, rest)) = rows.split_first() else {
        return if cols.iter().all(|&c| c == 0) { vec![vec![]] } else { vec![] };
    };
    let mut out = Vec::new();
    fn rows_with_sum(total: u32, caps: &[u32]) -> Vec<Vec<u32>> {
        let Some((&cap, tail)) = caps.split_first() else {
            return if total == 0 { vec![vec![]] } else { vec![] };
        };
        let mut out = Vec::new();
        for x in 0..=cap.min(total) {
            for mut r in rows_with_sum(total - x, tail) {
                r.insert(0, x);
                out.push(r);
            }
        }
        out
    }
    for row in rows_with_sum(first, cols) {
        let remaining: Vec<u32> = cols.iter().zip(&row).map(|(c, x)| c - x).collect();
        for mut tail in matrices(rest, &remaining) {
            tail.insert(0, row.clone());
            out.push(tail);
        }
    }
    out
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    choices.iter().fold(vec![vec![]], |acc, options| {
        acc.iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect()
    })
}

/// All isomorphism classes of small profiles of `(d, g, m)` by brute force.
fn brute_force(g: u32, m: &[u32], labeled: bool) -> BTreeSet<Code> {
    let n = m.len();
    let label = |leg: usize| if labeled { leg as u32 } else { m[leg - 1] };
    let mut classes = BTreeSet::new();
    for blocks in set_partitions(n) {
        // Each block of legs is one F-vertex with df = Σ m; exactly one of
        // them has e = df − 1, the rest e = df (height one).
        for kappa in 0..blocks.len() {
            let f: Vec<(u32, u32, Vec<u32>)> = blocks
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let df: u32 = b.iter().map(|&l| m[l - 1]).sum();
                    let mut legs: Vec<u32> = b.iter().map(|&l| label(l)).collect();
                    legs.sort_unstable();
                    (if i == kappa { df - 1 } else { df }, df, legs)
                })
                .collect();
            // A vertex with e = df carries one leg.
            if f.iter().any(|(e, df, legs)| e == df && legs.len() != 1) {
                continue;
            }
            let cols: Vec<u32> = f.iter().map(|x| x.0).collect();
            let total: u32 = cols.iter().sum();
            if total == 0 {
                continue;
            }
            for degrees in partitions(total, total) {
                for matrix in matrices(&degrees, &cols) {
                    let cells: Vec<Vec<Vec<u32>>> = matrix
                        .iter()
                        .flatten()
                        .map(|&x| partitions(x, x))
                        .collect();
                    for split in product(&cells) {
                        let w: Vec<Vec<Vec<u32>>> = split
                            .chunks(f.len())
                            .map(|row| {
                                row.iter()
                                    .map(|cell| cell.iter().rev().copied().collect())
                                    .collect()
                            })
                            .collect();
                        let edges: usize = split.iter().map(Vec::len).sum();
                        let vertices = degrees.len() + f.len();
                        let genus_sum = i64::from(g) + vertices as i64 - edges as i64 - 1;
                        let caps: Vec<i64> = degrees.iter().map(|&x| c2(i64::from(x) - 1)).collect();
                        if genus_sum < 0 || genus_sum > caps.iter().sum() {
                            continue;
                        }
                        let fibers_ok = (0..f.len()).filter(|&j| j != kappa).all(|j| {
                            let incident: Vec<u32> = w.iter().flat_map(|row| row[j].clone()).collect();
                            incident.len() == 1
                        });
                        if !fibers_ok {
                            continue;
                        }
                        let genus_choices: Vec<Vec<u32>> =
                            caps.iter().map(|&c| (0..=c as u32).collect()).collect();
                        for genera in product(&genus_choices) {
                            if genera.iter().map(|&x| i64::from(x)).sum::<i64>() != genus_sum {
                                continue;
                            }
                            let shape = Shape {
                                p: degrees.iter().copied().zip(genera).collect(),
                                f: f.clone(),
                                w: w.clone(),
                            };
                            if shape.connected() {
                                classes.insert(shape.code());
                            }
                        }
                    }
                }
            }
        }
    }
    classes
}

fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|x| {
            compositions(n - x).into_iter().map(move |mut rest| {
                rest.insert(0, x);
                rest
            })
        })
        .collect()
}

fn compare(d: u32, g: u32, m: &[u32], legs: LegSymmetry) {
    let labeled = legs == LegSymmetry::Labeled;
    let ctx = EnumerationContext::new(d, g, m.to_vec()).unwrap().with_leg_symmetry(legs);
    let expected = brute_force(g, m, labeled);
    let found = severi_landscape::landscape::enumerate_small_profiles(&ctx);
    let codes: BTreeSet<Code> = found.iter().map(|p| from_profile(p, &ctx, labeled).code()).collect();
    assert_eq!(codes.len(), found.len(), "{ctx}: two library classes coincide");
    assert_eq!(codes, expected, "{ctx} {legs:?}");
}

#[test]
fn quartic_211_counts() {
    assert_eq!(brute_force(1, &[2, 1, 1], false).len(), 7);
    assert_eq!(brute_force(1, &[2, 1, 1], true).len(), 9);
    assert_eq!(brute_force(0, &[3], false).len(), 2);
    assert_eq!(brute_force(0, &[1, 1], false).len(), 1);
}

#[test]
fn enumeration_matches_brute_force() {
    for d in 2..=6 {
        for m in compositions(d) {
            for g in 0..=c2(i64::from(d) - 1) as u32 {
                compare(d, g, &m, LegSymmetry::Multiplicity);
            }
        }
    }
}

#[test]
fn labeled_enumeration_matches_brute_force() {
    for d in 2..=4 {
        for m in compositions(d) {
            for g in 0..=c2(i64::from(d) - 1) as u32 {
                compare(d, g, &m, LegSymmetry::Labeled);
            }
        }
    }
    let ctx = EnumerationContext::new(4, 1, vec![2, 1, 1]).unwrap().with_leg_symmetry(LegSymmetry::Labeled);
    assert_eq!(severi_landscape::landscape::enumerate_small_profiles(&ctx).len(), 9);
}

#[test]
fn keys_agree_with_brute_force_isomorphism() {
    let ctx = EnumerationContext::new(5, 2, vec![2, 1, 1, 1]).unwrap();
    let profiles = severi_landscape::landscape::enumerate_small_profiles(&ctx);
    for a in &profiles {
        for b in &profiles {
            let same_code = from_profile(a, &ctx, false).code() == from_profile(b, &ctx, false).code();
            assert_eq!(same_code, ctx.canonical_key(a) == ctx.canonical_key(b));
        }
    }
}
