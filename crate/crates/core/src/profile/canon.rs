//! Canonical labelling of profiles.
//!
//! Vertices are colored by their numeric data and leg classes, the coloring
//! is refined by neighbor multisets until stable, and any remaining ties are
//! broken by individualizing one vertex at a time. Every discrete leaf of
//! this search gives a vertex order and an integer code; the minimum code is
//! the key. Branches on twin vertices (same data, same weighted
//! neighborhood) are skipped, since swapping twins is an automorphism.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{FVertex, MultiplicityVector, PVertex, TopologicalProfile, WeightedEdge};

const P_SIDE: u32 = 0;
const F_SIDE: u32 = 1;
const FOREIGN_LEG: u32 = 1 << 31;

/// Totally ordered isomorphism invariant of a profile.
///
/// Two valid profiles have equal keys exactly when some relabelling of
/// vertex and edge identifiers maps one onto the other while preserving the
/// numeric vertex data, edge weights and leg classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for CanonicalKey {
    /// Renders e.g. `P(2,0) P(1,0) | F(3/4)[1,1,2] | 0-0:1 0-0:1 1-0:1`:
    /// P-vertices as `(deg,genus)`, F-vertices as `(e/df)` with their leg
    /// classes, and edges as `p-f:μ` over canonical positions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = &self.0;
        let (np, nf) = (code[0] as usize, code[1] as usize);
        let mut at = 2;
        let mut sections: Vec<String> = Vec::new();
        let mut vertices = Vec::new();
        for _ in 0..np + nf {
            let side = code[at];
            let (a, b, genus) = (code[at + 1], code[at + 2], code[at + 3]);
            let nlegs = code[at + 4] as usize;
            let legs = &code[at + 5..at + 5 + nlegs];
            at += 5 + nlegs;
            let mut s = if side == P_SIDE {
                format!("P({a},{genus})")
            } else if genus == 0 {
                format!("F({a}/{b})")
            } else {
                format!("F({a}/{b},g{genus})")
            };
            if !legs.is_empty() {
                let legs: Vec<String> = legs.iter().map(u32::to_string).collect();
                s.push_str(&format!("[{}]", legs.join(",")));
            }
            vertices.push(s);
        }
        sections.push(vertices[..np].join(" "));
        sections.push(vertices[np..].join(" "));
        let ne = code[at] as usize;
        at += 1;
        let edges: Vec<String> = (0..ne)
            .map(|i| {
                let e = &code[at + 3 * i..at + 3 * i + 3];
                format!("{}-{}:{}", e[0], e[1] as usize - np, e[2])
            })
            .collect();
        sections.push(edges.join(" "));
        write!(f, "{}", sections.join(" | "))
    }
}

/// Equivalence classes of legs: legs in the same class may be exchanged by
/// an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegClasses(Option<Vec<u32>>);

impl LegClasses {
    /// Every leg is its own class.
    pub fn labeled() -> Self {
        LegClasses(None)
    }

    /// Legs of equal multiplicity share a class.
    pub fn by_multiplicity(m: &MultiplicityVector) -> Self {
        LegClasses(Some(m.as_slice().to_vec()))
    }

    /// Class label of the 1-based leg `leg`. For multiplicity classes this
    /// is the multiplicity itself.
    pub fn class_of(&self, leg: usize) -> u32 {
        match &self.0 {
            None => leg as u32,
            Some(m) => leg
                .checked_sub(1)
                .and_then(|i| m.get(i).copied())
                .unwrap_or(FOREIGN_LEG | leg as u32),
        }
    }
}

struct Shape {
    np: usize,
    /// Vertex data: side, two degree numbers, genus, leg count, leg classes.
    data: Vec<Vec<u32>>,
    /// Sorted `(neighbor, μ)` lists, one entry per parallel edge.
    adjacency: Vec<Vec<(usize, u32)>>,
    edges: Vec<(usize, usize, u32)>,
}

impl Shape {
    fn new(profile: &TopologicalProfile, classes: &LegClasses) -> Self {
        let np = profile.p_vertices.len();
        let sorted_classes = |legs: &[usize]| {
            let mut c: Vec<u32> = legs.iter().map(|&l| classes.class_of(l)).collect();
            c.sort_unstable();
            c
        };
        let mut data = Vec::with_capacity(profile.vertex_count());
        for v in &profile.p_vertices {
            let legs = sorted_classes(&v.legs);
            let mut row = vec![P_SIDE, v.deg, 0, v.genus, legs.len() as u32];
            row.extend(legs);
            data.push(row);
        }
        for v in &profile.f_vertices {
            let legs = sorted_classes(&v.legs);
            let mut row = vec![F_SIDE, v.e, v.df, v.genus, legs.len() as u32];
            row.extend(legs);
            data.push(row);
        }
        let p_index: BTreeMap<&str, usize> = profile
            .p_vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let f_index: BTreeMap<&str, usize> = profile
            .f_vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), np + i))
            .collect();
        let mut adjacency = vec![Vec::new(); data.len()];
        let mut edges = Vec::with_capacity(profile.edges.len());
        for e in &profile.edges {
            if let (Some(&a), Some(&b)) = (p_index.get(e.p.as_str()), f_index.get(e.f.as_str())) {
                adjacency[a].push((b, e.mu));
                adjacency[b].push((a, e.mu));
                edges.push((a, b, e.mu));
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Shape {
            np,
            data,
            adjacency,
            edges,
        }
    }

    fn len(&self) -> usize {
        self.data.len()
    }

    fn initial_colors(&self) -> Vec<u32> {
        dense_ranks(&self.data)
    }

    /// Refines `colors` until the number of classes stops growing. Colors
    /// stay dense and respect the order of the input colors.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_distinct(&colors);
        loop {
            let signatures: Vec<(u32, Vec<(u32, u32)>)> = (0..self.len())
                .map(|v| {
                    let mut around: Vec<(u32, u32)> = self.adjacency[v]
                        .iter()
                        .map(|&(w, mu)| (colors[w], mu))
                        .collect();
                    around.sort_unstable();
                    (colors[v], around)
                })
                .collect();
            colors = dense_ranks(&signatures);
            let refined = count_distinct(&colors);
            if refined == classes {
                return colors;
            }
            classes = refined;
        }
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        let colors = self.refine(colors);
        let n = self.len();
        let mut cell_sizes = vec![0usize; n];
        for &c in &colors {
            cell_sizes[c as usize] += 1;
        }
        let Some(target) = cell_sizes.iter().position(|&s| s > 1) else {
            let mut order = vec![0usize; n];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            let code = self.encode(&order);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        };
        let target = target as u32;
        let mut tried = Vec::new();
        for v in (0..n).filter(|&v| colors[v] == target) {
            let twin_key = (&self.data[v], &self.adjacency[v]);
            if tried.contains(&twin_key) {
                continue;
            }
            tried.push(twin_key);
            let individualized = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
                .collect();
            self.search(individualized, best);
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = self.len();
        let mut position = vec![0usize; n];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        let mut code = vec![self.np as u32, (n - self.np) as u32];
        for &v in order {
            code.extend_from_slice(&self.data[v]);
        }
        let mut edges: Vec<(u32, u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b, mu)| (position[a] as u32, position[b] as u32, mu))
            .collect();
        edges.sort_unstable();
        code.push(edges.len() as u32);
        for (a, b, mu) in edges {
            code.extend([a, b, mu]);
        }
        code
    }

    /// Canonical code and the vertex order (position → vertex) realizing it.
    fn canonical(&self) -> (Vec<u32>, Vec<usize>) {
        let mut best = None;
        self.search(self.initial_colors(), &mut best);
        best.expect("the search visits at least one leaf")
    }
}

fn dense_ranks<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut sorted: Vec<&T> = items.iter().collect();
    sorted.sort();
    sorted.dedup();
    items
        .iter()
        .map(|x| sorted.binary_search(&x).expect("present") as u32)
        .collect()
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// The isomorphism class of `profile`, with legs compared through `classes`.
///
/// The profile should be structurally well-formed; edges with dangling
/// endpoints are ignored.
pub fn canonical_key(profile: &TopologicalProfile, classes: &LegClasses) -> CanonicalKey {
    CanonicalKey(Shape::new(profile, classes).canonical().0)
}

pub fn are_isomorphic(a: &TopologicalProfile, b: &TopologicalProfile, classes: &LegClasses) -> bool {
    canonical_key(a, classes) == canonical_key(b, classes)
}

/// The canonical representative of the isomorphism class of `profile`.
///
/// Vertices are listed in canonical order with identifiers `p0, p1, ...`
/// and `f0, f1, ...`; edges are sorted by endpoint positions and weight and
/// named `e0, e1, ...`. Within each leg class the smallest leg indices go to
/// the earliest vertices, so isomorphic inputs yield identical outputs.
pub fn canonical_form(profile: &TopologicalProfile, classes: &LegClasses) -> TopologicalProfile {
    canonicalize(profile, classes).1
}

/// [`canonical_key`] and [`canonical_form`] from a single search.
pub fn canonicalize(
    profile: &TopologicalProfile,
    classes: &LegClasses,
) -> (CanonicalKey, TopologicalProfile) {
    let shape = Shape::new(profile, classes);
    let (code, order) = shape.canonical();
    let np = shape.np;

    // Legs of each class, ascending, handed out in canonical vertex order.
    let mut pools: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let all_legs = profile
        .p_vertices
        .iter()
        .flat_map(|v| v.legs.iter())
        .chain(profile.f_vertices.iter().flat_map(|v| v.legs.iter()));
    for &leg in all_legs {
        pools.entry(classes.class_of(leg)).or_default().push(leg);
    }
    for pool in pools.values_mut() {
        pool.sort_unstable();
        pool.reverse();
    }
    let mut take_legs = |legs: &[usize]| {
        let mut out: Vec<usize> = legs
            .iter()
            .map(|&l| {
                pools
                    .get_mut(&classes.class_of(l))
                    .and_then(Vec::pop)
                    .expect("pool holds every leg")
            })
            .collect();
        out.sort_unstable();
        out
    };

    let mut p_vertices = Vec::new();
    let mut f_vertices = Vec::new();
    for (pos, &v) in order.iter().enumerate() {
        if v < np {
            let src = &profile.p_vertices[v];
            p_vertices.push(PVertex {
                id: format!("p{pos}"),
                deg: src.deg,
                genus: src.genus,
                legs: take_legs(&src.legs),
            });
        } else {
            let src = &profile.f_vertices[v - np];
            f_vertices.push(FVertex {
                id: format!("f{}", pos - np),
                e: src.e,
                df: src.df,
                genus: src.genus,
                legs: take_legs(&src.legs),
            });
        }
    }
    let mut position = vec![0usize; order.len()];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut edges: Vec<(usize, usize, u32)> = shape
        .edges
        .iter()
        .map(|&(a, b, mu)| (position[a], position[b], mu))
        .collect();
    edges.sort_unstable();
    let edges = edges
        .into_iter()
        .enumerate()
        .map(|(i, (a, b, mu))| WeightedEdge {
            id: format!("e{i}"),
            p: format!("p{a}"),
            f: format!("f{}", b - np),
            mu,
        })
        .collect();
    let form = TopologicalProfile {
        p_vertices,
        f_vertices,
        edges,
    };
    (CanonicalKey(code), form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::EnumerationContext;

    fn ctx() -> EnumerationContext {
        EnumerationContext::new(4, 1, vec![2, 1, 1]).unwrap()
    }

    fn single_p(edges: &[u32], genus: u32) -> TopologicalProfile {
        let mut b = TopologicalProfile::builder();
        let p = b.p_vertex(3, genus);
        let k = b.f_vertex(3, 4, &[1, 2, 3]);
        for &mu in edges {
            b.edge(&p, &k, mu);
        }
        b.build()
    }

    #[test]
    fn distinguishes_edge_partitions() {
        let classes = ctx().leg_classes();
        assert_ne!(
            canonical_key(&single_p(&[3], 1), &classes),
            canonical_key(&single_p(&[1, 2], 0), &classes)
        );
        assert_ne!(
            canonical_key(&single_p(&[1, 2], 1), &classes),
            canonical_key(&single_p(&[1, 2], 0), &classes)
        );
    }

    #[test]
    fn deterministic_and_relabeling_invariant() {
        let classes = ctx().leg_classes();
        let profile = single_p(&[2, 1], 0);
        let key = canonical_key(&profile, &classes);
        assert_eq!(key, canonical_key(&profile, &classes));
        let shuffled = profile.permuted(&[0], &[0], &[1, 0]);
        assert_eq!(key, canonical_key(&shuffled, &classes));
    }

    #[test]
    fn multiplicity_classes_identify_equal_legs() {
        // P(3,g1) with a fiber on leg 2 versus on leg 3 (both m = 1).
        let build = |fiber_leg: usize, kappa_legs: &[usize]| {
            let mut b = TopologicalProfile::builder();
            let p = b.p_vertex(3, 1);
            let f = b.f_vertex(1, 1, &[fiber_leg]);
            let k = b.f_vertex(2, 3, kappa_legs);
            b.edge(&p, &f, 1);
            b.edge(&p, &k, 2);
            b.build()
        };
        let a = build(2, &[1, 3]);
        let b = build(3, &[1, 2]);
        let by_m = LegClasses::by_multiplicity(ctx().m());
        assert!(are_isomorphic(&a, &b, &by_m));
        assert!(!are_isomorphic(&a, &b, &LegClasses::labeled()));
        assert_eq!(canonical_form(&a, &by_m), canonical_form(&b, &by_m));
    }

    #[test]
    fn canonical_form_has_the_same_key() {
        let mut b = TopologicalProfile::builder();
        let p0 = b.p_vertex(2, 0);
        let p1 = b.p_vertex(1, 0);
        let k = b.f_vertex(3, 4, &[3, 1, 2]);
        b.edge(&p1, &k, 1);
        b.edge(&p0, &k, 1);
        b.edge(&p0, &k, 1);
        let profile = b.build();
        let classes = ctx().leg_classes();
        let canonical = canonical_form(&profile, &classes);
        assert_eq!(canonical_key(&canonical, &classes), canonical_key(&profile, &classes));
        assert_eq!(canonical.p_vertices[0].deg, 1);
        assert_eq!(canonical.f_vertices[0].legs, vec![1, 2, 3]);
        assert_eq!(
            canonical_key(&profile, &classes).to_string(),
            "P(1,0) P(2,0) | F(3/4)[1,1,2] | 0-0:1 1-0:1 1-0:1"
        );
    }
}
