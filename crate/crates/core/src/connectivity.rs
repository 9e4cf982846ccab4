//! Two independent connectivity routines over `0..n` with an edge list:
//! breadth-first search, which also yields a spanning tree, and a
//! disjoint-set forest. Graph connectivity verdicts in this crate are taken
//! from the former and cross-checked against the latter.

use std::collections::VecDeque;

/// Union–find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
        true
    }

    pub fn component_count(&self) -> usize {
        self.components
    }
}

/// Breadth-first search from `root`.
///
/// Returns, for each vertex, the index into `edges` of the tree edge through
/// which it was first reached (`None` for the root and for unreached
/// vertices), together with the number of reached vertices.
pub fn bfs_tree(n: usize, edges: &[(usize, usize)], root: usize) -> (Vec<Option<usize>>, usize) {
    let mut adjacency = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adjacency[a].push((b, i));
        adjacency[b].push((a, i));
    }
    let mut via = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &(w, i) in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                via[w] = Some(i);
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    (via, reached)
}

/// Connectivity of a nonempty graph, decided by BFS and by union–find.
///
/// Returns `Err((bfs, dsu))` if the two routines disagree.
pub fn cross_checked_connected(n: usize, edges: &[(usize, usize)]) -> Result<bool, (bool, bool)> {
    assert!(n > 0, "connectivity of the empty graph is undefined");
    let (_, reached) = bfs_tree(n, edges, 0);
    let by_bfs = reached == n;
    let mut dsu = DisjointSet::new(n);
    for &(a, b) in edges {
        dsu.union(a, b);
    }
    let by_dsu = dsu.component_count() == 1;
    if by_bfs == by_dsu {
        Ok(by_bfs)
    } else {
        Err((by_bfs, by_dsu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(cross_checked_connected(1, &[]), Ok(true));
        assert_eq!(cross_checked_connected(2, &[]), Ok(false));
        assert_eq!(cross_checked_connected(3, &[(0, 1), (2, 1)]), Ok(true));
        let (via, reached) = bfs_tree(3, &[(0, 1), (2, 1)], 0);
        assert_eq!(reached, 3);
        assert_eq!(via, vec![None, Some(0), Some(1)]);
    }

    proptest! {
        #[test]
        fn bfs_and_union_find_agree(
            n in 1usize..12,
            raw in proptest::collection::vec((0usize..12, 0usize..12), 0..20),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            prop_assert!(cross_checked_connected(n, &edges).is_ok());
            let mut dsu = DisjointSet::new(n);
            for &(a, b) in &edges {
                dsu.union(a, b);
            }
            let (_, reached) = bfs_tree(n, &edges, 0);
            let root = dsu.find(0);
            let same = (0..n).filter(|&v| dsu.find(v) == root).count();
            prop_assert_eq!(reached, same);
        }
    }
}
