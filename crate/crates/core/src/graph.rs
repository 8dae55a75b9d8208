//! Simple graphs on Ω, union-find and random spanning structures.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

/// Undirected loopless graph on vertices `1..=n`; edges stored as (i, j), i < j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: BTreeSet::new() }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Adds {a, b}. Panics on a loop or a vertex outside `1..=n`.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "loops are not allowed");
        assert!((1..=self.n).contains(&a) && (1..=self.n).contains(&b), "vertex out of range");
        self.edges.insert((a.min(b), a.max(b)));
    }

    /// Adds every edge between distinct members of `vertices`.
    pub fn add_clique(&mut self, vertices: &[usize]) {
        for (k, &a) in vertices.iter().enumerate() {
            for &b in &vertices[k + 1..] {
                self.add_edge(a, b);
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut dsu = DisjointSet::new(self.n);
        for (a, b) in self.edges() {
            dsu.union(a - 1, b - 1);
        }
        let mut slot = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            let root = dsu.find(v);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push(v + 1);
        }
        out
    }

    /// Every vertex reachable from every other; an isolated vertex disconnects.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

pub fn is_connected(g: &SimpleGraph) -> bool {
    g.is_connected()
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A spanning tree of a connected graph: Kruskal over a shuffled edge list.
/// Returns `None` when the graph is disconnected.
pub fn random_spanning_tree<R: Rng>(g: &SimpleGraph, rng: &mut R) -> Option<SimpleGraph> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.shuffle(rng);
    let mut dsu = DisjointSet::new(g.vertex_count());
    let mut tree = SimpleGraph::new(g.vertex_count());
    for (a, b) in edges {
        if dsu.union(a - 1, b - 1) {
            tree.add_edge(a, b);
        }
    }
    (tree.edge_count() + 1 == g.vertex_count() || g.vertex_count() == 0).then_some(tree)
}

/// A disconnected graph on `1..=n` with exactly n − 1 edges, by rejection
/// sampling. None exists for n ≤ 3; gives up after `attempts` draws.
pub fn random_disconnected_graph<R: Rng>(n: usize, rng: &mut R, attempts: usize) -> Option<SimpleGraph> {
    if n < 4 {
        return None;
    }
    let all: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    for _ in 0..attempts {
        let picked = all.choose_multiple(rng, n - 1).copied();
        let g = SimpleGraph::from_edges(n, picked);
        if !g.is_connected() {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn connectivity_examples() {
        assert!(SimpleGraph::complete(3).is_connected());
        assert!(!SimpleGraph::from_edges(4, [(1, 2), (3, 4)]).is_connected());
        assert!(!SimpleGraph::from_edges(3, [(1, 2)]).is_connected());
        assert!(SimpleGraph::new(1).is_connected());
        assert_eq!(SimpleGraph::from_edges(5, [(4, 2), (1, 3)]).components(), vec![vec![1, 3], vec![2, 4], vec![5]]);
    }

    #[test]
    fn spanning_trees_are_trees_inside_the_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut g = SimpleGraph::new(6);
        g.add_clique(&[1, 2, 3]);
        g.add_clique(&[3, 4, 5]);
        g.add_clique(&[5, 6, 1]);
        for _ in 0..20 {
            let t = random_spanning_tree(&g, &mut rng).unwrap();
            assert_eq!(t.edge_count(), 5);
            assert!(t.is_connected());
            assert!(t.edges().all(|(a, b)| g.has_edge(a, b)));
        }
        assert!(random_spanning_tree(&SimpleGraph::from_edges(4, [(1, 2), (3, 4)]), &mut rng).is_none());
    }

    #[test]
    fn disconnected_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(random_disconnected_graph(3, &mut rng, 100).is_none());
        for n in 4..9 {
            let g = random_disconnected_graph(n, &mut rng, 10_000).unwrap();
            assert_eq!(g.edge_count(), n - 1);
            assert!(!g.is_connected());
        }
    }

    #[test]
    fn disjoint_set_merges() {
        let mut d = DisjointSet::new(4);
        assert!(d.union(0, 1));
        assert!(!d.union(1, 0));
        assert!(d.union(2, 3));
        assert_ne!(d.find(0), d.find(3));
        assert!(d.union(1, 3));
        assert_eq!(d.find(0), d.find(2));
    }
}
