//! Temporal graph data model.
//!
//! Vertices are `0..n`; time steps are `1..=L`. A snapshot stores its edges
//! as a sorted list of canonical [`Edge`]s, so membership is a binary search.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
/// 1-indexed time step.
pub type Time = usize;

/// Undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(Vertex, Vertex);

impl Edge {
    /// Canonicalizes the endpoints. Self-loops are the caller's problem;
    /// see [`Edge::try_new`].
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn try_new(a: Vertex, b: Vertex, n: usize) -> Result<Self> {
        for v in [a, b] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if a == b {
            return Err(Error::InvalidTree(format!("self-loop at {a}")));
        }
        Ok(Edge::new(a, b))
    }

    pub fn lo(self) -> Vertex {
        self.0
    }

    pub fn hi(self) -> Vertex {
        self.1
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.0, self.1)
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if v == self.0 {
            Some(self.1)
        } else if v == self.1 {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// One graph of the sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Snapshot {
    edges: Vec<Edge>,
}

impl Snapshot {
    /// Sorts and deduplicates.
    pub fn new(mut edges: Vec<Edge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Snapshot { edges }
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl FromIterator<Edge> for Snapshot {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Snapshot::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalGraph {
    n: usize,
    snapshots: Vec<Snapshot>,
}

impl TemporalGraph {
    pub fn new(n: usize, snapshots: Vec<Snapshot>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("graph needs at least one vertex".into()));
        }
        if snapshots.is_empty() {
            return Err(Error::InvalidSpec("lifetime must be at least 1".into()));
        }
        for s in &snapshots {
            for e in s.edges() {
                if e.hi() >= n {
                    return Err(Error::VertexOutOfRange { vertex: e.hi(), n });
                }
                if e.lo() == e.hi() {
                    return Err(Error::InvalidSpec(format!("self-loop {e}")));
                }
            }
        }
        Ok(TemporalGraph { n, snapshots })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn lifetime(&self) -> usize {
        self.snapshots.len()
    }

    /// Snapshot at time `t` (1-indexed). Panics when `t` is outside `1..=L`.
    pub fn snapshot(&self, t: Time) -> &Snapshot {
        assert!(
            t >= 1 && t <= self.snapshots.len(),
            "time step {t} outside lifetime"
        );
        &self.snapshots[t - 1]
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    /// Union of all snapshot edge sets.
    pub fn underlying(&self) -> StaticGraph {
        let edges: BTreeSet<Edge> = self
            .snapshots
            .iter()
            .flat_map(|s| s.edges().iter().copied())
            .collect();
        StaticGraph {
            n: self.n,
            edges: edges.into_iter().collect(),
        }
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl StaticGraph {
    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        let mut components = self.n;
        for e in &self.edges {
            if uf.union(e.lo(), e.hi()) {
                components -= 1;
            }
        }
        components <= 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<Edge>,
}

impl SpanningTree {
    /// Validates that `edges` form a spanning tree on `n` vertices.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "expected {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(n);
        for e in &edges {
            if e.hi() >= n {
                return Err(Error::VertexOutOfRange { vertex: e.hi(), n });
            }
            if e.lo() == e.hi() {
                return Err(Error::InvalidTree(format!("self-loop {e}")));
            }
            if !uf.union(e.lo(), e.hi()) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
        }
        let mut edges = edges;
        edges.sort_unstable();
        Ok(SpanningTree { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Sorted tree edges.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Adjacency lists with neighbours in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.lo()].push(e.hi());
            adj[e.hi()].push(e.lo());
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Tree edges missing from a snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deficiency {
    pub count: usize,
    pub missing: Vec<Edge>,
}

/// Computes `|E(T) \ E(G_t)|` together with the missing edges in sorted order.
pub fn deficiency_count(snapshot: &Snapshot, tree: &SpanningTree) -> Deficiency {
    let missing: Vec<Edge> = tree
        .edges()
        .iter()
        .copied()
        .filter(|&e| !snapshot.contains(e))
        .collect();
    Deficiency {
        count: missing.len(),
        missing,
    }
}

/// Number of tree edges absent from `snapshot`, without collecting them.
pub fn missing_tree_edges(snapshot: &Snapshot, tree: &SpanningTree) -> usize {
    tree.edges()
        .iter()
        .filter(|&&e| !snapshot.contains(e))
        .count()
}

/// A walk `start, e_1, v_1, ...` with strictly increasing hop times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalWalk {
    pub start: Vertex,
    pub hops: Vec<(Time, Edge)>,
}

impl TemporalWalk {
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// Vertex sequence `v_0, v_1, ..., v_l`; `None` if consecutive hops do
    /// not share an endpoint.
    pub fn vertices(&self) -> Option<Vec<Vertex>> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for &(_, e) in &self.hops {
            cur = e.other(cur)?;
            out.push(cur);
        }
        Some(out)
    }

    pub fn end(&self) -> Option<Vertex> {
        self.vertices().map(|v| *v.last().unwrap())
    }

    /// Checks every walk invariant against `graph`.
    pub fn validate(&self, graph: &TemporalGraph) -> Result<()> {
        graph.check_vertex(self.start)?;
        let mut cur = self.start;
        let mut last_time = 0;
        for &(t, e) in &self.hops {
            if t <= last_time || t > graph.lifetime() {
                return Err(Error::InvalidWindow {
                    start: last_time,
                    end: t,
                    lifetime: graph.lifetime(),
                });
            }
            if !graph.snapshot(t).contains(e) {
                return Err(Error::MissingEdge(e, t));
            }
            cur = e.other(cur).ok_or_else(|| {
                Error::InvalidSpec(format!("hop {e} at time {t} does not leave {cur}"))
            })?;
            last_time = t;
        }
        Ok(())
    }
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` if `a` and `b` were already joined.
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
        true
    }
}

/// Number of connected components of `(0..n, edges)`.
pub fn component_count(n: usize, edges: &[Edge]) -> usize {
    let mut uf = UnionFind::new(n);
    let mut components = n;
    for e in edges {
        if uf.union(e.lo(), e.hi()) {
            components -= 1;
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree() -> SpanningTree {
        SpanningTree::new(3, vec![Edge::new(0, 1), Edge::new(1, 2)]).unwrap()
    }

    #[test]
    fn edge_is_canonical() {
        assert_eq!(Edge::new(3, 1), Edge::new(1, 3));
        assert_eq!(Edge::new(3, 1).endpoints(), (1, 3));
        assert_eq!(Edge::new(1, 3).other(3), Some(1));
        assert_eq!(Edge::new(1, 3).other(2), None);
    }

    #[test]
    fn deficiency_examples() {
        let tree = path_tree();
        let full: Snapshot = [Edge::new(0, 1), Edge::new(1, 2)].into_iter().collect();
        assert_eq!(
            deficiency_count(&full, &tree),
            Deficiency {
                count: 0,
                missing: vec![]
            }
        );

        let one: Snapshot = [Edge::new(0, 1)].into_iter().collect();
        assert_eq!(
            deficiency_count(&one, &tree),
            Deficiency {
                count: 1,
                missing: vec![Edge::new(1, 2)]
            }
        );

        // non-tree edges do not compensate
        let chord: Snapshot = [Edge::new(0, 2)].into_iter().collect();
        assert_eq!(
            deficiency_count(&chord, &tree),
            Deficiency {
                count: 2,
                missing: vec![Edge::new(0, 1), Edge::new(1, 2)]
            }
        );
        assert_eq!(missing_tree_edges(&chord, &tree), 2);
    }

    #[test]
    fn tree_validation() {
        assert!(SpanningTree::new(3, vec![Edge::new(0, 1)]).is_err());
        assert!(SpanningTree::new(3, vec![Edge::new(0, 1), Edge::new(1, 0)]).is_err());
        assert!(SpanningTree::new(3, vec![Edge::new(0, 1), Edge::new(1, 5)]).is_err());
        assert!(SpanningTree::new(1, vec![]).is_ok());
        assert_eq!(path_tree().adjacency(), vec![vec![1], vec![0, 2], vec![1]]);
    }

    #[test]
    fn graph_rejects_bad_input() {
        assert!(TemporalGraph::new(0, vec![Snapshot::default()]).is_err());
        assert!(TemporalGraph::new(2, vec![]).is_err());
        assert!(TemporalGraph::new(2, vec![[Edge::new(0, 2)].into_iter().collect()]).is_err());
    }

    #[test]
    fn walk_validation() {
        let g = TemporalGraph::new(
            3,
            vec![
                [Edge::new(0, 1)].into_iter().collect(),
                [Edge::new(1, 2)].into_iter().collect(),
            ],
        )
        .unwrap();
        let ok = TemporalWalk {
            start: 0,
            hops: vec![(1, Edge::new(0, 1)), (2, Edge::new(1, 2))],
        };
        assert!(ok.validate(&g).is_ok());
        assert_eq!(ok.end(), Some(2));

        let same_time = TemporalWalk {
            start: 0,
            hops: vec![(1, Edge::new(0, 1)), (1, Edge::new(1, 2))],
        };
        assert!(same_time.validate(&g).is_err());

        let absent = TemporalWalk {
            start: 1,
            hops: vec![(1, Edge::new(1, 2))],
        };
        assert_eq!(
            absent.validate(&g),
            Err(Error::MissingEdge(Edge::new(1, 2), 1))
        );

        let broken = TemporalWalk {
            start: 2,
            hops: vec![(1, Edge::new(0, 1))],
        };
        assert!(broken.validate(&g).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(component_count(4, &[Edge::new(0, 1)]), 3);
        assert_eq!(component_count(3, &[Edge::new(0, 1), Edge::new(1, 2)]), 1);
    }
}
