//! DFS tours of a spanning tree and circular intervals over tour positions.
//!
//! Tour positions are 1-indexed: `v_1 = root`, and the tour edge `e_i`
//! joins `v_i` to `v_{i+1}` with `v_{N+1} = v_1`.

use crate::error::{Error, Result};
use crate::graph::{Edge, SpanningTree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsTour {
    root: Vertex,
    vertices: Vec<Vertex>,
    tree_edges: Vec<Edge>,
}

/// Builds the tour visiting children in ascending vertex id.
pub fn build_dfs_tour(tree: &SpanningTree, root: Vertex) -> Result<DfsTour> {
    let n = tree.vertex_count();
    if root >= n {
        return Err(Error::VertexOutOfRange { vertex: root, n });
    }
    if n < 2 {
        return Err(Error::TrivialTour);
    }
    let adj = tree.adjacency();
    let mut vertices = Vec::with_capacity(2 * (n - 1));
    // (vertex, parent, next child index)
    let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, parent, next) = *top;
        let child = adj[v][next..]
            .iter()
            .position(|&c| Some(c) != parent)
            .map(|off| next + off);
        match child {
            Some(i) => {
                top.2 = i + 1;
                vertices.push(v);
                stack.push((adj[v][i], Some(v), 0));
            }
            None => {
                stack.pop();
                if !stack.is_empty() {
                    vertices.push(v);
                }
            }
        }
    }
    debug_assert_eq!(vertices.len(), 2 * (n - 1));
    Ok(DfsTour {
        root,
        vertices,
        tree_edges: tree.edges().to_vec(),
    })
}

impl DfsTour {
    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Number of tour edges `N = 2(n - 1)`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `v_i` for `i ∈ [1, N + 1]`.
    pub fn vertex(&self, i: usize) -> Vertex {
        assert!(
            i >= 1 && i <= self.len() + 1,
            "tour position {i} out of range"
        );
        self.vertices[(i - 1) % self.len()]
    }

    /// `e_i = {v_i, v_{i+1}}`.
    pub fn edge(&self, i: usize) -> Edge {
        Edge::new(self.vertex(i), self.vertex(i + 1))
    }

    /// Position following `i` on the cycle.
    pub fn next(&self, i: usize) -> usize {
        i % self.len() + 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Edges of the underlying tree, sorted.
    pub fn tree_edges(&self) -> &[Edge] {
        &self.tree_edges
    }
}

/// Positions met walking forward from `start` for `len` steps on the cycle
/// `1, ..., N, 1`. `len` ranges over `0..=N`; zero is the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CircularInterval {
    start: usize,
    len: usize,
    cycle: usize,
}

impl CircularInterval {
    /// `⟨i..j⟩`.
    pub fn closed(i: usize, j: usize, cycle: usize) -> Self {
        Self::check(i, cycle);
        Self::check(j, cycle);
        CircularInterval {
            start: i,
            len: (j + cycle - i) % cycle + 1,
            cycle,
        }
    }

    /// `⟨i..j)`; empty when `i == j`.
    pub fn half_open(i: usize, j: usize, cycle: usize) -> Self {
        Self::check(i, cycle);
        Self::check(j, cycle);
        CircularInterval {
            start: i,
            len: (j + cycle - i) % cycle,
            cycle,
        }
    }

    /// `len` consecutive positions starting at `start`, capped at the
    /// full cycle.
    pub fn from_len(start: usize, len: usize, cycle: usize) -> Self {
        Self::check(start, cycle);
        CircularInterval {
            start,
            len: len.min(cycle),
            cycle,
        }
    }

    pub fn full(cycle: usize) -> Self {
        Self::from_len(1, cycle, cycle)
    }

    fn check(i: usize, cycle: usize) {
        assert!(
            i >= 1 && i <= cycle,
            "position {i} outside cycle 1..={cycle}"
        );
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Last position, `None` when empty.
    pub fn end(&self) -> Option<usize> {
        (self.len > 0).then(|| (self.start - 1 + self.len - 1) % self.cycle + 1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.cycle
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && x <= self.cycle && (x + self.cycle - self.start) % self.cycle < self.len
    }

    pub fn positions(&self) -> impl Iterator<Item = usize> {
        let (start, cycle) = (self.start, self.cycle);
        (0..self.len).map(move |o| (start - 1 + o) % cycle + 1)
    }

    /// Linear pieces `[a, b]` (inclusive) inside `1..=N`; at most two.
    fn pieces(&self) -> impl Iterator<Item = (usize, usize)> {
        let mut out = [None, None];
        if self.len > 0 {
            let last = self.start + self.len - 1;
            if last <= self.cycle {
                out[0] = Some((self.start, last));
            } else {
                out[0] = Some((self.start, self.cycle));
                out[1] = Some((1, last - self.cycle));
            }
        }
        out.into_iter().flatten()
    }
}

/// Whether every position of `target` lies in the union of `others`.
/// Sorts and merges the linear pieces of `others`, `O(m log m)`.
pub fn covered_by_union(
    target: &CircularInterval,
    others: &[CircularInterval],
    cycle: usize,
) -> bool {
    if target.is_empty() {
        return true;
    }
    let mut pieces: Vec<(usize, usize)> = others.iter().flat_map(|c| c.pieces()).collect();
    pieces.sort_unstable();
    let mut merged: Vec<(usize, usize)> = Vec::with_capacity(pieces.len());
    for (a, b) in pieces {
        match merged.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    debug_assert!(merged.iter().all(|&(_, b)| b <= cycle));
    target.pieces().all(|(a, b)| {
        // the merged piece starting at or before `a` must reach `b`
        let idx = merged.partition_point(|&(s, _)| s <= a);
        idx > 0 && merged[idx - 1].1 >= b
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(n: usize, edges: &[(usize, usize)]) -> SpanningTree {
        SpanningTree::new(n, edges.iter().map(|&(a, b)| Edge::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn path_tour() {
        let t = build_dfs_tour(&tree(3, &[(0, 1), (1, 2)]), 0).unwrap();
        assert_eq!(t.vertices(), &[0, 1, 2, 1]);
        assert_eq!(t.len(), 4);
        assert_eq!(t.vertex(5), 0);
        assert_eq!(t.edge(2), Edge::new(1, 2));
        assert_eq!(t.edge(4), Edge::new(0, 1));
    }

    #[test]
    fn star_tour() {
        let t = build_dfs_tour(&tree(4, &[(0, 1), (0, 2), (0, 3)]), 0).unwrap();
        assert_eq!(t.vertices(), &[0, 1, 0, 2, 0, 3]);
    }

    #[test]
    fn single_edge_tour() {
        let t = build_dfs_tour(&tree(2, &[(0, 1)]), 0).unwrap();
        assert_eq!(t.vertices(), &[0, 1]);
        assert_eq!(t.edge(1), t.edge(2));
    }

    #[test]
    fn root_override_and_errors() {
        let t = build_dfs_tour(&tree(3, &[(0, 1), (1, 2)]), 1).unwrap();
        assert_eq!(t.vertices(), &[1, 0, 1, 2]);
        assert_eq!(build_dfs_tour(&tree(1, &[]), 0), Err(Error::TrivialTour));
        assert!(build_dfs_tour(&tree(2, &[(0, 1)]), 2).is_err());
    }

    #[test]
    fn interval_membership() {
        let i = CircularInterval::closed(3, 1, 4);
        assert_eq!(i.positions().collect::<Vec<_>>(), vec![3, 4, 1]);
        assert!(i.contains(4) && !i.contains(2));
        assert_eq!(i.end(), Some(1));

        let h = CircularInterval::half_open(2, 2, 4);
        assert!(h.is_empty());
        assert_eq!(h.end(), None);
        assert_eq!(
            CircularInterval::half_open(4, 2, 4)
                .positions()
                .collect::<Vec<_>>(),
            vec![4, 1]
        );
        assert_eq!(CircularInterval::closed(2, 2, 4).len(), 1);
        assert!(CircularInterval::from_len(3, 9, 4).is_full());
    }

    #[test]
    fn union_examples() {
        let c = |i, j| CircularInterval::closed(i, j, 4);
        assert!(covered_by_union(&c(1, 2), &[c(2, 3), c(3, 4), c(4, 1)], 4));
        assert!(!covered_by_union(&c(2, 3), &[c(3, 4), c(4, 1)], 4));
        assert!(covered_by_union(&c(3, 3), &[c(3, 3)], 4));
        assert!(!covered_by_union(&c(3, 3), &[], 4));
        assert!(covered_by_union(
            &CircularInterval::half_open(1, 1, 4),
            &[],
            4
        ));
        assert!(covered_by_union(
            &CircularInterval::full(4),
            &[c(2, 3), c(4, 1)],
            4
        ));
    }
}
