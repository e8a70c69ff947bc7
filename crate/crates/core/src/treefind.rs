//! Recovering a spanning tree when the deficiency witness is unknown.
//!
//! Each underlying edge is weighted by the number of prefix snapshots it is
//! missing from; a minimum-weight spanning tree under these weights misses
//! at most `2k` edges in at least half of the prefix snapshots.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{missing_tree_edges, Edge, SpanningTree, TemporalGraph, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeights {
    pub prefix: usize,
    pub weights: BTreeMap<Edge, usize>,
}

impl EdgeWeights {
    pub fn weight(&self, e: Edge) -> Option<usize> {
        self.weights.get(&e).copied()
    }

    /// Summed weight; an edge outside the underlying graph is missing from
    /// every prefix snapshot and weighs `prefix`.
    pub fn total(&self, edges: &[Edge]) -> usize {
        edges
            .iter()
            .map(|e| self.weights.get(e).copied().unwrap_or(self.prefix))
            .sum()
    }
}

/// `w(e)` = number of snapshots among the first `prefix` missing `e`, for
/// every edge of the full underlying graph.
pub fn absence_weights(graph: &TemporalGraph, prefix: usize) -> Result<EdgeWeights> {
    if prefix > graph.lifetime() {
        return Err(Error::PrefixExceedsLifetime {
            prefix,
            lifetime: graph.lifetime(),
        });
    }
    let mut weights: BTreeMap<Edge, usize> = graph
        .underlying()
        .edges
        .into_iter()
        .map(|e| (e, prefix))
        .collect();
    for s in &graph.snapshots()[..prefix] {
        for e in s.edges() {
            *weights
                .get_mut(e)
                .expect("snapshot edge is in the underlying graph") -= 1;
        }
    }
    Ok(EdgeWeights { prefix, weights })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodTree {
    pub tree: SpanningTree,
    pub weights: EdgeWeights,
    /// Missing tree edges in each of the first `2q` snapshots.
    pub deficiencies: Vec<usize>,
    /// How many of those miss at most `2k` tree edges.
    pub good_snapshots: usize,
    pub q: usize,
}

/// Minimum-weight spanning tree under [`absence_weights`] over the first
/// `2q` snapshots. Edges are taken in `(weight, lo, hi)` order, skipping
/// those that close a cycle.
pub fn find_good_tree(graph: &TemporalGraph, k: usize, q: usize) -> Result<GoodTree> {
    let weights = absence_weights(graph, 2 * q)?;
    let mut order: Vec<(usize, Edge)> = weights.weights.iter().map(|(&e, &w)| (w, e)).collect();
    order.sort_unstable();

    let n = graph.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for (_, e) in order {
        if uf.union(e.lo(), e.hi()) {
            chosen.push(e);
            if chosen.len() + 1 == n {
                break;
            }
        }
    }
    if chosen.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    let tree = SpanningTree::new(n, chosen)?;

    let deficiencies: Vec<usize> = graph.snapshots()[..2 * q]
        .iter()
        .map(|s| missing_tree_edges(s, &tree))
        .collect();
    // double counting: summing per snapshot equals summing per edge
    assert_eq!(
        deficiencies.iter().sum::<usize>(),
        weights.total(tree.edges()),
        "absence weights disagree with per-snapshot deficiencies"
    );
    let good_snapshots = deficiencies.iter().filter(|&&d| d <= 2 * k).count();
    Ok(GoodTree {
        tree,
        weights,
        deficiencies,
        good_snapshots,
        q,
    })
}
