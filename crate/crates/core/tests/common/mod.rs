#![allow(dead_code)]

use proptest::prelude::*;
use temporal_explore::gen::{Connectivity, GenSpec, TreeShape};
use temporal_explore::{Edge, Snapshot, TemporalGraph};

/// Arbitrary temporal graph: each pair present in each snapshot with
/// probability `density / 8`.
pub fn arb_graph(max_n: usize, max_l: usize) -> impl Strategy<Value = TemporalGraph> {
    (1..=max_n, 1..=max_l, 1u8..8).prop_flat_map(|(n, l, density)| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(prop::collection::vec(0u8..8, pairs), l).prop_map(move |rows| {
            let all: Vec<Edge> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| Edge::new(a, b)))
                .collect();
            let snaps = rows
                .into_iter()
                .map(|r| {
                    all.iter()
                        .zip(r)
                        .filter(|&(_, x)| x < density)
                        .map(|(&e, _)| e)
                        .collect::<Snapshot>()
                })
                .collect();
            TemporalGraph::new(n, snaps).unwrap()
        })
    })
}

pub fn arb_shape() -> impl Strategy<Value = TreeShape> {
    prop_oneof![
        Just(TreeShape::Path),
        Just(TreeShape::Star),
        Just(TreeShape::Random)
    ]
}

/// Valid generator spec with per-snapshot connectivity.
pub fn arb_spec(max_n: usize, max_l: usize) -> impl Strategy<Value = GenSpec> {
    (2..=max_n, 1..=max_l, any::<u64>(), arb_shape(), 0.0..0.3f64).prop_flat_map(
        |(n, lifetime, seed, tree_shape, extra_edge_rate)| {
            (1..n).prop_map(move |k| GenSpec {
                n,
                lifetime,
                k,
                seed,
                tree_shape,
                connectivity: Connectivity::PerSnapshot,
                extra_edge_rate,
            })
        },
    )
}
