//! Single-explorer schedules from repeated roundabout runs.
//!
//! The timeline prefix is cut into `ρ` epochs. Each epoch opens with a
//! `Δ`-step repositioning window and continues until `t` snapshots missing
//! at most `k` tree edges have been seen; the roundabout process runs on
//! those snapshots. Picking one surviving agent per epoch whose visited arcs
//! jointly cover the tour, and following each picked agent in turn, visits
//! every vertex.

mod epochs;
mod schedule;
mod tuples;

pub use epochs::{partition_epochs, Epoch, EpochPlan};
pub use schedule::{
    assemble_schedule, verify_schedule, Action, Schedule, ScheduleReport, Step, Violation,
};
pub use tuples::{
    common_refinement, find_covering_tuple, for_each_tuple, is_covering_tuple,
    is_interval_covering_tuple, tuple_space_size, RefinedIntervals, TupleChoice, TupleStrategy,
};

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SpanningTree, TemporalGraph, Vertex};
use crate::roundabout::{run_roundabout, step_budget, RoundaboutTrace};
use crate::tour::{build_dfs_tour, DfsTour};
use crate::treefind::find_good_tree;

/// `ρ = ⌈18k ln(6k)⌉`.
pub fn epoch_count(k: usize) -> usize {
    assert!(k >= 1, "deficiency bound must be positive");
    let k = k as f64;
    (18.0 * k * (6.0 * k).ln()).ceil() as usize
}

/// `τ(n, k, Δ) = ρ(k) · (Δ + ⌈n / k⌉)`, the number of deficient snapshots
/// that suffices for exploration with a known tree.
pub fn lifetime_bound(n: usize, k: usize, delta: usize) -> usize {
    epoch_count(k) * (delta + n.div_ceil(k))
}

/// Lifetime that suffices when the tree is unknown: `2 τ(n, 2k, Δ)`.
pub fn unknown_tree_lifetime_bound(n: usize, k: usize, delta: usize) -> usize {
    2 * lifetime_bound(n, 2 * k, delta)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct ExploreStats {
    pub rho: usize,
    pub t: usize,
    pub epochs: usize,
    pub active_counts: Vec<usize>,
    pub attempts: usize,
    pub schedule_span: usize,
    pub schedule_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exploration {
    pub schedule: Schedule,
    pub stats: ExploreStats,
    /// Tree driving the tour (given or recovered).
    pub tree: Option<SpanningTree>,
    /// Deficiency bound the pipeline actually ran with.
    pub k_used: usize,
    pub plan: Option<EpochPlan>,
    pub traces: Vec<RoundaboutTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExploreOptions {
    pub k: usize,
    pub delta: usize,
    pub start: Vertex,
    pub tree: Option<SpanningTree>,
    pub strategy: TupleStrategy,
    /// Tour root; vertex 0 by default.
    pub root: Vertex,
}

impl ExploreOptions {
    pub fn new(k: usize, delta: usize, start: Vertex) -> Self {
        ExploreOptions {
            k,
            delta,
            start,
            tree: None,
            strategy: TupleStrategy::las_vegas(0),
            root: 0,
        }
    }

    pub fn with_tree(mut self, tree: SpanningTree) -> Self {
        self.tree = Some(tree);
        self
    }

    pub fn with_strategy(mut self, strategy: TupleStrategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Runs the full pipeline.
///
/// With a tree, the roundabout uses snapshots missing at most `k` of its
/// edges, `ρ = ⌈18k ln 6k⌉` and `t = ⌊(n-1)/k⌋`. Without one, a tree is
/// recovered from the first `2q` snapshots with `q = τ(n, 2k, Δ)` and the
/// pipeline runs with bound `2k`.
pub fn explore(graph: &TemporalGraph, opts: &ExploreOptions) -> Result<Exploration> {
    graph.check_vertex(opts.start)?;
    let n = graph.vertex_count();
    let mut k = opts.k;
    if k == 0 {
        warn!("k = 0 treated as k = 1");
        k = 1;
    }
    if opts.delta == 0 {
        return Err(Error::DeltaExceedsLifetime {
            delta: 0,
            lifetime: graph.lifetime(),
        });
    }
    if n == 1 {
        return Ok(Exploration {
            schedule: Schedule::empty(opts.start),
            stats: ExploreStats {
                rho: 0,
                t: 0,
                epochs: 0,
                active_counts: vec![],
                attempts: 0,
                schedule_span: 0,
                schedule_length: 0,
            },
            tree: opts.tree.clone(),
            k_used: k,
            plan: None,
            traces: vec![],
        });
    }

    let (tree, k_used) = match &opts.tree {
        Some(tree) => {
            if tree.vertex_count() != n {
                return Err(Error::InvalidTree(format!(
                    "tree has {} vertices, graph has {n}",
                    tree.vertex_count()
                )));
            }
            (tree.clone(), k)
        }
        None => {
            let mut q = lifetime_bound(n, 2 * k, opts.delta);
            if 2 * q > graph.lifetime() {
                warn!(
                    "lifetime {} is below 2q = {}; recovering the tree from all snapshots",
                    graph.lifetime(),
                    2 * q
                );
                q = graph.lifetime() / 2;
            }
            if q == 0 {
                return Err(Error::InsufficientSnapshots {
                    epoch: 1,
                    deficit: 2 - graph.lifetime(),
                });
            }
            (find_good_tree(graph, k, q)?.tree, 2 * k)
        }
    };

    let tour = build_dfs_tour(&tree, opts.root)?;
    let rho = epoch_count(k_used);
    let steps = step_budget(n, k_used);
    let plan = partition_epochs(graph, &tree, k_used, opts.delta, rho, steps)?;
    let traces = simulate_epochs(graph, &tour, &plan)?;
    let survivors: Vec<&[usize]> = traces.iter().map(|t| t.survivors()).collect();
    let refined = common_refinement(&survivors, tour.len());
    let choice = find_covering_tuple(&traces, &refined, opts.strategy)?;
    let schedule = assemble_schedule(graph, &tour, &plan, &traces, &choice.tuple, opts.start)?;

    let stats = ExploreStats {
        rho,
        t: steps,
        epochs: plan.rho(),
        active_counts: traces.iter().map(|t| t.survivors().len()).collect(),
        attempts: choice.attempts,
        schedule_span: schedule.span(),
        schedule_length: schedule.move_count(),
    };
    Ok(Exploration {
        schedule,
        stats,
        tree: Some(tree),
        k_used,
        plan: Some(plan),
        traces,
    })
}

/// One roundabout trace per epoch.
pub fn simulate_epochs(
    graph: &TemporalGraph,
    tour: &DfsTour,
    plan: &EpochPlan,
) -> Result<Vec<RoundaboutTrace>> {
    plan.epochs
        .iter()
        .map(|e| run_roundabout(graph, tour, &e.roundabout, plan.steps))
        .collect()
}
