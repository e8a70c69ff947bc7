use crate::error::{Error, Result};
use crate::graph::{missing_tree_edges, SpanningTree, TemporalGraph, Time};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epoch {
    /// `[start, start + Δ - 1]`.
    pub reposition: (Time, Time),
    /// Time steps of the `t` deficient snapshots driving the roundabout.
    pub roundabout: Vec<Time>,
    /// Last time step of the epoch.
    pub end: Time,
}

impl Epoch {
    pub fn start(&self) -> Time {
        self.reposition.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochPlan {
    pub epochs: Vec<Epoch>,
    pub k: usize,
    pub delta: usize,
    pub steps: usize,
}

impl EpochPlan {
    pub fn rho(&self) -> usize {
        self.epochs.len()
    }

    /// Last time step covered by the plan (0 when empty).
    pub fn end(&self) -> Time {
        self.epochs.last().map_or(0, |e| e.end)
    }
}

/// Greedy left-to-right partition: every epoch takes `Δ` repositioning
/// steps and then extends until `t` snapshots missing at most `k` tree
/// edges have been collected.
pub fn partition_epochs(
    graph: &TemporalGraph,
    tree: &SpanningTree,
    k: usize,
    delta: usize,
    rho: usize,
    steps: usize,
) -> Result<EpochPlan> {
    let lifetime = graph.lifetime();
    let mut epochs = Vec::with_capacity(rho);
    let mut cursor: Time = 1;
    for epoch in 1..=rho {
        let reposition_end = cursor + delta - 1;
        if reposition_end > lifetime {
            let available = (lifetime + 1).saturating_sub(cursor);
            return Err(Error::InsufficientSnapshots {
                epoch,
                deficit: delta - available + steps,
            });
        }
        let mut roundabout = Vec::with_capacity(steps);
        let mut t = reposition_end;
        while roundabout.len() < steps {
            t += 1;
            if t > lifetime {
                return Err(Error::InsufficientSnapshots {
                    epoch,
                    deficit: steps - roundabout.len(),
                });
            }
            if missing_tree_edges(graph.snapshot(t), tree) <= k {
                roundabout.push(t);
            }
        }
        epochs.push(Epoch {
            reposition: (cursor, reposition_end),
            roundabout,
            end: t,
        });
        cursor = t + 1;
    }
    Ok(EpochPlan {
        epochs,
        k,
        delta,
        steps,
    })
}
