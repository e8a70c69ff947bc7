//! Earliest-arrival (foremost) walks and Δ-temporal connectivity checks.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, TemporalGraph, TemporalWalk, Time, Vertex};

/// Earliest arrival times from one source inside a window `[start, end]`.
///
/// The source itself has arrival `start - 1`: it is occupied before the
/// window's first snapshot. `None` marks a vertex unreachable in the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForemostTree {
    pub source: Vertex,
    pub window: (Time, Time),
    pub arrival: Vec<Option<Time>>,
    parent: Vec<Option<(Vertex, Time)>>,
}

impl ForemostTree {
    pub fn is_reachable(&self, v: Vertex) -> bool {
        self.arrival[v].is_some()
    }

    /// Witness walk reaching `target` at its earliest arrival time.
    pub fn walk_to(&self, target: Vertex) -> Option<TemporalWalk> {
        self.arrival.get(target).copied().flatten()?;
        let mut hops = Vec::new();
        let mut cur = target;
        while let Some((pred, t)) = self.parent[cur] {
            hops.push((t, Edge::new(pred, cur)));
            cur = pred;
        }
        hops.reverse();
        Some(TemporalWalk {
            start: self.source,
            hops,
        })
    }
}

/// Sweeps the window in increasing time. At step `s` a vertex reached
/// strictly before `s` may cross one edge of `G_s`; among several
/// predecessors the smallest vertex id is recorded.
pub fn foremost_walk(
    graph: &TemporalGraph,
    window: (Time, Time),
    source: Vertex,
) -> Result<ForemostTree> {
    let (start, end) = window;
    if start < 1 || start > end || end > graph.lifetime() {
        return Err(Error::InvalidWindow {
            start,
            end,
            lifetime: graph.lifetime(),
        });
    }
    graph.check_vertex(source)?;

    let n = graph.vertex_count();
    let mut arrival: Vec<Option<Time>> = vec![None; n];
    let mut parent: Vec<Option<(Vertex, Time)>> = vec![None; n];
    arrival[source] = Some(start - 1);
    let mut reached = 1;

    for s in start..=end {
        if reached == n {
            break;
        }
        for e in graph.snapshot(s).edges() {
            let (a, b) = e.endpoints();
            for (from, to) in [(a, b), (b, a)] {
                let from_ready = matches!(arrival[from], Some(x) if x < s);
                if !from_ready {
                    continue;
                }
                match arrival[to] {
                    None => {
                        arrival[to] = Some(s);
                        parent[to] = Some((from, s));
                        reached += 1;
                    }
                    Some(x) if x == s => {
                        if let Some((p, _)) = parent[to] {
                            if from < p {
                                parent[to] = Some((from, s));
                            }
                        }
                    }
                    Some(_) => {}
                }
            }
        }
    }

    Ok(ForemostTree {
        source,
        window,
        arrival,
        parent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl DeltaMode {
    pub const DEFAULT_SAMPLES: usize = 32;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaViolation {
    pub window_start: Time,
    pub from: Vertex,
    pub to: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaVerdict {
    pub connected: bool,
    pub windows_checked: usize,
    pub violation: Option<DeltaViolation>,
}

/// Checks that every window `[t, t + Δ - 1]` with `t ≤ L - Δ + 1` is
/// temporally connected. Windows that would run past the lifetime are not
/// checked. Exhaustive cost is `O((L - Δ + 1) · n · Σ|E_t|)`.
pub fn verify_delta_connectivity(
    graph: &TemporalGraph,
    delta: usize,
    mode: DeltaMode,
) -> Result<DeltaVerdict> {
    let lifetime = graph.lifetime();
    if delta == 0 || delta > lifetime {
        return Err(Error::DeltaExceedsLifetime { delta, lifetime });
    }
    let windows = lifetime - delta + 1;
    let starts: Vec<Time> = match mode {
        DeltaMode::Exhaustive => (1..=windows).collect(),
        DeltaMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<Time> = index::sample(&mut rng, windows, count.min(windows))
                .into_iter()
                .map(|i| i + 1)
                .collect();
            picked.sort_unstable();
            picked
        }
    };

    let n = graph.vertex_count();
    for (checked, &t) in starts.iter().enumerate() {
        for from in 0..n {
            let tree = foremost_walk(graph, (t, t + delta - 1), from)?;
            if let Some(to) = (0..n).find(|&v| !tree.is_reachable(v)) {
                return Ok(DeltaVerdict {
                    connected: false,
                    windows_checked: checked + 1,
                    violation: Some(DeltaViolation {
                        window_start: t,
                        from,
                        to,
                    }),
                });
            }
        }
    }
    Ok(DeltaVerdict {
        connected: true,
        windows_checked: starts.len(),
        violation: None,
    })
}
