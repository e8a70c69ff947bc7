//! Exponential reference computations for desk-scale cross-checks.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Edge, TemporalGraph, Time, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_lifetime: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 15,
            max_lifetime: 64,
        }
    }
}

/// Search state: where the explorer is, what it has seen, and when.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExplorationStateKey {
    pub vertex: Vertex,
    pub visited: u32,
    pub time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalExploration {
    Feasible {
        /// Fewest edge traversals of any exploring walk within the lifetime.
        length: usize,
        /// Earliest time step by which any exploring walk can finish.
        completion: Time,
    },
    Infeasible,
}

impl OptimalExploration {
    pub fn length(&self) -> Option<usize> {
        match self {
            OptimalExploration::Feasible { length, .. } => Some(*length),
            OptimalExploration::Infeasible => None,
        }
    }
}

/// Sorted presence times per ordered neighbour pair.
struct Presence {
    adj: Vec<Vec<(Vertex, Vec<Time>)>>,
}

impl Presence {
    fn new(graph: &TemporalGraph) -> Self {
        let mut times: BTreeMap<Edge, Vec<Time>> = BTreeMap::new();
        for (i, s) in graph.snapshots().iter().enumerate() {
            for &e in s.edges() {
                times.entry(e).or_default().push(i + 1);
            }
        }
        let mut adj = vec![Vec::new(); graph.vertex_count()];
        for (e, ts) in times {
            adj[e.lo()].push((e.hi(), ts.clone()));
            adj[e.hi()].push((e.lo(), ts));
        }
        Presence { adj }
    }

    /// Neighbours of `v` with the first time step after `after` at which the
    /// connecting edge is present.
    fn moves(&self, v: Vertex, after: Time) -> impl Iterator<Item = (Vertex, Time)> + '_ {
        self.adj[v].iter().filter_map(move |(w, ts)| {
            let i = ts.partition_point(|&t| t <= after);
            ts.get(i).map(|&t| (*w, t))
        })
    }
}

/// Exact minimum walk length to visit every vertex from `start`, searching
/// `(vertex, visited set, time)` states layer by layer in the number of
/// moves. A state is dropped when the same `(vertex, visited set)` was
/// already reached no later with no more moves.
pub fn optimal_exploration_time(
    graph: &TemporalGraph,
    start: Vertex,
    limits: OracleLimits,
) -> Result<OptimalExploration> {
    let n = graph.vertex_count();
    if n > limits.max_vertices || n > 31 {
        return Err(Error::OracleLimit(format!(
            "n = {n} exceeds cap {}",
            limits.max_vertices
        )));
    }
    if graph.lifetime() > limits.max_lifetime {
        return Err(Error::OracleLimit(format!(
            "lifetime {} exceeds cap {}",
            graph.lifetime(),
            limits.max_lifetime
        )));
    }
    graph.check_vertex(start)?;

    let full: u32 = (1u32 << n) - 1;
    let init = ExplorationStateKey {
        vertex: start,
        visited: 1 << start,
        time: 0,
    };
    if init.visited == full {
        return Ok(OptimalExploration::Feasible {
            length: 0,
            completion: 0,
        });
    }
    let presence = Presence::new(graph);
    let idx = |v: Vertex, m: u32| (m as usize) * n + v;
    let mut best = vec![Time::MAX; n << n];
    best[idx(start, init.visited)] = 0;

    let mut frontier = vec![init];
    let mut length = 0;
    while !frontier.is_empty() {
        length += 1;
        let mut next: BTreeMap<(Vertex, u32), Time> = BTreeMap::new();
        for st in &frontier {
            for (w, t) in presence.moves(st.vertex, st.time) {
                let m = st.visited | (1 << w);
                let slot = &mut best[idx(w, m)];
                if t < *slot {
                    *slot = t;
                    next.insert((w, m), t);
                }
            }
        }
        if next.keys().any(|&(_, m)| m == full) {
            return Ok(OptimalExploration::Feasible {
                length,
                completion: earliest_completion(&presence, start, n),
            });
        }
        frontier = next
            .into_iter()
            .map(|((vertex, visited), time)| ExplorationStateKey {
                vertex,
                visited,
                time,
            })
            .collect();
    }
    Ok(OptimalExploration::Infeasible)
}

fn earliest_completion(presence: &Presence, start: Vertex, n: usize) -> Time {
    let full: u32 = (1u32 << n) - 1;
    let idx = |v: Vertex, m: u32| (m as usize) * n + v;
    let mut dist = vec![Time::MAX; n << n];
    let mut heap = BinaryHeap::new();
    dist[idx(start, 1 << start)] = 0;
    heap.push(Reverse((0, start, 1u32 << start)));
    while let Some(Reverse((t, v, m))) = heap.pop() {
        if m == full {
            return t;
        }
        if t > dist[idx(v, m)] {
            continue;
        }
        for (w, s) in presence.moves(v, t) {
            let m2 = m | (1 << w);
            if s < dist[idx(w, m2)] {
                dist[idx(w, m2)] = s;
                heap.push(Reverse((s, w, m2)));
            }
        }
    }
    unreachable!("caller established feasibility")
}

/// Earliest arrivals by BFS on the explicit time-expanded graph: nodes
/// `(v, s)` for `s ∈ [start - 1, end]`, a waiting arc `(v, s) → (v, s + 1)`
/// and arcs `(u, s - 1) → (v, s)` for every edge `{u, v}` of `G_s`.
pub fn foremost_arrival_oracle(
    graph: &TemporalGraph,
    window: (Time, Time),
    source: Vertex,
) -> Result<Vec<Option<Time>>> {
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
    let layers = end - start + 2;
    let node = |v: Vertex, layer: usize| layer * n + v;

    let mut arcs: Vec<Vec<usize>> = vec![Vec::new(); n * layers];
    for layer in 0..layers - 1 {
        for v in 0..n {
            arcs[node(v, layer)].push(node(v, layer + 1));
        }
        let time = start + layer;
        for e in graph.snapshot(time).edges() {
            let (a, b) = e.endpoints();
            arcs[node(a, layer)].push(node(b, layer + 1));
            arcs[node(b, layer)].push(node(a, layer + 1));
        }
    }

    let mut seen = vec![false; n * layers];
    let mut queue = VecDeque::from([node(source, 0)]);
    seen[node(source, 0)] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &arcs[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok((0..n)
        .map(|v| {
            (0..layers)
                .find(|&l| seen[node(v, l)])
                .map(|l| start - 1 + l)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Snapshot;

    fn graph(n: usize, snaps: &[&[(usize, usize)]]) -> TemporalGraph {
        TemporalGraph::new(
            n,
            snaps
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|&(a, b)| Edge::new(a, b))
                        .collect::<Snapshot>()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn path_from_middle() {
        let g = graph(3, &[&[(0, 1), (1, 2)][..]; 6]);
        let opt = optimal_exploration_time(&g, 1, OracleLimits::default()).unwrap();
        assert_eq!(
            opt,
            OptimalExploration::Feasible {
                length: 3,
                completion: 3
            }
        );
        let opt = optimal_exploration_time(&g, 0, OracleLimits::default()).unwrap();
        assert_eq!(opt.length(), Some(2));
    }

    #[test]
    fn trivial_and_infeasible() {
        let g = graph(1, &[&[]]);
        assert_eq!(
            optimal_exploration_time(&g, 0, OracleLimits::default())
                .unwrap()
                .length(),
            Some(0)
        );
        let g = graph(3, &[&[(0, 1)][..]; 4]);
        assert_eq!(
            optimal_exploration_time(&g, 1, OracleLimits::default()).unwrap(),
            OptimalExploration::Infeasible
        );
    }

    #[test]
    fn length_and_completion_can_differ() {
        // 0-2 directly late, or 0-1-2 early
        let g = graph(3, &[&[(0, 1)], &[(1, 2)], &[], &[(0, 2), (0, 1)]]);
        let opt = optimal_exploration_time(&g, 0, OracleLimits::default()).unwrap();
        assert_eq!(
            opt,
            OptimalExploration::Feasible {
                length: 2,
                completion: 2
            }
        );
        // shortest walk 0-1-2 must wait for {1,2} at step 9, while
        // 0-1-0-2 finishes at step 3
        let g = graph(
            3,
            &[
                &[(0, 1)],
                &[(0, 1)],
                &[(0, 2)],
                &[],
                &[],
                &[],
                &[],
                &[],
                &[(1, 2)],
            ],
        );
        let opt = optimal_exploration_time(&g, 0, OracleLimits::default()).unwrap();
        assert_eq!(
            opt,
            OptimalExploration::Feasible {
                length: 2,
                completion: 3
            }
        );
    }

    #[test]
    fn limits_are_hard_errors() {
        let g = graph(3, &[&[(0, 1)][..]; 70]);
        assert!(optimal_exploration_time(&g, 0, OracleLimits::default()).is_err());
        let big = TemporalGraph::new(16, vec![Snapshot::default()]).unwrap();
        assert!(optimal_exploration_time(&big, 0, OracleLimits::default()).is_err());
    }

    #[test]
    fn expanded_graph_arrivals() {
        let g = graph(3, &[&[(0, 1)], &[(1, 2)]]);
        assert_eq!(
            foremost_arrival_oracle(&g, (1, 2), 0).unwrap(),
            vec![Some(0), Some(1), Some(2)]
        );
        let g = graph(3, &[&[(1, 2)], &[(1, 2)]]);
        assert_eq!(
            foremost_arrival_oracle(&g, (1, 2), 0).unwrap(),
            vec![Some(0), None, None]
        );
    }
}
