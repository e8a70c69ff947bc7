//! Seeded generators of k-edge-deficient temporal graphs.
//!
//! Randomness comes from ChaCha8 seeded with the spec's `seed`. Stream 0
//! builds the witness tree; stream `t` drives snapshot `t`. Output depends
//! only on the spec.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Snapshot, SpanningTree, TemporalGraph, UnionFind, Vertex};
use crate::roundabout::{eliminate_redundant, movement_step, step_budget, RoundaboutState};
use crate::tour::build_dfs_tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TreeShape {
    Path,
    Star,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Connectivity {
    /// Every snapshot connected.
    PerSnapshot,
    /// Snapshots at offsets `0..n-1` of every period of `Δ` are connected,
    /// so each `Δ`-window holds `n - 1` connected snapshots. Needs
    /// `Δ ≥ n - 1`.
    DeltaOnly(usize),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenSpec {
    pub n: usize,
    pub lifetime: usize,
    pub k: usize,
    pub seed: u64,
    pub tree_shape: TreeShape,
    pub connectivity: Connectivity,
    pub extra_edge_rate: f64,
}

impl GenSpec {
    pub fn new(n: usize, lifetime: usize, k: usize, seed: u64) -> Self {
        GenSpec {
            n,
            lifetime,
            k,
            seed,
            tree_shape: TreeShape::Random,
            connectivity: Connectivity::PerSnapshot,
            extra_edge_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n == 0 || self.lifetime == 0 {
            return bad("n and lifetime must be positive".into());
        }
        if self.k > self.n - 1 {
            return bad(format!("k = {} exceeds n - 1 = {}", self.k, self.n - 1));
        }
        if !(0.0..=1.0).contains(&self.extra_edge_rate) {
            return bad(format!(
                "extra edge rate {} outside [0, 1]",
                self.extra_edge_rate
            ));
        }
        if let Connectivity::DeltaOnly(delta) = self.connectivity {
            if delta == 0 || delta + 1 < self.n {
                return bad(format!(
                    "delta-only connectivity needs Δ ≥ n - 1, got {delta}"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: TemporalGraph,
    pub witness: SpanningTree,
    /// Snapshots where a removal was undone because no bridge existed.
    pub fallbacks: usize,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn build_tree(n: usize, shape: TreeShape, rng: &mut ChaCha8Rng) -> SpanningTree {
    let edges = match shape {
        TreeShape::Path => (1..n).map(|v| Edge::new(v - 1, v)).collect(),
        TreeShape::Star => (1..n).map(|v| Edge::new(0, v)).collect(),
        TreeShape::Random => {
            // random recursive tree over a random labelling
            let mut label: Vec<Vertex> = (0..n).collect();
            for i in (1..n).rev() {
                label.swap(i, rng.random_range(0..=i));
            }
            (1..n)
                .map(|i| Edge::new(label[i], label[rng.random_range(0..i)]))
                .collect()
        }
    };
    SpanningTree::new(n, edges).expect("generated edges form a tree")
}

/// Component id per vertex of the tree minus `removed`.
fn components(tree: &SpanningTree, removed: &[Edge]) -> Vec<Vec<Vertex>> {
    let n = tree.vertex_count();
    let mut uf = UnionFind::new(n);
    for &e in tree.edges() {
        if !removed.contains(&e) {
            uf.union(e.lo(), e.hi());
        }
    }
    let mut groups: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = uf.find(v);
        groups[r].push(v);
    }
    let mut by_vertex = vec![Vec::new(); n];
    for g in groups.into_iter().filter(|g| !g.is_empty()) {
        for &v in &g {
            by_vertex[v] = g.clone();
        }
    }
    by_vertex
}

/// For each removed tree edge, one random chord joining the two components
/// it used to connect; removals with no possible chord are undone. Returns
/// the chords and the number of undone removals.
fn bridge(
    tree: &SpanningTree,
    removed: &mut Vec<Edge>,
    rng: &mut ChaCha8Rng,
) -> (Vec<Edge>, usize) {
    let mut undone = 0;
    loop {
        let comps = components(tree, removed);
        let stuck = removed
            .iter()
            .position(|e| comps[e.lo()].len() == 1 && comps[e.hi()].len() == 1);
        match stuck {
            Some(i) => {
                removed.remove(i);
                undone += 1;
            }
            None => break,
        }
    }
    let comps = components(tree, removed);
    let chords = removed
        .iter()
        .map(|&e| {
            let (a, b) = (&comps[e.lo()], &comps[e.hi()]);
            // skip the removed edge's own pair
            let own = a.iter().position(|&x| x == e.lo()).unwrap() * b.len()
                + b.iter().position(|&y| y == e.hi()).unwrap();
            let mut pick = rng.random_range(0..a.len() * b.len() - 1);
            if pick >= own {
                pick += 1;
            }
            Edge::new(a[pick / b.len()], b[pick % b.len()])
        })
        .collect();
    (chords, undone)
}

fn extra_edges(n: usize, rate: f64, tree: &SpanningTree, rng: &mut ChaCha8Rng) -> Vec<Edge> {
    if rate <= 0.0 || n < 2 {
        return Vec::new();
    }
    let pairs = n * (n - 1) / 2;
    let count = Binomial::new(pairs as u64, rate)
        .expect("rate validated")
        .sample(rng) as usize;
    index::sample(rng, pairs, count)
        .into_iter()
        .map(|i| pair_at(n, i))
        .filter(|&e| !tree.contains(e))
        .collect()
}

/// `i`-th pair of `{(a, b) : a < b < n}` in lexicographic order.
fn pair_at(n: usize, mut i: usize) -> Edge {
    let mut a = 0;
    while i >= n - 1 - a {
        i -= n - 1 - a;
        a += 1;
    }
    Edge::new(a, a + 1 + i)
}

/// Every snapshot misses at most `k` witness-tree edges.
pub fn gen_random_deficient(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let n = spec.n;
    let tree = build_tree(n, spec.tree_shape, &mut stream(spec.seed, 0));
    let mut fallbacks = 0;
    let mut snapshots = Vec::with_capacity(spec.lifetime);
    for t in 1..=spec.lifetime {
        let mut rng = stream(spec.seed, t as u64);
        let count = rng.random_range(0..=spec.k);
        let mut removed: Vec<Edge> = index::sample(&mut rng, n - 1, count)
            .into_iter()
            .map(|i| tree.edges()[i])
            .collect();
        removed.sort_unstable();
        let connect = match spec.connectivity {
            Connectivity::PerSnapshot => true,
            Connectivity::DeltaOnly(delta) => (t - 1) % delta < n - 1,
            Connectivity::None => false,
        };
        let mut edges = Vec::new();
        if connect && !removed.is_empty() {
            let (chords, undone) = bridge(&tree, &mut removed, &mut rng);
            if undone > 0 {
                fallbacks += 1;
            }
            edges.extend(chords);
        }
        edges.extend(
            tree.edges()
                .iter()
                .copied()
                .filter(|e| !removed.contains(e)),
        );
        edges.extend(extra_edges(n, spec.extra_edge_rate, &tree, &mut rng));
        snapshots.push(Snapshot::new(edges));
    }
    if fallbacks > 0 {
        log::warn!("{fallbacks} snapshots kept a tree edge that could not be bridged");
    }
    Ok(Generated {
        graph: TemporalGraph::new(n, snapshots)?,
        witness: tree,
        fallbacks,
    })
}

/// Adversarial instance on the path `0 - 1 - … - (n-1)`.
///
/// A roundabout run over the path's tour is simulated alongside the
/// generator and restarted every `⌊(n-1)/k⌋` snapshots. Each snapshot drops
/// the tree edges directly ahead of the `k` agents that have moved furthest,
/// adding one chord per dropped edge so the snapshot stays connected.
pub fn gen_blocking_front(n: usize, k: usize, lifetime: usize, seed: u64) -> Result<Generated> {
    if n == 0 || lifetime == 0 || k > n.saturating_sub(1) {
        return Err(Error::InvalidSpec(format!(
            "blocking front needs n ≥ 1, lifetime ≥ 1, k ≤ n - 1 (n = {n}, k = {k})"
        )));
    }
    let tree = SpanningTree::new(n, (1..n).map(|v| Edge::new(v - 1, v)).collect())?;
    if k == 0 || n < 2 {
        let s: Snapshot = tree.edges().iter().copied().collect();
        return Ok(Generated {
            graph: TemporalGraph::new(n, vec![s; lifetime])?,
            witness: tree,
            fallbacks: 0,
        });
    }
    let tour = build_dfs_tour(&tree, 0)?;
    let period = step_budget(n, k).max(1);
    let mut state = RoundaboutState::initial(tour.len());
    let mut fallbacks = 0;
    let mut snapshots = Vec::with_capacity(lifetime);
    for t in 1..=lifetime {
        if (t - 1) % period == 0 {
            state = RoundaboutState::initial(tour.len());
        }
        let mut rng = stream(seed, t as u64);
        let mut leaders: Vec<usize> = state.active().to_vec();
        leaders.sort_by_key(|&a| (std::cmp::Reverse(state.visited(a).len()), a));
        let mut removed: Vec<Edge> = Vec::with_capacity(k);
        for a in leaders {
            if removed.len() == k {
                break;
            }
            let e = tour.edge(state.state_of(a));
            if !removed.contains(&e) {
                removed.push(e);
            }
        }
        removed.sort_unstable();
        let (chords, undone) = bridge(&tree, &mut removed, &mut rng);
        if undone > 0 {
            fallbacks += 1;
        }
        let snapshot = Snapshot::new(
            tree.edges()
                .iter()
                .copied()
                .filter(|e| !removed.contains(e))
                .chain(chords)
                .collect(),
        );
        state = eliminate_redundant(&movement_step(&state, &snapshot, &tour));
        snapshots.push(snapshot);
    }
    Ok(Generated {
        graph: TemporalGraph::new(n, snapshots)?,
        witness: tree,
        fallbacks,
    })
}
