//! The roundabout process: one virtual agent per tour position, all
//! advancing along the tour through the same snapshot sequence, with
//! agents whose visited arc is covered by the others dropped after every
//! move.
//!
//! Agent `a_i` starts at state `i`, so agent ids and initial states
//! coincide. Only active agents are simulated.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Snapshot, TemporalGraph, Time};
use crate::tour::{CircularInterval, DfsTour};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundaboutState {
    cycle: usize,
    step: usize,
    /// Active agent ids, ascending.
    active: Vec<usize>,
    /// Current state per agent (index `agent - 1`).
    state: Vec<usize>,
    /// Moves made per agent; the visited arc has `moves + 1` positions.
    moves: Vec<usize>,
}

impl RoundaboutState {
    /// `s_i(0) = i`, every agent active.
    pub fn initial(cycle: usize) -> Self {
        RoundaboutState {
            cycle,
            step: 0,
            active: (1..=cycle).collect(),
            state: (1..=cycle).collect(),
            moves: vec![0; cycle],
        }
    }

    /// A configuration with the given `(agent, moves)` pairs active.
    pub fn from_moves(cycle: usize, step: usize, agents: &[(usize, usize)]) -> Self {
        let mut s = RoundaboutState {
            cycle,
            step,
            active: Vec::with_capacity(agents.len()),
            state: (1..=cycle).collect(),
            moves: vec![0; cycle],
        };
        for &(agent, moves) in agents {
            assert!(
                agent >= 1 && agent <= cycle,
                "agent {agent} outside 1..={cycle}"
            );
            s.active.push(agent);
            s.moves[agent - 1] = moves;
            s.state[agent - 1] = (agent - 1 + moves) % cycle + 1;
        }
        s.active.sort_unstable();
        s.active.dedup();
        s
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn state_of(&self, agent: usize) -> usize {
        self.state[agent - 1]
    }

    /// Current states of the active agents, in agent order.
    pub fn states(&self) -> Vec<usize> {
        self.active.iter().map(|&a| self.state[a - 1]).collect()
    }

    /// `D_i(t) = ⟨i..s_i(t)⟩`.
    pub fn visited(&self, agent: usize) -> CircularInterval {
        CircularInterval::from_len(agent, self.moves[agent - 1] + 1, self.cycle)
    }

    /// How many active agents visited each position (index `pos - 1`).
    fn multiplicity(&self) -> Vec<usize> {
        let mut count = vec![0usize; self.cycle];
        for &a in &self.active {
            for p in self.visited(a).positions() {
                count[p - 1] += 1;
            }
        }
        count
    }

    /// Lemma-level invariants that hold after every elimination phase
    /// regardless of the deficiency bound.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let count = self.multiplicity();
        if let Some(p) = count.iter().position(|&c| c == 0) {
            return Err(format!("position {} not covered", p + 1));
        }
        if let Some(p) = count.iter().position(|&c| c > 2) {
            return Err(format!(
                "position {} visited by {} active agents",
                p + 1,
                count[p]
            ));
        }
        let mut states = self.states();
        states.sort_unstable();
        if let Some(w) = states.windows(2).find(|w| w[0] == w[1]) {
            return Err(format!("two active agents share state {}", w[0]));
        }
        let mass: usize = self.active.iter().map(|&a| self.visited(a).len()).sum();
        if mass + self.active.len() > 2 * self.cycle {
            return Err(format!(
                "visited mass {mass} exceeds 2N - |A| = {}",
                2 * self.cycle - self.active.len()
            ));
        }
        for &a in &self.active {
            if self.visited(a).positions().all(|p| count[p - 1] >= 2) {
                return Err(format!("agent {a} is redundant"));
            }
        }
        Ok(())
    }

    /// Each survivor covers the arc up to the next survivor's start.
    pub fn check_interval_cover(&self) -> std::result::Result<(), String> {
        let s = &self.active;
        for (idx, &p) in s.iter().enumerate() {
            let q = s[(idx + 1) % s.len()];
            let gap = if s.len() == 1 {
                CircularInterval::full(self.cycle)
            } else {
                CircularInterval::half_open(p, q, self.cycle)
            };
            let d = self.visited(p);
            if let Some(x) = gap.positions().find(|&x| !d.contains(x)) {
                return Err(format!("agent {p} misses position {x} before agent {q}"));
            }
        }
        Ok(())
    }
}

/// Advances every active agent at state `q` iff tour edge `e_q` is present.
pub fn movement_step(
    state: &RoundaboutState,
    snapshot: &Snapshot,
    tour: &DfsTour,
) -> RoundaboutState {
    let mut next = state.clone();
    next.step += 1;
    for &a in &state.active {
        let q = state.state[a - 1];
        if snapshot.contains(tour.edge(q)) {
            next.state[a - 1] = tour.next(q);
            next.moves[a - 1] += 1;
        }
    }
    next
}

/// Removes redundant agents, scanning in ascending agent order and always
/// removing the first redundant agent found.
///
/// Removing an agent only shrinks the union seen by the others, so an agent
/// found non-redundant stays so for the rest of the phase; a single pass
/// therefore yields the same survivors as restarting after every removal.
pub fn eliminate_redundant(state: &RoundaboutState) -> RoundaboutState {
    let mut count = state.multiplicity();
    let mut survivors = Vec::with_capacity(state.active.len());
    for &a in &state.active {
        let arc = state.visited(a);
        if arc.positions().all(|p| count[p - 1] >= 2) {
            for p in arc.positions() {
                count[p - 1] -= 1;
            }
        } else {
            survivors.push(a);
        }
    }
    RoundaboutState {
        active: survivors,
        ..state.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveRecord {
    pub step: usize,
    pub agent: usize,
    pub moved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    /// Time step of the snapshot used.
    pub snapshot: Time,
    /// `(agent, state)` for every agent active after elimination.
    pub active: Vec<(usize, usize)>,
}

/// Complete record of one roundabout run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundaboutTrace {
    cycle: usize,
    steps: Vec<StepRecord>,
    moves: Vec<MoveRecord>,
    last: RoundaboutState,
}

impl RoundaboutTrace {
    pub fn cycle(&self) -> usize {
        self.cycle
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    /// Movement log: one entry per agent active at the start of a step.
    pub fn moves(&self) -> &[MoveRecord] {
        &self.moves
    }

    pub fn final_state(&self) -> &RoundaboutState {
        &self.last
    }

    /// Initial states `S` of the surviving agents, ascending.
    pub fn survivors(&self) -> &[usize] {
        self.last.active()
    }

    pub fn is_survivor(&self, agent: usize) -> bool {
        self.last.active.binary_search(&agent).is_ok()
    }

    pub fn visited(&self, agent: usize) -> CircularInterval {
        self.last.visited(agent)
    }

    /// Per-step moved flags of one agent (it must have survived).
    pub fn moves_of(&self, agent: usize) -> Vec<bool> {
        let mut out = vec![false; self.steps.len()];
        for m in self.moves.iter().filter(|m| m.agent == agent) {
            out[m.step - 1] = m.moved;
        }
        out
    }

    /// Re-runs the movement log from `s_i(0) = i`; returns final
    /// `(agent, state)` for the survivors.
    pub fn replay(&self) -> Vec<(usize, usize)> {
        let mut state: Vec<usize> = (1..=self.cycle).collect();
        for m in &self.moves {
            if m.moved {
                state[m.agent - 1] = state[m.agent - 1] % self.cycle + 1;
            }
        }
        self.survivors()
            .iter()
            .map(|&a| (a, state[a - 1]))
            .collect()
    }

    /// One line per step: `t <snapshot> |A|=<count> states=<csv>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            let states: Vec<String> = s.active.iter().map(|(_, q)| q.to_string()).collect();
            writeln!(
                out,
                "{} {} |A|={} states={}",
                i + 1,
                s.snapshot,
                s.active.len(),
                states.join(",")
            )
            .unwrap();
        }
        out
    }
}

/// Step budget `⌊N / 2k⌋ = ⌊(n - 1) / k⌋`.
pub fn step_budget(n: usize, k: usize) -> usize {
    assert!(k >= 1, "deficiency bound must be positive");
    n.saturating_sub(1) / k
}

/// Runs `steps` rounds of movement and elimination on the first `steps`
/// entries of `snapshots`.
pub fn run_roundabout(
    graph: &TemporalGraph,
    tour: &DfsTour,
    snapshots: &[Time],
    steps: usize,
) -> Result<RoundaboutTrace> {
    simulate(graph, tour, snapshots, steps, None)
}

/// Like [`run_roundabout`], but verifies after every step the coverage,
/// distinctness, multiplicity, mass and interval-cover properties, and the
/// shrinkage bound `t (|A| - 2k) ≤ 2N - |A|` for snapshots missing at most
/// `k` tree edges. Snapshots with more missing edges are rejected.
pub fn run_roundabout_checked(
    graph: &TemporalGraph,
    tour: &DfsTour,
    snapshots: &[Time],
    steps: usize,
    k: usize,
) -> Result<RoundaboutTrace> {
    simulate(graph, tour, snapshots, steps, Some(k))
}

fn simulate(
    graph: &TemporalGraph,
    tour: &DfsTour,
    snapshots: &[Time],
    steps: usize,
    checked: Option<usize>,
) -> Result<RoundaboutTrace> {
    if snapshots.len() < steps {
        return Err(Error::TooFewSnapshots {
            needed: steps,
            available: snapshots.len(),
        });
    }
    let cycle = tour.len();
    let mut state = RoundaboutState::initial(cycle);
    let mut records = Vec::with_capacity(steps);
    let mut log = Vec::new();

    for (i, &t) in snapshots[..steps].iter().enumerate() {
        let step = i + 1;
        let snapshot = graph.snapshot(t);
        if let Some(k) = checked {
            let missing = tour
                .tree_edges()
                .iter()
                .filter(|&&e| !snapshot.contains(e))
                .count();
            if missing > k {
                return Err(Error::InvariantViolated {
                    step,
                    message: format!("snapshot {t} misses {missing} > {k} tree edges"),
                });
            }
        }
        let moved = movement_step(&state, snapshot, tour);
        log.extend(state.active.iter().map(|&a| MoveRecord {
            step,
            agent: a,
            moved: moved.moves[a - 1] > state.moves[a - 1],
        }));
        state = eliminate_redundant(&moved);

        if let Some(k) = checked {
            verify_step(&state, step, k)?;
        } else if cfg!(debug_assertions) {
            debug_assert_eq!(state.check_invariants(), Ok(()), "step {step}");
        }
        records.push(StepRecord {
            snapshot: t,
            active: state
                .active
                .iter()
                .map(|&a| (a, state.state[a - 1]))
                .collect(),
        });
    }

    Ok(RoundaboutTrace {
        cycle,
        steps: records,
        moves: log,
        last: state,
    })
}

fn verify_step(state: &RoundaboutState, step: usize, k: usize) -> Result<()> {
    let fail = |message: String| Error::InvariantViolated { step, message };
    state.check_invariants().map_err(fail)?;
    state.check_interval_cover().map_err(fail)?;
    let n_cycle = state.cycle;
    let r = state.active.len();
    if r > 2 * k && step * (r - 2 * k) > 2 * n_cycle - r {
        return Err(fail(format!("{r} agents still active after {step} steps")));
    }
    if step >= n_cycle / (2 * k) && r > 6 * k {
        return Err(fail(format!("{r} > 6k agents active after {step} steps")));
    }
    Ok(())
}
