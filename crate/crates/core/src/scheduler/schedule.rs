use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::foremost::foremost_walk;
use crate::graph::{Edge, TemporalGraph, Time, Vertex};
use crate::io::content_lines;
use crate::roundabout::RoundaboutTrace;
use crate::tour::DfsTour;

use super::epochs::EpochPlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Wait,
    /// Traverse from the first vertex to the second.
    Move(Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub time: Time,
    pub action: Action,
}

/// One explorer's actions, one entry per time step.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub start: Vertex,
    pub steps: Vec<Step>,
    /// `(first, last)` time step of every epoch.
    pub epoch_bounds: Vec<(Time, Time)>,
    /// Chosen initial state per epoch.
    pub tuple: Vec<usize>,
}

impl Schedule {
    pub fn empty(start: Vertex) -> Self {
        Schedule {
            start,
            ..Default::default()
        }
    }

    /// Number of traversals (the walk length).
    pub fn move_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.action, Action::Move(..)))
            .count()
    }

    /// Time steps from the first to the last scheduled step.
    pub fn span(&self) -> usize {
        match (self.steps.first(), self.steps.last()) {
            (Some(a), Some(b)) => b.time + 1 - a.time,
            _ => 0,
        }
    }

    /// Vertex sequence of the induced walk, `None` if discontinuous.
    pub fn walk(&self) -> Option<Vec<Vertex>> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for s in &self.steps {
            if let Action::Move(from, to) = s.action {
                if from != cur {
                    return None;
                }
                cur = to;
                out.push(cur);
            }
        }
        Some(out)
    }

    /// `start <v>` followed by `t wait` / `t move u v` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("start {}\n", self.start);
        for s in &self.steps {
            match s.action {
                Action::Wait => writeln!(out, "{} wait", s.time).unwrap(),
                Action::Move(u, v) => writeln!(out, "{} move {} {}", s.time, u, v).unwrap(),
            }
        }
        out
    }

    /// Parses the text form. Times are taken as written; ordering and
    /// feasibility are left to [`verify_schedule`].
    pub fn parse(text: &str) -> Result<Schedule> {
        let mut lines = content_lines(text);
        let (line, head) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing \"start <v>\" line"))?;
        let start = match head.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["start", v] => v
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid start vertex {v:?}")))?,
            _ => return Err(Error::parse(line, "expected \"start <v>\"")),
        };
        let num = |line: usize, s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("invalid number {s:?}")))
        };
        let mut steps = Vec::new();
        for (line, l) in lines {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let step = match fields.as_slice() {
                [t, "wait"] => Step {
                    time: num(line, t)?,
                    action: Action::Wait,
                },
                [t, "move", u, v] => Step {
                    time: num(line, t)?,
                    action: Action::Move(num(line, u)?, num(line, v)?),
                },
                _ => return Err(Error::parse(line, format!("unrecognized step {l:?}"))),
            };
            steps.push(step);
        }
        Ok(Schedule {
            start,
            steps,
            ..Default::default()
        })
    }
}

/// Builds the explorer's schedule: in every epoch, a foremost walk inside
/// the repositioning window to the chosen agent's start vertex (then
/// waiting), followed by a replay of that agent's moves on the epoch's
/// roundabout snapshots, waiting on every other step.
pub fn assemble_schedule(
    graph: &TemporalGraph,
    tour: &DfsTour,
    plan: &EpochPlan,
    traces: &[RoundaboutTrace],
    tuple: &[usize],
    start: Vertex,
) -> Result<Schedule> {
    graph.check_vertex(start)?;
    if tuple.len() != plan.epochs.len() || traces.len() != plan.epochs.len() {
        return Err(Error::TupleArity {
            expected: plan.epochs.len(),
            got: tuple.len().min(traces.len()),
        });
    }

    let mut steps = Vec::with_capacity(plan.end());
    let mut epoch_bounds = Vec::with_capacity(plan.epochs.len());
    let mut cur = start;
    for (j, ((epoch, trace), &s)) in plan.epochs.iter().zip(traces).zip(tuple).enumerate() {
        if !trace.is_survivor(s) {
            return Err(Error::NotASurvivor {
                epoch: j + 1,
                state: s,
            });
        }
        let target = tour.vertex(s);
        let (a, b) = epoch.reposition;
        let reach = foremost_walk(graph, (a, b), cur)?;
        let walk = reach.walk_to(target).ok_or(Error::RepositionFailed {
            epoch: j + 1,
            from: cur,
            target,
        })?;
        let mut hops = walk.hops.iter().peekable();
        for time in a..=b {
            let action = match hops.next_if(|(t, _)| *t == time) {
                Some(&(_, e)) => {
                    let to = e.other(cur).expect("witness walk is continuous");
                    let act = Action::Move(cur, to);
                    cur = to;
                    act
                }
                None => Action::Wait,
            };
            steps.push(Step { time, action });
        }
        debug_assert_eq!(cur, target);

        let moved = trace.moves_of(s);
        let mut state = s;
        let mut used = epoch.roundabout.iter().zip(&moved).peekable();
        for time in b + 1..=epoch.end {
            let action = match used.next_if(|(t, _)| **t == time) {
                Some((_, true)) => {
                    let next = tour.next(state);
                    let act = Action::Move(tour.vertex(state), tour.vertex(next));
                    state = next;
                    cur = tour.vertex(next);
                    act
                }
                _ => Action::Wait,
            };
            steps.push(Step { time, action });
        }
        epoch_bounds.push((a, epoch.end));
    }

    Ok(Schedule {
        start,
        steps,
        epoch_bounds,
        tuple: tuple.to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StartMismatch {
        expected: Vertex,
        found: Vertex,
    },
    VertexOutOfRange {
        time: Time,
        vertex: Vertex,
    },
    OutsideLifetime {
        time: Time,
    },
    NotIncreasing {
        time: Time,
        previous: Time,
    },
    Discontinuous {
        time: Time,
        at: Vertex,
        from: Vertex,
    },
    MissingEdge {
        time: Time,
        edge: Edge,
    },
    Unvisited {
        vertices: Vec<Vertex>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StartMismatch { expected, found } => {
                write!(f, "schedule starts at {found}, expected {expected}")
            }
            Violation::VertexOutOfRange { time, vertex } => {
                write!(f, "step {time}: vertex {vertex} out of range")
            }
            Violation::OutsideLifetime { time } => write!(f, "step {time}: outside lifetime"),
            Violation::NotIncreasing { time, previous } => {
                write!(f, "step {time}: does not follow step {previous}")
            }
            Violation::Discontinuous { time, at, from } => {
                write!(f, "step {time}: explorer is at {at} but moves from {from}")
            }
            Violation::MissingEdge { time, edge } => {
                write!(f, "step {time}: missing edge {edge}")
            }
            Violation::Unvisited { vertices } => {
                let list: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
                write!(f, "unvisited {{{}}}", list.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleReport {
    pub visited: usize,
    pub violation: Option<Violation>,
}

impl ScheduleReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Independent check of a schedule against the graph: continuity from
/// `start`, edge presence, strictly increasing steps inside the lifetime,
/// and that all vertices are visited. Reports the first violation.
pub fn verify_schedule(
    graph: &TemporalGraph,
    start: Vertex,
    schedule: &Schedule,
) -> ScheduleReport {
    let n = graph.vertex_count();
    let report = |visited: &BTreeSet<Vertex>, v| ScheduleReport {
        visited: visited.len(),
        violation: Some(v),
    };
    let mut visited = BTreeSet::new();
    if start >= n {
        return report(
            &visited,
            Violation::VertexOutOfRange {
                time: 0,
                vertex: start,
            },
        );
    }
    if schedule.start != start {
        return report(
            &visited,
            Violation::StartMismatch {
                expected: start,
                found: schedule.start,
            },
        );
    }
    visited.insert(start);
    let mut cur = start;
    let mut previous = 0;
    for step in &schedule.steps {
        let time = step.time;
        if time <= previous {
            return report(&visited, Violation::NotIncreasing { time, previous });
        }
        if time < 1 || time > graph.lifetime() {
            return report(&visited, Violation::OutsideLifetime { time });
        }
        previous = time;
        if let Action::Move(from, to) = step.action {
            if let Some(&vertex) = [from, to].iter().find(|&&v| v >= n) {
                return report(&visited, Violation::VertexOutOfRange { time, vertex });
            }
            if from != cur {
                return report(
                    &visited,
                    Violation::Discontinuous {
                        time,
                        at: cur,
                        from,
                    },
                );
            }
            let edge = Edge::new(from, to);
            if from == to || !graph.snapshot(time).contains(edge) {
                return report(&visited, Violation::MissingEdge { time, edge });
            }
            cur = to;
            visited.insert(cur);
        }
    }
    if visited.len() < n {
        let vertices = (0..n).filter(|v| !visited.contains(v)).collect();
        return report(&visited, Violation::Unvisited { vertices });
    }
    ScheduleReport {
        visited: visited.len(),
        violation: None,
    }
}
