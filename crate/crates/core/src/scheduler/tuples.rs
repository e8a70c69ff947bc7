//! Choosing one surviving agent per epoch so that the chosen agents' visited
//! arcs jointly cover the whole tour.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::roundabout::RoundaboutTrace;
use crate::tour::{covered_by_union, CircularInterval};

/// Common refinement of the arc partitions induced by the survivor sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedIntervals {
    /// Sorted union `M` of all survivor sets.
    pub points: Vec<usize>,
    /// `⟨m_i..m_{i+1})`, cyclically; a single point yields the full cycle.
    pub intervals: Vec<CircularInterval>,
}

impl RefinedIntervals {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

pub fn common_refinement<S: AsRef<[usize]>>(start_sets: &[S], cycle: usize) -> RefinedIntervals {
    let mut points: Vec<usize> = start_sets
        .iter()
        .flat_map(|s| s.as_ref().iter().copied())
        .collect();
    points.sort_unstable();
    points.dedup();
    let intervals = match points.len() {
        0 => Vec::new(),
        1 => vec![CircularInterval::full(cycle)],
        d => (0..d)
            .map(|i| CircularInterval::half_open(points[i], points[(i + 1) % d], cycle))
            .collect(),
    };
    RefinedIntervals { points, intervals }
}

fn chosen_arcs(tuple: &[usize], traces: &[RoundaboutTrace]) -> Result<Vec<CircularInterval>> {
    if tuple.len() != traces.len() {
        return Err(Error::TupleArity {
            expected: traces.len(),
            got: tuple.len(),
        });
    }
    tuple
        .iter()
        .zip(traces)
        .enumerate()
        .map(|(j, (&s, trace))| {
            if trace.is_survivor(s) {
                Ok(trace.visited(s))
            } else {
                Err(Error::NotASurvivor {
                    epoch: j + 1,
                    state: s,
                })
            }
        })
        .collect()
}

/// Whether the chosen agents' visited arcs cover every tour position.
pub fn is_covering_tuple(
    tuple: &[usize],
    traces: &[RoundaboutTrace],
    cycle: usize,
) -> Result<bool> {
    let arcs = chosen_arcs(tuple, traces)?;
    Ok(covered_by_union(
        &CircularInterval::full(cycle),
        &arcs,
        cycle,
    ))
}

/// The stricter per-interval condition: every refined interval lies inside
/// the arc of a single chosen agent. Implies [`is_covering_tuple`].
pub fn is_interval_covering_tuple(
    tuple: &[usize],
    traces: &[RoundaboutTrace],
    refined: &RefinedIntervals,
) -> Result<bool> {
    let arcs = chosen_arcs(tuple, traces)?;
    Ok(refined.intervals.iter().all(|interval| {
        arcs.iter()
            .any(|arc| covered_by_union(interval, std::slice::from_ref(arc), arc.cycle()))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleStrategy {
    LasVegas { seed: u64, max_attempts: usize },
    Enumerate { cap: u128 },
}

impl TupleStrategy {
    pub const DEFAULT_MAX_ATTEMPTS: usize = 10_000;
    pub const DEFAULT_CAP: u128 = 1_000_000;

    pub fn las_vegas(seed: u64) -> Self {
        TupleStrategy::LasVegas {
            seed,
            max_attempts: Self::DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn enumerate() -> Self {
        TupleStrategy::Enumerate {
            cap: Self::DEFAULT_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleChoice {
    pub tuple: Vec<usize>,
    /// Tuples tested, including the successful one.
    pub attempts: usize,
}

/// `Π |S^(j)|`, saturating.
pub fn tuple_space_size(traces: &[RoundaboutTrace]) -> u128 {
    traces.iter().fold(1u128, |acc, t| {
        acc.saturating_mul(t.survivors().len() as u128)
    })
}

pub fn find_covering_tuple(
    traces: &[RoundaboutTrace],
    refined: &RefinedIntervals,
    strategy: TupleStrategy,
) -> Result<TupleChoice> {
    let cycle = traces.first().map_or(0, |t| t.cycle());
    debug_assert!(refined.points.iter().all(|&p| p >= 1 && p <= cycle));
    match strategy {
        TupleStrategy::LasVegas { seed, max_attempts } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for attempt in 1..=max_attempts {
                let tuple: Vec<usize> = traces
                    .iter()
                    .map(|t| {
                        let s = t.survivors();
                        s[rng.random_range(0..s.len())]
                    })
                    .collect();
                if is_covering_tuple(&tuple, traces, cycle)? {
                    return Ok(TupleChoice {
                        tuple,
                        attempts: attempt,
                    });
                }
            }
            Err(Error::AttemptsExhausted {
                attempts: max_attempts,
            })
        }
        TupleStrategy::Enumerate { cap } => {
            let tuples = tuple_space_size(traces);
            if tuples > cap {
                return Err(Error::EnumerationCapExceeded { tuples, cap });
            }
            let mut odometer = vec![0usize; traces.len()];
            let mut attempts = 0;
            loop {
                attempts += 1;
                let tuple: Vec<usize> = odometer
                    .iter()
                    .zip(traces)
                    .map(|(&i, t)| t.survivors()[i])
                    .collect();
                if is_covering_tuple(&tuple, traces, cycle)? {
                    return Ok(TupleChoice { tuple, attempts });
                }
                if !advance(&mut odometer, traces) {
                    return Err(Error::NoCoveringTuple);
                }
            }
        }
    }
}

/// Lexicographic successor, last coordinate fastest.
fn advance(odometer: &mut [usize], traces: &[RoundaboutTrace]) -> bool {
    for j in (0..odometer.len()).rev() {
        odometer[j] += 1;
        if odometer[j] < traces[j].survivors().len() {
            return true;
        }
        odometer[j] = 0;
    }
    false
}

/// Visits every tuple of `S^(1) × … × S^(ρ)` in lexicographic order.
pub fn for_each_tuple(traces: &[RoundaboutTrace], mut f: impl FnMut(&[usize])) {
    if traces.iter().any(|t| t.survivors().is_empty()) {
        return;
    }
    let mut odometer = vec![0usize; traces.len()];
    let mut tuple = vec![0usize; traces.len()];
    loop {
        for (j, (&i, t)) in odometer.iter().zip(traces).enumerate() {
            tuple[j] = t.survivors()[i];
        }
        f(&tuple);
        if !advance(&mut odometer, traces) {
            return;
        }
    }
}
