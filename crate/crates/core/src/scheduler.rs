//! Greedy earliest-feasible departure assignment for a fixed flight order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::kinematics::{forbidden_interval, ForbiddenInterval, IntervalKind, Mission, SeparationConfig};

/// A departure within this distance of a forbidden endpoint counts as bound by it.
const BINDING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub id: String,
    pub departure: f64,
    /// Earlier missions in the order whose forbidden span ends at this departure.
    pub bindings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// One entry per mission, in the order the missions were given.
    pub entries: Vec<ScheduleEntry>,
    /// Mission ids in the order they were granted departures.
    pub order: Vec<String>,
}

impl Schedule {
    pub fn departures(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.departure).collect()
    }

    pub fn total_delay(&self) -> f64 {
        self.entries.iter().map(|e| e.departure).sum()
    }

    pub fn departure_of(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.departure)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Forbidden intervals for every ordered pair of a mission set, computed once
/// and shared across all flight orders.
#[derive(Debug, Clone)]
pub struct PairTable {
    n: usize,
    intervals: Vec<ForbiddenInterval>,
}

impl PairTable {
    pub fn new(missions: &[Mission], cfg: &SeparationConfig) -> Result<Self> {
        cfg.validate()?;
        check_unique_ids(missions)?;
        let n = missions.len();
        let mut intervals = Vec::with_capacity(n * n);
        for (i, first) in missions.iter().enumerate() {
            for (j, second) in missions.iter().enumerate() {
                let f = if i == j {
                    ForbiddenInterval::EMPTY
                } else {
                    forbidden_interval(first, second, cfg)?
                };
                if f.kind == IntervalKind::Unbounded {
                    return Err(Error::UnresolvablePair {
                        first: first.id().to_string(),
                        second: second.id().to_string(),
                    });
                }
                intervals.push(f);
            }
        }
        Ok(Self { n, intervals })
    }

    /// Forbidden delays of mission `second` relative to mission `first`.
    pub fn get(&self, first: usize, second: usize) -> &ForbiddenInterval {
        &self.intervals[first * self.n + second]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Sum of the widths of the unordered pairs' forbidden intervals.
    pub fn total_width(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).width().max(0.0))
            .sum()
    }
}

pub(crate) fn check_unique_ids(missions: &[Mission]) -> Result<()> {
    let mut ids: Vec<&str> = missions.iter().map(Mission::id).collect();
    ids.sort_unstable();
    match ids.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateId(w[0].to_string())),
        None => Ok(()),
    }
}

/// Horizon that always leaves room for a conflict-free departure: every
/// flight duration, every pairwise forbidden width, and one second of slack.
pub fn default_horizon(missions: &[Mission], pairs: &PairTable) -> f64 {
    missions.iter().map(Mission::duration).sum::<f64>() + pairs.total_width() + 1.0
}

/// Schedules `order` (indices into `missions`) greedily using a precomputed
/// pair table. Each agent starts from the full horizon, has every earlier
/// agent's forbidden span (shifted by that agent's departure) removed, and
/// takes the earliest instant left.
pub fn greedy_with_table(
    missions: &[Mission],
    pairs: &PairTable,
    order: &[usize],
    horizon: f64,
) -> Result<Schedule> {
    let mut departures = vec![0.0; missions.len()];
    let mut bindings: Vec<Vec<String>> = vec![Vec::new(); missions.len()];

    for (k, &j) in order.iter().enumerate() {
        let mut workspace = IntervalSet::horizon(0.0, horizon);
        for &i in &order[..k] {
            let f = pairs.get(i, j);
            if f.kind == IntervalKind::Bounded {
                workspace = workspace.subtract_open(departures[i] + f.lo, departures[i] + f.hi);
            }
        }
        let t = workspace.earliest_opt().ok_or_else(|| Error::EmptyFeasibleSet {
            agent: missions[j].id().to_string(),
        })?;
        departures[j] = t;

        if t > 0.0 {
            for &i in &order[..k] {
                let f = pairs.get(i, j);
                if f.kind != IntervalKind::Bounded {
                    continue;
                }
                let near = |edge: f64| (departures[i] + edge - t).abs() <= BINDING_TOL * t.max(1.0);
                if near(f.lo) || near(f.hi) {
                    bindings[j].push(missions[i].id().to_string());
                }
            }
        }
    }

    let entries = missions
        .iter()
        .zip(departures)
        .zip(bindings)
        .map(|((m, departure), bindings)| ScheduleEntry {
            id: m.id().to_string(),
            departure,
            bindings,
        })
        .collect();
    Ok(Schedule {
        entries,
        order: order.iter().map(|&i| missions[i].id().to_string()).collect(),
    })
}

/// Greedy schedule for missions flown in the given order.
///
/// The returned entries follow the same order as `order`.
pub fn greedy_schedule(order: &[Mission], cfg: &SeparationConfig, horizon: f64) -> Result<Schedule> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidConfig(format!("horizon must be positive, got {horizon}")));
    }
    let pairs = PairTable::new(order, cfg)?;
    let identity: Vec<usize> = (0..order.len()).collect();
    greedy_with_table(order, &pairs, &identity, horizon)
}

/// [`greedy_schedule`] with the default horizon.
pub fn greedy_schedule_auto(order: &[Mission], cfg: &SeparationConfig) -> Result<Schedule> {
    let pairs = PairTable::new(order, cfg)?;
    let horizon = default_horizon(order, &pairs);
    let identity: Vec<usize> = (0..order.len()).collect();
    greedy_with_table(order, &pairs, &identity, horizon)
}
