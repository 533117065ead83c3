//! Random square-airspace topologies and the Monte Carlo delay harness.
//!
//! Vertiports sit on the perimeter of a square. Each topology pairs them so
//! that every two nominal routes cross inside the airspace, gives every
//! mission a uniform random cruise speed, and is scheduled over all flight
//! orders.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Mission, SeparationConfig, Vec2};
use crate::optimizer::{per_order_table_with, OptimizerConfig, OrderTable};
use crate::rng::SeededRng;

pub const PLACEMENT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirspaceConfig {
    /// Side of the square airspace, meters.
    pub side: f64,
    /// Separation radius, meters.
    pub h: f64,
    /// Cruise speed range, m/s.
    pub speed_range: (f64, f64),
    pub n_agents: usize,
    pub seed: u64,
}

impl Default for AirspaceConfig {
    fn default() -> Self {
        Self {
            side: 20.0,
            h: 1.5,
            speed_range: (0.66, 1.89),
            n_agents: 4,
            seed: 0,
        }
    }
}

impl AirspaceConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.side.is_finite() && self.side > 0.0) {
            return bad(format!("side must be positive, got {}", self.side));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return bad(format!("h must be positive, got {}", self.h));
        }
        let (lo, hi) = self.speed_range;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return bad(format!("invalid speed range ({lo}, {hi})"));
        }
        if self.n_agents == 0 {
            return bad("n_agents must be at least 1".to_string());
        }
        // Crude packing bound: 2N points spaced h apart along the perimeter.
        if 2.0 * self.n_agents as f64 * self.h > 4.0 * self.side {
            return bad(format!(
                "{} vertiports cannot be spaced {} m apart on a {} m square",
                2 * self.n_agents,
                self.h,
                self.side
            ));
        }
        Ok(())
    }

    pub fn separation(&self) -> SeparationConfig {
        SeparationConfig {
            h: self.h,
            ..SeparationConfig::default()
        }
    }

    /// Point at arc length `u` along the perimeter, counter-clockwise from
    /// the origin corner.
    fn perimeter_point(&self, u: f64) -> Vec2 {
        let s = self.side;
        match (u / s) as u32 {
            0 => Vec2::new(u, 0.0),
            1 => Vec2::new(s, u - s),
            2 => Vec2::new(3.0 * s - u, s),
            _ => Vec2::new(0.0, 4.0 * s - u),
        }
    }
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

/// Proper crossing of segments `p1p2` and `q1q2` (no touching, no overlap).
pub fn segments_cross(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Random missions whose routes all pairwise cross. Deterministic in `cfg.seed`.
///
/// For points on a convex boundary, all chords of a perfect matching cross
/// each other exactly when each point is matched with the one `N` positions
/// further around the boundary. That matching is built directly; placements
/// that violate spacing or leave a route running along a wall are redrawn.
pub fn generate_topology(cfg: &AirspaceConfig) -> Result<Vec<Mission>> {
    cfg.validate()?;
    let mut rng = SeededRng::new(cfg.seed);
    let n = cfg.n_agents;
    let perimeter = 4.0 * cfg.side;

    'attempt: for _ in 0..PLACEMENT_BUDGET {
        let mut arc: Vec<f64> = (0..2 * n).map(|_| rng.uniform() * perimeter).collect();
        arc.sort_by(f64::total_cmp);
        let points: Vec<Vec2> = arc.iter().map(|&u| cfg.perimeter_point(u)).collect();

        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm() < cfg.h {
                    continue 'attempt;
                }
            }
        }

        let mut routes: Vec<(Vec2, Vec2, f64)> = (0..n)
            .map(|k| {
                let (a, b) = (points[k], points[k + n]);
                let (origin, destination) = if rng.coin() { (a, b) } else { (b, a) };
                let speed = rng.uniform_in(cfg.speed_range.0, cfg.speed_range.1);
                (origin, destination, speed)
            })
            .collect();

        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&routes[i], &routes[j]);
                if !segments_cross(a.0, a.1, b.0, b.1) {
                    continue 'attempt;
                }
            }
        }

        rng.shuffle(&mut routes);
        let width = n.to_string().len().max(2);
        return routes
            .into_iter()
            .enumerate()
            .map(|(k, (o, d, v))| Mission::new(format!("{:0width$}", k + 1), o, d, v))
            .collect();
    }
    Err(Error::TopologyRejectionExhausted {
        attempts: PLACEMENT_BUDGET,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMode {
    /// One sample per topology: the optimal order's average delay.
    Optimal,
    /// One sample per topology and flight order.
    Pooled,
}

impl std::str::FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(SampleMode::Optimal),
            "pooled" => Ok(SampleMode::Pooled),
            other => Err(Error::InvalidConfig(format!("unknown sample mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelaySample {
    pub n_agents: usize,
    pub topology_index: usize,
    /// Rank of the flight order by total delay, 0 being optimal. Set in
    /// pooled mode only.
    pub order_rank: Option<usize>,
    pub average_delay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    /// Airspace template; `seed` is the base seed of the run.
    pub airspace: AirspaceConfig,
    pub n_topologies: usize,
    pub mode: SampleMode,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub samples: Vec<DelaySample>,
    /// Topology indices skipped because no valid placement was found.
    pub rejected: Vec<usize>,
}

impl MonteCarloReport {
    pub fn delays(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.average_delay).collect()
    }
}

/// Airspace configuration of topology `index` in a run seeded with `base_seed`.
pub fn topology_config(template: &AirspaceConfig, base_seed: u64, index: usize) -> AirspaceConfig {
    AirspaceConfig {
        seed: base_seed ^ index as u64,
        ..*template
    }
}

/// Generates topology `index` and evaluates every flight order on it.
pub fn run_topology(cfg: &MonteCarloConfig, index: usize) -> Result<(Vec<Mission>, OrderTable)> {
    let airspace = topology_config(&cfg.airspace, cfg.airspace.seed, index);
    let missions = generate_topology(&airspace)?;
    let table = per_order_table_with(&missions, &airspace.separation(), &OptimizerConfig::default())?;
    Ok((missions, table))
}

fn samples_for(cfg: &MonteCarloConfig, index: usize, table: &OrderTable) -> Vec<DelaySample> {
    let n_agents = cfg.airspace.n_agents;
    match cfg.mode {
        SampleMode::Optimal => vec![DelaySample {
            n_agents,
            topology_index: index,
            order_rank: None,
            average_delay: table.best().average_delay,
        }],
        SampleMode::Pooled => table
            .ranking()
            .into_iter()
            .enumerate()
            .map(|(rank, row)| DelaySample {
                n_agents,
                topology_index: index,
                order_rank: Some(rank),
                average_delay: table.rows[row].average_delay,
            })
            .collect(),
    }
}

/// Runs `cfg.n_topologies` independent topologies. Topology `k` is seeded with
/// `cfg.airspace.seed ^ k`, so the output does not depend on scheduling of
/// the parallel work.
pub fn run_monte_carlo(cfg: &MonteCarloConfig) -> Result<MonteCarloReport> {
    cfg.airspace.validate()?;
    if cfg.airspace.n_agents < 2 || cfg.airspace.n_agents > OptimizerConfig::default().agent_cap {
        return Err(Error::InvalidConfig(format!(
            "n_agents must be in [2, {}], got {}",
            OptimizerConfig::default().agent_cap,
            cfg.airspace.n_agents
        )));
    }

    let outcomes: Vec<Result<Option<Vec<DelaySample>>>> = (0..cfg.n_topologies)
        .into_par_iter()
        .map(|k| match run_topology(cfg, k) {
            Ok((_, table)) => Ok(Some(samples_for(cfg, k, &table))),
            Err(Error::TopologyRejectionExhausted { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();

    let mut report = MonteCarloReport::default();
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            Some(samples) => report.samples.extend(samples),
            None => {
                log::warn!("topology {k}: no valid placement, skipped");
                report.rejected.push(k);
            }
        }
    }
    Ok(report)
}

/// Writes samples as CSV. The `order_rank` column is present in pooled mode.
pub fn write_samples_csv<W: Write>(mut out: W, samples: &[DelaySample], mode: SampleMode) -> io::Result<()> {
    match mode {
        SampleMode::Optimal => writeln!(out, "n_agents,topology_index,average_delay_s")?,
        SampleMode::Pooled => writeln!(out, "n_agents,topology_index,order_rank,average_delay_s")?,
    }
    for s in samples {
        match (mode, s.order_rank) {
            (SampleMode::Pooled, Some(rank)) => writeln!(
                out,
                "{},{},{},{}",
                s.n_agents, s.topology_index, rank, s.average_delay
            )?,
            _ => writeln!(out, "{},{},{}", s.n_agents, s.topology_index, s.average_delay)?,
        }
    }
    Ok(())
}

/// Reads the `average_delay_s` column of a sample CSV.
pub fn read_sample_delays(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Scenario("empty sample file".to_string()))?;
    let col = header
        .split(',')
        .position(|c| c.trim() == "average_delay_s")
        .ok_or_else(|| Error::Scenario("missing average_delay_s column".to_string()))?;
    lines
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .nth(col)
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Scenario(format!("line {}: bad average_delay_s", i + 2)))
        })
        .collect()
}
