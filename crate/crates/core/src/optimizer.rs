//! Exhaustive search over flight orders for the minimum total delay.
//!
//! Every permutation is scheduled greedily. Orders are enumerated
//! lexicographically by mission id and evaluated in parallel; the collected
//! table keeps that order regardless of the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Mission, SeparationConfig};
use crate::scheduler::{default_horizon, greedy_with_table, PairTable, Schedule};

pub const DEFAULT_AGENT_CAP: usize = 9;

/// Totals closer than this (seconds, scaled by magnitude) count as tied.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    pub order: Vec<String>,
    pub schedule: Schedule,
    pub total_delay: f64,
    pub average_delay: f64,
}

impl OrderResult {
    fn from_schedule(schedule: Schedule) -> Self {
        let total_delay = schedule.total_delay();
        Self {
            order: schedule.order.clone(),
            average_delay: average_delay(&schedule),
            total_delay,
            schedule,
        }
    }
}

/// Mean departure time of a schedule; zero for an empty schedule.
pub fn average_delay(schedule: &Schedule) -> f64 {
    if schedule.is_empty() {
        return 0.0;
    }
    schedule.total_delay() / schedule.len() as f64
}

pub fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Every flight order with its greedy schedule, lexicographic by mission id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderTable {
    pub rows: Vec<OrderResult>,
}

impl OrderTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn best_index(&self) -> usize {
        let min = self
            .rows
            .iter()
            .map(|r| r.total_delay)
            .fold(f64::INFINITY, f64::min);
        self.rows
            .iter()
            .position(|r| tied(r.total_delay, min))
            .expect("order table is never empty")
    }

    fn worst_index(&self) -> usize {
        let max = self
            .rows
            .iter()
            .map(|r| r.total_delay)
            .fold(f64::NEG_INFINITY, f64::max);
        self.rows
            .iter()
            .position(|r| tied(r.total_delay, max))
            .expect("order table is never empty")
    }

    /// Minimum total delay; ties go to the lexicographically smallest order.
    pub fn best(&self) -> &OrderResult {
        &self.rows[self.best_index()]
    }

    pub fn worst(&self) -> &OrderResult {
        &self.rows[self.worst_index()]
    }

    /// All orders whose total delay ties the optimum.
    pub fn optima(&self) -> Vec<&OrderResult> {
        let best = self.best().total_delay;
        self.rows.iter().filter(|r| tied(r.total_delay, best)).collect()
    }

    /// `1 - best / worst`, or zero when even the worst order has no delay.
    pub fn efficiency(&self) -> f64 {
        let worst = self.worst().total_delay;
        if worst <= 0.0 {
            0.0
        } else {
            1.0 - self.best().total_delay / worst
        }
    }

    /// Row indices sorted by total delay, ties kept in lexicographic order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by(|&a, &b| {
            self.rows[a]
                .total_delay
                .total_cmp(&self.rows[b].total_delay)
                .then(a.cmp(&b))
        });
        idx
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub agent_cap: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            agent_cap: DEFAULT_AGENT_CAP,
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// The `k`-th permutation of `items` in lexicographic order of positions.
fn nth_permutation(items: &[usize], mut k: usize) -> Vec<usize> {
    let mut pool = items.to_vec();
    let mut out = Vec::with_capacity(items.len());
    for remaining in (1..=items.len()).rev() {
        let block = factorial(remaining - 1);
        out.push(pool.remove(k / block));
        k %= block;
    }
    out
}

/// Schedules every permutation of `missions`.
pub fn per_order_table_with(
    missions: &[Mission],
    cfg: &SeparationConfig,
    opts: &OptimizerConfig,
) -> Result<OrderTable> {
    let n = missions.len();
    if n == 0 {
        return Err(Error::InvalidConfig("no missions to schedule".to_string()));
    }
    if n > opts.agent_cap {
        return Err(Error::TooManyAgents {
            n,
            cap: opts.agent_cap,
        });
    }
    let pairs = PairTable::new(missions, cfg)?;
    let horizon = default_horizon(missions, &pairs);

    let mut by_id: Vec<usize> = (0..n).collect();
    by_id.sort_by(|&a, &b| missions[a].id().cmp(missions[b].id()));

    let rows = (0..factorial(n))
        .into_par_iter()
        .map(|k| {
            let order = nth_permutation(&by_id, k);
            greedy_with_table(missions, &pairs, &order, horizon).map(OrderResult::from_schedule)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrderTable { rows })
}

pub fn per_order_table(missions: &[Mission], cfg: &SeparationConfig) -> Result<OrderTable> {
    per_order_table_with(missions, cfg, &OptimizerConfig::default())
}

/// The flight order with the smallest total delay.
pub fn optimize_order(missions: &[Mission], cfg: &SeparationConfig) -> Result<OrderResult> {
    Ok(per_order_table(missions, cfg)?.best().clone())
}
