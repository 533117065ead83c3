//! Bundled four-flight scenario over the Greater Atlanta metro area.
//!
//! Eight vertiports, four missions, cruise speeds in mph. The separation
//! radius is not part of the fixture and has to be supplied.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geo::seconds_to_minutes;
use crate::kinematics::SeparationConfig;
use crate::optimizer::{per_order_table, tied};
use crate::scenario_file::ScenarioFile;

pub const ATLANTA_JSON: &str = include_str!("../data/atlanta.json");

/// The bundled scenario with separation radius `h` (meters).
pub fn atlanta_scenario(h: f64) -> ScenarioFile {
    let mut s = ScenarioFile::from_json(ATLANTA_JSON).expect("bundled fixture parses");
    s.separation_h = h;
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightRow {
    pub id: String,
    pub departure_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub h_m: f64,
    pub orders_evaluated: usize,
    pub best_order: Vec<String>,
    /// Departures of the best order, listed in flight order.
    pub best_departures: Vec<FlightRow>,
    pub best_total_min: f64,
    pub best_average_min: f64,
    pub worst_order: Vec<String>,
    pub worst_total_min: f64,
    /// `1 - best / worst`.
    pub efficiency: f64,
    pub tied_optima: Vec<Vec<String>>,
}

pub fn run_scenario_study(scenario: &ScenarioFile) -> Result<CaseStudyReport> {
    let missions = scenario.to_missions()?;
    let cfg = SeparationConfig::new(scenario.separation_h)?;
    let table = per_order_table(&missions, &cfg)?;
    let best = table.best();
    let worst = table.worst();
    let best_departures = best
        .order
        .iter()
        .map(|id| FlightRow {
            id: id.clone(),
            departure_min: seconds_to_minutes(best.schedule.departure_of(id).expect("id in schedule")),
        })
        .collect();
    Ok(CaseStudyReport {
        h_m: scenario.separation_h,
        orders_evaluated: table.len(),
        best_order: best.order.clone(),
        best_departures,
        best_total_min: seconds_to_minutes(best.total_delay),
        best_average_min: seconds_to_minutes(best.average_delay),
        worst_order: worst.order.clone(),
        worst_total_min: seconds_to_minutes(worst.total_delay),
        efficiency: table.efficiency(),
        tied_optima: table.optima().into_iter().map(|r| r.order.clone()).collect(),
    })
}

pub fn run_case_study(h: f64) -> Result<CaseStudyReport> {
    run_scenario_study(&atlanta_scenario(h))
}

/// Published optimum: flight id and departure in minutes.
pub const PUBLISHED_DEPARTURES_MIN: [(&str, f64); 4] =
    [("03", 0.0), ("02", 5.2), ("01", 5.2), ("04", 10.3)];
pub const PUBLISHED_BEST_TOTAL_MIN: f64 = 20.6769;
pub const PUBLISHED_WORST_TOTAL_MIN: f64 = 46.5231;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h_m: f64,
    /// Largest per-flight deviation from the published departures, minutes.
    pub max_departure_dev_min: f64,
    pub best_total_min: f64,
    pub worst_total_min: f64,
    pub first_flight: String,
    pub tied_optima: usize,
    pub report: CaseStudyReport,
}

impl SweepRow {
    pub fn matches_published(&self, tol_min: f64) -> bool {
        self.max_departure_dev_min <= tol_min
    }
}

/// Evaluates the case study at each radius in `hs` and compares the optimum
/// with the published departures.
pub fn sweep(hs: &[f64]) -> Result<Vec<SweepRow>> {
    hs.iter()
        .map(|&h| {
            let report = run_case_study(h)?;
            let dev = PUBLISHED_DEPARTURES_MIN
                .iter()
                .map(|(id, t)| {
                    let got = report
                        .best_departures
                        .iter()
                        .find(|r| r.id == *id)
                        .map(|r| r.departure_min)
                        .unwrap_or(f64::INFINITY);
                    (got - t).abs()
                })
                .fold(0.0, f64::max);
            Ok(SweepRow {
                h_m: h,
                max_departure_dev_min: dev,
                best_total_min: report.best_total_min,
                worst_total_min: report.worst_total_min,
                first_flight: report.best_order[0].clone(),
                tied_optima: report.tied_optima.len(),
                report,
            })
        })
        .collect()
}

/// Whether `order` is among the tied optima of `report`.
pub fn has_tied_order(report: &CaseStudyReport, order: &[&str]) -> bool {
    report
        .tied_optima
        .iter()
        .any(|o| o.iter().map(String::as_str).eq(order.iter().copied()))
}

/// Whether two totals tie under the optimizer's tolerance.
pub fn totals_tie(a: f64, b: f64) -> bool {
    tied(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_all_orders() {
        let r = run_case_study(500.0).unwrap();
        assert_eq!(r.orders_evaluated, 24);
        assert_eq!(r.best_departures.len(), 4);
        assert!(r.best_total_min <= r.worst_total_min);
    }

    #[test]
    fn negligible_separation_means_no_delay() {
        let r = run_case_study(0.001).unwrap();
        assert_eq!(r.best_total_min, 0.0);
        assert!(r.best_departures.iter().all(|f| f.departure_min == 0.0));
    }
}
