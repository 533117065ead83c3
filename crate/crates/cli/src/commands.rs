use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use deconflict_core::casestudy::{atlanta_scenario, run_scenario_study};
use deconflict_core::scenario::{read_sample_delays, write_samples_csv, MonteCarloConfig};
use deconflict_core::scheduler::greedy_schedule_auto;
use deconflict_core::statfit::{fit_report, Family};
use deconflict_core::{
    cpa_time, forbidden_interval, greedy_schedule, min_separation_sq, per_order_table, relative_state, run_monte_carlo,
    AirspaceConfig, Error, ForbiddenInterval, Mission, Schedule, ScenarioFile, SeparationConfig,
};
use serde::Serialize;

use crate::{Cli, Command, ScenarioArgs};

pub fn run(cli: &Cli) -> Result<()> {
    let out = cli.out.as_deref();
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    match &cli.command {
        Command::SolvePair(a) => solve_pair(&a.scenario, a.first.as_deref(), a.second.as_deref(), out),
        Command::Schedule(a) => schedule(&a.scenario, a.order.as_deref(), a.horizon, out),
        Command::Optimize(a) => optimize(a, out),
        Command::Montecarlo(a) => montecarlo(a, out),
        Command::Fit(a) => fit(&a.samples, a.bins, out),
        Command::Casestudy(a) => casestudy(a.h, a.scenario.as_deref(), out),
    }
}

fn load(args: &ScenarioArgs) -> Result<(Vec<Mission>, SeparationConfig)> {
    let mut file = ScenarioFile::load(&args.scenario)?;
    if let Some(h) = args.h {
        file.separation_h = h;
        file.validate()?;
    }
    Ok((file.to_missions()?, SeparationConfig::new(file.separation_h)?))
}

fn write(out: Option<&Path>, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = out {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn write_json<T: Serialize>(out: Option<&Path>, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(out, name, &text)
}

fn find<'a>(missions: &'a [Mission], id: &str) -> Result<&'a Mission> {
    Ok(missions
        .iter()
        .find(|m| m.id() == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))?)
}

#[derive(Serialize)]
struct Tangency {
    delta_s: f64,
    min_separation_m: Option<f64>,
}

#[derive(Serialize)]
struct PairReport {
    first: String,
    second: String,
    h_m: f64,
    interval: ForbiddenInterval,
    /// Closest-approach time after the second departure when both leave together.
    cpa_time_s: Option<f64>,
    tangency: Vec<Tangency>,
}

fn solve_pair(args: &ScenarioArgs, first: Option<&str>, second: Option<&str>, out: Option<&Path>) -> Result<()> {
    let (missions, cfg) = load(args)?;
    let pick = |id: Option<&str>, fallback: usize| -> Result<&Mission> {
        match id {
            Some(id) => find(&missions, id),
            None => missions.get(fallback).ok_or_else(|| {
                Error::Scenario("solve-pair needs at least two missions".to_string()).into()
            }),
        }
    };
    let (a, b) = (pick(first, 0)?, pick(second, 1)?);
    let interval = forbidden_interval(a, b, &cfg)?;
    let cpa = cpa_time(&relative_state(a, b, 0.0)).ok();
    let tangency: Vec<Tangency> = if interval.is_empty() {
        Vec::new()
    } else {
        [interval.lo, interval.hi]
            .into_iter()
            .map(|delta| {
                let d = min_separation_sq(a, 0.0, b, delta).dist_sq();
                Tangency {
                    delta_s: delta,
                    min_separation_m: d.is_finite().then(|| d.sqrt()),
                }
            })
            .collect()
    };

    println!("pair {} -> {} (h = {} m)", a.id(), b.id(), cfg.h);
    println!("forbidden interval: {interval}");
    match cpa {
        Some(t) => println!("cpa time (simultaneous departure): {t:.6} s"),
        None => println!("cpa time: undefined (zero relative velocity)"),
    }
    for t in &tangency {
        match t.min_separation_m {
            Some(d) => println!("  delay {:.6} s -> min separation {:.6} m", t.delta_s, d),
            None => println!("  delay {:.6} s -> never co-airborne", t.delta_s),
        }
    }
    write_json(
        out,
        "pair.json",
        &PairReport {
            first: a.id().to_string(),
            second: b.id().to_string(),
            h_m: cfg.h,
            interval,
            cpa_time_s: cpa,
            tangency,
        },
    )
}

#[derive(Serialize)]
struct ScheduleReport<'a> {
    h_m: f64,
    total_delay_s: f64,
    average_delay_s: f64,
    schedule: &'a Schedule,
}

fn print_schedule(s: &Schedule) {
    for id in &s.order {
        let e = s.entries.iter().find(|e| &e.id == id).expect("ordered id");
        if e.bindings.is_empty() {
            println!("  {:>8}  {:>12.6} s", e.id, e.departure);
        } else {
            println!("  {:>8}  {:>12.6} s  bound by {}", e.id, e.departure, e.bindings.join(", "));
        }
    }
}

fn schedule(args: &ScenarioArgs, order: Option<&[String]>, horizon: Option<f64>, out: Option<&Path>) -> Result<()> {
    let (missions, cfg) = load(args)?;
    let ordered: Vec<Mission> = match order {
        Some(ids) => {
            if ids.len() != missions.len() {
                return Err(Error::InvalidConfig(format!(
                    "order lists {} ids but the scenario has {} missions",
                    ids.len(),
                    missions.len()
                ))
                .into());
            }
            ids.iter().map(|id| find(&missions, id).cloned()).collect::<Result<_>>()?
        }
        None => missions,
    };
    let s = match horizon {
        Some(horizon) => greedy_schedule(&ordered, &cfg, horizon)?,
        None => greedy_schedule_auto(&ordered, &cfg)?,
    };
    let total = s.total_delay();
    let average = deconflict_core::average_delay(&s);
    println!("order {}", s.order.join(","));
    print_schedule(&s);
    println!("total delay {total:.6} s, average {average:.6} s");
    write_json(
        out,
        "schedule.json",
        &ScheduleReport {
            h_m: cfg.h,
            total_delay_s: total,
            average_delay_s: average,
            schedule: &s,
        },
    )
}

#[derive(Serialize)]
struct OptimizeReport<'a> {
    h_m: f64,
    orders_evaluated: usize,
    best_order: &'a [String],
    best_schedule: &'a Schedule,
    best_total_delay_s: f64,
    best_average_delay_s: f64,
    worst_order: &'a [String],
    worst_total_delay_s: f64,
    efficiency: f64,
    tied_optima: Vec<&'a [String]>,
}

fn optimize(args: &ScenarioArgs, out: Option<&Path>) -> Result<()> {
    let (missions, cfg) = load(args)?;
    let table = per_order_table(&missions, &cfg)?;
    let (best, worst) = (table.best(), table.worst());
    let optima = table.optima();

    println!("{} orders evaluated", table.len());
    println!("best order {} (total {:.6} s, average {:.6} s)", best.order.join(","), best.total_delay, best.average_delay);
    print_schedule(&best.schedule);
    println!("worst order {} (total {:.6} s)", worst.order.join(","), worst.total_delay);
    println!("efficiency {:.2}%", 100.0 * table.efficiency());
    if optima.len() > 1 {
        println!("{} orders tie at the optimum", optima.len());
    }

    let mut csv = String::from("order,total_delay_s,average_delay_s\n");
    for row in &table.rows {
        csv.push_str(&format!("{},{},{}\n", row.order.join(" "), row.total_delay, row.average_delay));
    }
    write(out, "orders.csv", &csv)?;
    write_json(
        out,
        "optimize.json",
        &OptimizeReport {
            h_m: cfg.h,
            orders_evaluated: table.len(),
            best_order: &best.order,
            best_schedule: &best.schedule,
            best_total_delay_s: best.total_delay,
            best_average_delay_s: best.average_delay,
            worst_order: &worst.order,
            worst_total_delay_s: worst.total_delay,
            efficiency: table.efficiency(),
            tied_optima: optima.iter().map(|r| r.order.as_slice()).collect(),
        },
    )
}

fn montecarlo(args: &crate::MonteCarloArgs, out: Option<&Path>) -> Result<()> {
    let cfg = MonteCarloConfig {
        airspace: AirspaceConfig {
            side: args.side,
            h: args.h,
            speed_range: (args.speed_min, args.speed_max),
            n_agents: args.agents,
            seed: args.seed,
        },
        n_topologies: args.topologies,
        mode: args.mode,
    };
    let report = run_monte_carlo(&cfg)?;
    let mut csv = Vec::new();
    write_samples_csv(&mut csv, &report.samples, args.mode)?;
    write(out, "samples.csv", std::str::from_utf8(&csv)?)?;

    println!(
        "{} samples from {} topologies ({} skipped)",
        report.samples.len(),
        args.topologies - report.rejected.len(),
        report.rejected.len()
    );
    fit_and_report(&report.delays(), args.bins, out)
}

fn fit(samples: &Path, bins: usize, out: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(samples)
        .map_err(|e| Error::Scenario(format!("{}: {e}", samples.display())))?;
    let delays = read_sample_delays(&text)?;
    fit_and_report(&delays, bins, out)
}

fn fit_and_report(delays: &[f64], bins: usize, out: Option<&Path>) -> Result<()> {
    let report = fit_report(delays, &Family::ALL, bins)?;
    let s = &report.summary;
    println!("n = {}, mean {:.6} s, std {:.6} s", s.count, s.mean, s.std_dev);
    if report.excluded_nonpositive > 0 {
        println!("{} zero-delay samples excluded from fitting", report.excluded_nonpositive);
    }
    for c in &report.candidates {
        println!("  {:<10} ssr {:.6}", c.family().name(), c.ssr);
    }
    println!("best fit: {}", report.best.family().name());
    write_json(out, "fit.json", &report)
}

fn casestudy(h: f64, scenario: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let mut file = match scenario {
        Some(path) => ScenarioFile::load(path)?,
        None => atlanta_scenario(h),
    };
    file.separation_h = h;
    file.validate()?;
    let r = run_scenario_study(&file)?;

    println!("h = {} m, {} orders evaluated", r.h_m, r.orders_evaluated);
    println!("optimal order {}", r.best_order.join(","));
    for f in &r.best_departures {
        println!("  flight {:>4}  {:>8.4} min", f.id, f.departure_min);
    }
    println!(
        "total {:.4} min, average {:.4} min; worst order {} total {:.4} min",
        r.best_total_min,
        r.best_average_min,
        r.worst_order.join(","),
        r.worst_total_min
    );
    println!("efficiency {:.2}%", 100.0 * r.efficiency);
    println!("tied optimal orders ({}):", r.tied_optima.len());
    for o in &r.tied_optima {
        println!("  {}", o.join(","));
    }
    write_json(out, "casestudy.json", &r)
}
