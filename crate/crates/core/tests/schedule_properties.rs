mod common;

use common::missions;
use deconflict_core::optimizer::tied;
use deconflict_core::oracle::{min_distance, schedule_min_distance};
use deconflict_core::scheduler::{default_horizon, greedy_schedule_auto, PairTable};
use deconflict_core::{greedy_schedule, per_order_table, SeparationConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_schedule_is_safe(ms in missions(5), h in 0.5f64..3.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let s = greedy_schedule_auto(&ms, &cfg).unwrap();
        let d = schedule_min_distance(&ms, &s.departures(), 0.01);
        prop_assert!(d >= h - 1e-3, "min distance {} below {}", d, h);
    }

    #[test]
    fn greedy_departures_are_earliest(ms in missions(5), h in 0.5f64..3.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let s = greedy_schedule_auto(&ms, &cfg).unwrap();
        let deps = s.departures();
        for j in 0..ms.len() {
            let t = deps[j];
            if t == 0.0 {
                prop_assert!(s.entries[j].bindings.is_empty());
                continue;
            }
            prop_assert!(!s.entries[j].bindings.is_empty(), "delayed agent {} has no binding", j);
            // Just before its slot, the agent conflicts with someone ahead of it.
            let early = t - 1e-3;
            let clash = (0..j).any(|i| {
                min_distance(&ms[i], deps[i], &ms[j], early, 0.01).is_some_and(|d| d < h)
            });
            prop_assert!(clash, "agent {} could have left at {}", j, early);
        }
    }

    #[test]
    fn default_horizon_suffices(ms in missions(6), h in 0.5f64..5.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let pairs = PairTable::new(&ms, &cfg).unwrap();
        let horizon = default_horizon(&ms, &pairs);
        let s = greedy_schedule(&ms, &cfg, horizon).unwrap();
        prop_assert!(s.departures().iter().all(|&t| t < horizon));
    }

    #[test]
    fn optimum_dominates_every_order(ms in missions(5), h in 0.5f64..3.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let table = per_order_table(&ms, &cfg).unwrap();
        prop_assert_eq!(table.len(), 120);
        let best = table.best();
        for row in &table.rows {
            prop_assert!(best.total_delay <= row.total_delay || tied(best.total_delay, row.total_delay));
        }
        let optima = table.optima();
        prop_assert!(optima.iter().all(|r| tied(r.total_delay, best.total_delay)));
        prop_assert_eq!(&optima[0].order, &best.order);
        let d = schedule_min_distance(&ms, &best.schedule.departures(), 0.01);
        prop_assert!(d >= h - 1e-3);
    }
}
