mod common;

use common::mission;
use deconflict_core::oracle::{conflicts, min_distance};
use deconflict_core::{forbidden_interval, IntervalKind, SeparationConfig};
use proptest::prelude::*;

const DT: f64 = 0.01;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classification_matches_oracle(a in mission("a"), b in mission("b"), h in 0.3f64..4.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let f = forbidden_interval(&a, &b, &cfg).unwrap();
        prop_assert_ne!(f.kind, IntervalKind::Unbounded);
        let (lo, hi) = (-b.duration() - 1.0, a.duration() + 1.0);
        let steps = 400;
        for k in 0..=steps {
            let delta = lo + (hi - lo) * k as f64 / steps as f64;
            if !f.is_empty() && ((delta - f.lo).abs() < 1e-3 || (delta - f.hi).abs() < 1e-3) {
                continue;
            }
            prop_assert_eq!(f.contains(delta), conflicts(&a, &b, delta, h, DT), "delta {} interval {}", delta, f);
        }
    }

    #[test]
    fn mirror_symmetry(a in mission("a"), b in mission("b"), h in 0.3f64..4.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let ab = forbidden_interval(&a, &b, &cfg).unwrap();
        let ba = forbidden_interval(&b, &a, &cfg).unwrap();
        prop_assert_eq!(ab.kind, ba.kind);
        if !ab.is_empty() {
            let m = ba.mirrored();
            prop_assert!((ab.lo - m.lo).abs() < 1e-5, "{} vs {}", ab, m);
            prop_assert!((ab.hi - m.hi).abs() < 1e-5, "{} vs {}", ab, m);
        }
    }

    #[test]
    fn endpoints_are_tangent(a in mission("a"), b in mission("b"), h in 0.3f64..4.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let f = forbidden_interval(&a, &b, &cfg).unwrap();
        prop_assume!(!f.is_empty());
        for edge in [f.lo, f.hi] {
            if let Some(d) = min_distance(&a, 0.0, &b, edge, DT) {
                prop_assert!(d >= h - 1e-6, "edge {} distance {} below {}", edge, d, h);
                prop_assert!(d <= h + 1e-4, "edge {} distance {} not tangent to {}", edge, d, h);
            }
        }
    }

    #[test]
    fn larger_radius_grows_interval(a in mission("a"), b in mission("b"), h in 0.3f64..3.0, extra in 0.01f64..1.0) {
        let small = forbidden_interval(&a, &b, &SeparationConfig::new(h).unwrap()).unwrap();
        let large = forbidden_interval(&a, &b, &SeparationConfig::new(h + extra).unwrap()).unwrap();
        if !small.is_empty() {
            prop_assert!(!large.is_empty());
            prop_assert!(large.lo <= small.lo + 1e-6 && large.hi >= small.hi - 1e-6, "{} not within {}", small, large);
        }
    }

    #[test]
    fn outside_interval_is_safe(a in mission("a"), b in mission("b"), h in 0.3f64..4.0, u in 0.0f64..1.0) {
        let cfg = SeparationConfig::new(h).unwrap();
        let f = forbidden_interval(&a, &b, &cfg).unwrap();
        let delta = -b.duration() - 1.0 + u * (a.duration() + b.duration() + 2.0);
        if !f.contains(delta) {
            if let Some(d) = min_distance(&a, 0.0, &b, delta, DT) {
                prop_assert!(d >= h - 1e-6, "delta {} distance {} interval {}", delta, d, f);
            }
        }
    }
}
