//! Brute-force separation checks by time stepping.
//!
//! Only mission positions are used here, never the closed-form machinery in
//! [`crate::kinematics`], so these functions can arbitrate it.

use crate::kinematics::Mission;

/// Minimum distance between `a` and `b` while both are airborne, found by
/// sampling every `dt` seconds and then polishing the best sample with a
/// golden-section search. `None` when they are never airborne together.
pub fn min_distance(a: &Mission, dep_a: f64, b: &Mission, dep_b: f64, dt: f64) -> Option<f64> {
    let start = dep_a.max(dep_b);
    let end = (dep_a + a.duration()).min(dep_b + b.duration());
    if start >= end {
        return None;
    }
    let dist = |t: f64| -> f64 {
        let t = t.clamp(start, end);
        let pa = a.origin() + a.velocity() * (t - dep_a);
        let pb = b.origin() + b.velocity() * (t - dep_b);
        (pa - pb).norm()
    };

    let steps = ((end - start) / dt).ceil() as usize;
    let mut best_t = start;
    let mut best = dist(start);
    for k in 1..=steps {
        let t = (start + k as f64 * dt).min(end);
        let d = dist(t);
        if d < best {
            best = d;
            best_t = t;
        }
    }

    // Distance along two linear tracks is convex in t, so the bracket around
    // the best sample contains the true minimum.
    let (mut lo, mut hi) = ((best_t - dt).max(start), (best_t + dt).min(end));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if dist(m1) <= dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    Some(best.min(dist(0.5 * (lo + hi))))
}

/// Plain sampled minimum without refinement.
pub fn sampled_min_distance(a: &Mission, dep_a: f64, b: &Mission, dep_b: f64, dt: f64) -> Option<f64> {
    let start = dep_a.max(dep_b);
    let end = (dep_a + a.duration()).min(dep_b + b.duration());
    if start >= end {
        return None;
    }
    let mut best = f64::INFINITY;
    let mut k = 0usize;
    loop {
        let t = start + k as f64 * dt;
        if t >= end {
            break;
        }
        if let (Some(pa), Some(pb)) = (a.position_after(t - dep_a), b.position_after(t - dep_b)) {
            best = best.min((pa - pb).norm());
        }
        k += 1;
    }
    Some(best)
}

/// Whether `second` departing `delta` after `first` comes within `h`.
pub fn conflicts(first: &Mission, second: &Mission, delta: f64, h: f64, dt: f64) -> bool {
    min_distance(first, 0.0, second, delta, dt).is_some_and(|d| d < h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    /// `None` when the two are never airborne together.
    pub min_distance: Option<f64>,
}

/// Sampled minimum distance for every pair of a schedule.
pub fn check_schedule(missions: &[Mission], departures: &[f64], dt: f64) -> Vec<PairCheck> {
    let mut out = Vec::new();
    for i in 0..missions.len() {
        for j in i + 1..missions.len() {
            out.push(PairCheck {
                first: i,
                second: j,
                min_distance: sampled_min_distance(&missions[i], departures[i], &missions[j], departures[j], dt),
            });
        }
    }
    out
}

/// Smallest pairwise distance over a whole schedule (infinite if no pair is
/// ever co-airborne).
pub fn schedule_min_distance(missions: &[Mission], departures: &[f64], dt: f64) -> f64 {
    check_schedule(missions, departures, dt)
        .iter()
        .filter_map(|c| c.min_distance)
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Vec2;

    #[test]
    fn refined_minimum_finds_exact_crossing() {
        let a = Mission::new("a", Vec2::new(0.0, 10.0), Vec2::new(20.0, 10.0), 1.0).unwrap();
        let b = Mission::new("b", Vec2::new(10.0, 0.0), Vec2::new(10.0, 20.0), 1.0).unwrap();
        let d = min_distance(&a, 0.0, &b, 0.0, 0.37).unwrap();
        assert!(d < 1e-9, "{d}");
        let d = min_distance(&a, 0.0, &b, 3.0, 0.01).unwrap();
        assert!((d - 3.0 / 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(min_distance(&a, 0.0, &b, 20.0, 0.01), None);
    }
}
