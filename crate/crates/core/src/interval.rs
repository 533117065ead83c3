//! Normalized unions of time spans used as the scheduler's feasible set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A span that always contains its `start`. The end is included only when
/// `closed_end` is set, which is how points left behind by subtracting an
/// open interval stay feasible. A closed span may be a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub start: f64,
    pub end: f64,
    pub closed_end: bool,
}

impl Span {
    pub fn half_open(start: f64, end: f64) -> Self {
        Self {
            start,
            end,
            closed_end: false,
        }
    }

    pub fn closed(start: f64, end: f64) -> Self {
        Self {
            start,
            end,
            closed_end: true,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && (t < self.end || (self.closed_end && t == self.end))
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    fn is_valid(&self) -> bool {
        self.start < self.end || (self.closed_end && self.start == self.end)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.closed_end { ']' } else { ')' };
        write!(f, "[{}, {}{}", self.start, self.end, close)
    }
}

/// Sorted, disjoint, non-adjacent spans.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    spans: Vec<Span>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[start, end)`; empty when `end <= start`.
    pub fn horizon(start: f64, end: f64) -> Self {
        Self::from_spans(vec![Span::half_open(start, end)])
    }

    pub fn from_spans(spans: impl IntoIterator<Item = Span>) -> Self {
        let mut spans: Vec<Span> = spans.into_iter().filter(Span::is_valid).collect();
        spans.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            match merged.last_mut() {
                // Overlapping or touching: [a, b) followed by [b, c) is one span.
                Some(last) if s.start <= last.end => {
                    if s.end > last.end {
                        last.end = s.end;
                        last.closed_end = s.closed_end;
                    } else if s.end == last.end {
                        last.closed_end |= s.closed_end;
                    }
                }
                _ => merged.push(s),
            }
        }
        Self { spans: merged }
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.spans.iter().map(Span::len).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.spans.iter().any(|s| s.contains(t))
    }

    /// Removes the open interval `(lo, hi)`; `lo` and `hi` themselves stay.
    pub fn subtract_open(&self, lo: f64, hi: f64) -> IntervalSet {
        if !(lo < hi) {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.spans.len() + 1);
        for s in &self.spans {
            let misses = hi <= s.start || lo >= s.end;
            if misses {
                out.push(*s);
                continue;
            }
            if lo >= s.start {
                out.push(Span::closed(s.start, lo));
            }
            if hi < s.end {
                out.push(Span {
                    start: hi,
                    end: s.end,
                    closed_end: s.closed_end,
                });
            } else if hi == s.end && s.closed_end {
                out.push(Span::closed(hi, hi));
            }
        }
        Self::from_spans(out)
    }

    /// Smallest feasible instant.
    pub fn earliest(&self) -> Result<f64> {
        self.earliest_opt().ok_or_else(|| Error::EmptyFeasibleSet {
            agent: String::new(),
        })
    }

    pub fn earliest_opt(&self) -> Option<f64> {
        self.spans.first().map(|s| s.start)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.spans.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subtract_inner() {
        let h = IntervalSet::horizon(0.0, 100.0);
        let r = h.subtract_open(10.0, 20.0);
        assert_eq!(
            r.spans(),
            &[Span::closed(0.0, 10.0), Span::half_open(20.0, 100.0)]
        );
        assert!(r.contains(10.0) && r.contains(20.0) && !r.contains(15.0));
    }

    #[test]
    fn subtract_disjoint() {
        let h = IntervalSet::horizon(0.0, 100.0);
        assert_eq!(h.subtract_open(-5.0, -1.0), h);
        assert_eq!(h.subtract_open(100.0, 120.0), h);
    }

    #[test]
    fn subtract_straddling() {
        let s = IntervalSet::from_spans([Span::closed(0.0, 10.0), Span::half_open(20.0, 30.0)]);
        let r = s.subtract_open(5.0, 25.0);
        assert_eq!(
            r.spans(),
            &[Span::closed(0.0, 5.0), Span::half_open(25.0, 30.0)]
        );
    }

    #[test]
    fn subtract_leaves_touching_point() {
        let h = IntervalSet::horizon(0.0, 100.0);
        let r = h.subtract_open(0.0, 10.0).subtract_open(10.0, 20.0);
        assert_eq!(r.earliest().unwrap(), 0.0);
        let r = r.subtract_open(-1.0, 5.0);
        // 10 is tangent to both removed intervals and stays feasible.
        assert_eq!(r.earliest().unwrap(), 10.0);
        assert!(r.contains(10.0));
    }

    #[test]
    fn subtract_everything() {
        let h = IntervalSet::horizon(0.0, 10.0);
        let r = h.subtract_open(-1.0, 11.0);
        assert!(r.is_empty());
        assert!(matches!(r.earliest(), Err(Error::EmptyFeasibleSet { .. })));
    }

    #[test]
    fn earliest_examples() {
        let s = IntervalSet::from_spans([Span::closed(0.0, 10.0)]);
        assert_eq!(s.earliest().unwrap(), 0.0);
        let s = IntervalSet::from_spans([Span::half_open(3.5, 9.0), Span::half_open(12.0, 20.0)]);
        assert_eq!(s.earliest().unwrap(), 3.5);
        assert!(IntervalSet::empty().earliest().is_err());
    }

    #[test]
    fn normalization_merges_adjacent() {
        let s = IntervalSet::from_spans([
            Span::half_open(5.0, 8.0),
            Span::closed(0.0, 5.0),
            Span::half_open(7.0, 9.0),
        ]);
        assert_eq!(s.spans(), &[Span::half_open(0.0, 9.0)]);
    }

    fn spans_normalized(s: &IntervalSet) -> bool {
        s.spans().iter().all(|x| x.is_valid())
            && s.spans().windows(2).all(|w| w[0].end < w[1].start)
    }

    proptest! {
        #[test]
        fn subtraction_matches_pointwise(
            cuts in prop::collection::vec((0.0f64..100.0, 0.1f64..30.0), 0..8),
            probes in prop::collection::vec(0.0f64..100.0, 50),
        ) {
            let mut set = IntervalSet::horizon(0.0, 100.0);
            for &(lo, w) in &cuts {
                set = set.subtract_open(lo, lo + w);
                prop_assert!(spans_normalized(&set));
            }
            let inside = |t: f64| {
                (0.0..100.0).contains(&t) && cuts.iter().all(|&(lo, w)| !(lo < t && t < lo + w))
            };
            for t in probes.into_iter().chain(cuts.iter().flat_map(|&(lo, w)| [lo, lo + w])) {
                prop_assert_eq!(set.contains(t), inside(t), "t = {}", t);
            }
            if let Some(e) = set.earliest_opt() {
                prop_assert!(inside(e));
            }
        }
    }
}
