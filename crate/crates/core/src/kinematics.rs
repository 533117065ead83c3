//! Planar kinematics for straight-line, constant-velocity missions.
//!
//! The central operation is [`forbidden_interval`]: for an ordered pair of
//! missions it returns the open span of relative departure delays
//! `delta = t_dep(second) - t_dep(first)` for which the two agents come
//! closer than the separation radius while both are airborne.
//!
//! An agent occupies airspace on `[departure, arrival)`. Once it arrives it
//! no longer constrains anyone.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative speeds with squared norm below this are treated as zero.
const DEGENERATE_U2: f64 = 1e-12;

/// Minimum clearance below `h^2` (m^2) for a pair to count as conflicting.
/// Anything shallower is a tangent pass and produces an empty interval.
const TANGENT_EPS: f64 = 1e-12;

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A straight-line flight from `origin` to `destination` at constant speed.
///
/// Construct through [`Mission::new`], which rejects non-finite input,
/// non-positive speeds and zero-length routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Mission {
    id: String,
    origin: Vec2,
    destination: Vec2,
    speed: f64,
    velocity: Vec2,
    duration: f64,
}

impl Mission {
    pub fn new(id: impl Into<String>, origin: Vec2, destination: Vec2, speed: f64) -> Result<Self> {
        let id = id.into();
        let invalid = |reason: &str| Error::InvalidMission {
            id: id.clone(),
            reason: reason.to_string(),
        };
        if !origin.is_finite() || !destination.is_finite() {
            return Err(invalid("coordinates must be finite"));
        }
        if !(speed.is_finite() && speed > 0.0) {
            return Err(invalid("speed must be positive and finite"));
        }
        let route = destination - origin;
        let length = route.norm();
        if length <= 0.0 {
            return Err(invalid("origin and destination coincide"));
        }
        Ok(Self {
            velocity: route * (speed / length),
            duration: length / speed,
            id,
            origin,
            destination,
            speed,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn destination(&self) -> Vec2 {
        self.destination
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn velocity(&self) -> Vec2 {
        self.velocity
    }

    /// Time from departure to arrival, in seconds.
    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn length(&self) -> f64 {
        self.duration * self.speed
    }

    /// Position `elapsed` seconds after departure, or `None` when the agent
    /// is not airborne at that moment.
    pub fn position_after(&self, elapsed: f64) -> Option<Vec2> {
        if (0.0..self.duration).contains(&elapsed) {
            Some(self.origin + self.velocity * elapsed)
        } else {
            None
        }
    }
}

/// Relative motion of agent `a` with respect to agent `b`, referenced to
/// `b`'s departure: `R(t) = u * t + p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeState {
    pub u: Vec2,
    pub p: Vec2,
}

impl RelativeState {
    pub fn at(&self, t: f64) -> Vec2 {
        self.u * t + self.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    /// Minimum separation radius, meters.
    pub h: f64,
    /// Root refinement tolerance, seconds.
    pub tol: f64,
    /// Sampling step of the brute-force separation check, seconds.
    pub oracle_dt: f64,
}

impl SeparationConfig {
    pub fn new(h: f64) -> Result<Self> {
        let cfg = Self {
            h,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.h) {
            return Err(Error::InvalidConfig(format!("h must be positive, got {}", self.h)));
        }
        if !ok(self.tol) || !ok(self.oracle_dt) {
            return Err(Error::InvalidConfig(
                "tol and oracle_dt must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

impl Default for SeparationConfig {
    fn default() -> Self {
        Self {
            h: 1.5,
            tol: 1e-6,
            oracle_dt: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalKind {
    Empty,
    Bounded,
    Unbounded,
}

/// Open span `(lo, hi)` of relative delays that break separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenInterval {
    pub lo: f64,
    pub hi: f64,
    pub kind: IntervalKind,
}

impl ForbiddenInterval {
    pub const EMPTY: ForbiddenInterval = ForbiddenInterval {
        lo: 0.0,
        hi: 0.0,
        kind: IntervalKind::Empty,
    };

    pub fn bounded(lo: f64, hi: f64) -> Self {
        debug_assert!(lo < hi);
        Self {
            lo,
            hi,
            kind: IntervalKind::Bounded,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kind == IntervalKind::Empty
    }

    pub fn width(&self) -> f64 {
        match self.kind {
            IntervalKind::Empty => 0.0,
            IntervalKind::Bounded => self.hi - self.lo,
            IntervalKind::Unbounded => f64::INFINITY,
        }
    }

    /// Whether `delta` lies strictly inside the interval.
    pub fn contains(&self, delta: f64) -> bool {
        match self.kind {
            IntervalKind::Empty => false,
            _ => self.lo < delta && delta < self.hi,
        }
    }

    /// The interval seen from the other agent: `(lo, hi) -> (-hi, -lo)`.
    pub fn mirrored(&self) -> Self {
        match self.kind {
            IntervalKind::Empty => *self,
            _ => Self {
                lo: -self.hi,
                hi: -self.lo,
                kind: self.kind,
            },
        }
    }
}

impl fmt::Display for ForbiddenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IntervalKind::Empty => write!(f, "Empty"),
            IntervalKind::Bounded => write!(f, "Bounded({:.6}, {:.6})", self.lo, self.hi),
            IntervalKind::Unbounded => write!(f, "Unbounded({}, {})", self.lo, self.hi),
        }
    }
}

/// Minimum squared distance over a co-airborne window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Separation {
    /// The agents are never airborne together.
    NotCoAirborne,
    /// Smallest squared distance (m^2) and the absolute time it occurs.
    Min { dist_sq: f64, at: f64 },
}

impl Separation {
    pub fn dist_sq(&self) -> f64 {
        match self {
            Separation::NotCoAirborne => f64::INFINITY,
            Separation::Min { dist_sq, .. } => *dist_sq,
        }
    }
}

pub fn relative_state(a: &Mission, b: &Mission, delta: f64) -> RelativeState {
    RelativeState {
        u: a.velocity - b.velocity,
        p: (a.origin + a.velocity * delta) - b.origin,
    }
}

/// Time of closest approach relative to the reference instant of `rs`.
pub fn cpa_time(rs: &RelativeState) -> Result<f64> {
    let u2 = rs.u.norm_sq();
    if u2 <= DEGENERATE_U2 {
        return Err(Error::DegenerateRelativeVelocity);
    }
    Ok(-rs.u.dot(rs.p) / u2)
}

/// Minimum squared distance between `a` departing at `t_dep_a` and `b`
/// departing at `t_dep_b`, taken over the instants both are airborne.
pub fn min_separation_sq(a: &Mission, t_dep_a: f64, b: &Mission, t_dep_b: f64) -> Separation {
    let start = t_dep_a.max(t_dep_b);
    let end = (t_dep_a + a.duration).min(t_dep_b + b.duration);
    if start >= end {
        return Separation::NotCoAirborne;
    }
    // R(t) = pos_a(t) - pos_b(t) = u * t + c, with t absolute.
    let u = a.velocity - b.velocity;
    let c = (a.origin - a.velocity * t_dep_a) - (b.origin - b.velocity * t_dep_b);
    let u2 = u.norm_sq();
    let t = if u2 <= DEGENERATE_U2 {
        start
    } else {
        (-u.dot(c) / u2).clamp(start, end)
    };
    Separation::Min {
        dist_sq: (u * t + c).norm_sq(),
        at: t,
    }
}

/// Pair geometry in the first agent's clock. With `t` the first agent's
/// flight time and `s` the second's, `w(t, s) = d + va * t - vb * s` is
/// their offset and `delta = t - s`.
struct PairGeometry {
    d: Vec2,
    va: Vec2,
    vb: Vec2,
    ta: f64,
    tb: f64,
}

impl PairGeometry {
    fn new(first: &Mission, second: &Mission) -> Self {
        Self {
            d: first.origin - second.origin,
            va: first.velocity,
            vb: second.velocity,
            ta: first.duration,
            tb: second.duration,
        }
    }

    fn offset(&self, t: f64, s: f64) -> Vec2 {
        self.d + self.va * t - self.vb * s
    }

    /// Minimum squared offset for delay `delta` over the closure of the
    /// co-airborne window. Convex in `delta` on `[-tb, ta]`.
    fn clearance_sq(&self, delta: f64) -> f64 {
        let start = delta.max(0.0);
        let end = self.ta.min(delta + self.tb).max(start);
        let u = self.va - self.vb;
        let c = self.d + self.vb * delta;
        let u2 = u.norm_sq();
        let t = if u2 <= DEGENERATE_U2 {
            start
        } else {
            (-u.dot(c) / u2).clamp(start, end)
        };
        (u * t + c).norm_sq()
    }

    /// Global minimum of the offset over the flight rectangle
    /// `[0, ta] x [0, tb]`, returned as `(delta, dist_sq)`.
    fn closest_encounter(&self) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let mut consider = |t: f64, s: f64| {
            let v = self.offset(t, s).norm_sq();
            if v < best.0 {
                best = (v, t, s);
            }
        };

        // Interior stationary point: va * t - vb * s = -d.
        let det = self.vb.cross(self.va);
        if det.abs() > 1e-12 * self.va.norm() * self.vb.norm() {
            let t = self.vb.cross(self.d) / -det;
            let s = self.va.cross(self.d) / -det;
            if (0.0..=self.ta).contains(&t) && (0.0..=self.tb).contains(&s) {
                consider(t, s);
            }
        }

        // Edges of the rectangle, each a clamped one-dimensional quadratic.
        for &s in &[0.0, self.tb] {
            let base = self.d - self.vb * s;
            let t = (-self.va.dot(base) / self.va.norm_sq()).clamp(0.0, self.ta);
            consider(t, s);
        }
        for &t in &[0.0, self.ta] {
            let base = self.d + self.va * t;
            let s = (self.vb.dot(base) / self.vb.norm_sq()).clamp(0.0, self.tb);
            consider(t, s);
        }

        (best.1 - best.2, best.0)
    }

    /// Roots of the unbounded-line criterion in `delta`, ascending.
    ///
    /// With the second agent's flight time `s` as the running variable the
    /// relative offset is `u * s + p(delta)` where `p(delta) = d + va * delta`.
    /// Its minimum over all `s` is the squared component of `p` orthogonal
    /// to `u`, a quadratic in `delta`. When `u` vanishes the offset is
    /// constant and the criterion is `|p(delta)|^2` itself.
    fn line_roots(&self, h2: f64) -> Option<(f64, f64)> {
        let u = self.va - self.vb;
        let u2 = u.norm_sq();
        let (p0, p1) = if u2 <= DEGENERATE_U2 {
            (self.d, self.va)
        } else {
            let perp = |v: Vec2| v - u * (u.dot(v) / u2);
            (perp(self.d), perp(self.va))
        };
        let a = p1.norm_sq();
        let b = 2.0 * p0.dot(p1);
        let c = p0.norm_sq() - h2;
        if a <= 0.0 {
            return None;
        }
        let disc = b * b - 4.0 * a * c;
        if disc < 1e-12 {
            return None;
        }
        let sq = disc.sqrt();
        // Numerically stable pair of roots.
        let q = -0.5 * (b + b.signum() * sq);
        let (r1, r2) = if q == 0.0 {
            (-sq / (2.0 * a), sq / (2.0 * a))
        } else {
            let x = q / a;
            let y = c / q;
            (x.min(y), x.max(y))
        };
        Some((r1, r2))
    }
}

/// Relative departure delays of `second` with respect to `first` that bring
/// the pair closer than `cfg.h` while both are airborne.
///
/// The result is an open interval: a delay at either endpoint yields a
/// tangent pass at exactly `h`, which is allowed. Endpoints are the exact
/// roots of the unbounded-line quadratic when the closest approach there
/// falls inside the co-airborne window, and bisection-refined to `cfg.tol`
/// otherwise. In both cases the returned endpoints are checked to be safe.
pub fn forbidden_interval(
    first: &Mission,
    second: &Mission,
    cfg: &SeparationConfig,
) -> Result<ForbiddenInterval> {
    let geo = PairGeometry::new(first, second);
    let h2 = cfg.h * cfg.h;
    let (delta_star, closest) = geo.closest_encounter();
    if !(h2 - closest > TANGENT_EPS) {
        return Ok(ForbiddenInterval::EMPTY);
    }

    let g = |delta: f64| geo.clearance_sq(delta);
    let safe = |delta: f64| g(delta) >= h2;
    let roots = geo.line_roots(h2);

    // Outside (-tb, ta) the agents are never airborne together.
    let lo = if safe(-geo.tb) {
        let root = roots.map(|r| r.0).filter(|r| *r > -geo.tb && *r < delta_star);
        settle(root, -geo.tb, delta_star, &safe, &g, h2, cfg.tol, Side::Lower)
    } else {
        -geo.tb
    };
    let hi = if safe(geo.ta) {
        let root = roots.map(|r| r.1).filter(|r| *r < geo.ta && *r > delta_star);
        settle(root, geo.ta, delta_star, &safe, &g, h2, cfg.tol, Side::Upper)
    } else {
        geo.ta
    };

    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::UnresolvablePair {
            first: first.id.clone(),
            second: second.id.clone(),
        });
    }
    if lo >= hi {
        return Ok(ForbiddenInterval::EMPTY);
    }
    Ok(ForbiddenInterval::bounded(lo, hi))
}

#[derive(Clone, Copy)]
enum Side {
    Lower,
    Upper,
}

/// Locates the boundary between the safe end `safe_end` and the conflicting
/// `inside` point, preferring an analytic root when it is exact.
#[allow(clippy::too_many_arguments)]
fn settle(
    root: Option<f64>,
    safe_end: f64,
    inside: f64,
    safe: &dyn Fn(f64) -> bool,
    g: &dyn Fn(f64) -> f64,
    h2: f64,
    tol: f64,
    side: Side,
) -> f64 {
    let outward = |x: f64| match side {
        Side::Lower => x.next_down(),
        Side::Upper => x.next_up(),
    };

    let mut outer = safe_end;
    if let Some(r) = root {
        // The line criterion underestimates the windowed one, so the root is
        // exact when the two agree there.
        if (g(r) - h2).abs() <= 1e-9 * h2.max(1.0) {
            let mut x = r;
            for _ in 0..64 {
                if safe(x) {
                    return x;
                }
                x = outward(x);
            }
        }
        if safe(r) {
            outer = r;
        }
    }

    let mut inner = inside;
    for _ in 0..MAX_BISECTIONS {
        if (outer - inner).abs() <= tol {
            break;
        }
        let mid = 0.5 * (outer + inner);
        if safe(mid) {
            outer = mid;
        } else {
            inner = mid;
        }
    }
    outer
}
