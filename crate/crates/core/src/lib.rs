//! Conflict-free departure scheduling for constant-velocity agents sharing a
//! planar airspace.
//!
//! Separation is resolved purely by ground delay. For every ordered pair of
//! missions [`kinematics::forbidden_interval`] gives the relative departure
//! delays that would bring them within the separation radius; the
//! [`scheduler`] walks a flight order and gives each agent the earliest
//! departure outside all forbidden spans of the agents before it; the
//! [`optimizer`] tries every flight order and keeps the one with the least
//! total delay.
//!
//! [`scenario`] and [`statfit`] drive the random-topology experiments and
//! fit distributions to the resulting delays; [`geo`] and [`casestudy`]
//! handle geodetic input.

pub mod casestudy;
pub mod error;
pub mod geo;
pub mod interval;
pub mod kinematics;
pub mod optimizer;
pub mod oracle;
pub mod rng;
pub mod scenario;
pub mod scenario_file;
pub mod scheduler;
pub mod statfit;

pub use error::{Error, Result};
pub use interval::{IntervalSet, Span};
pub use kinematics::{
    cpa_time, forbidden_interval, min_separation_sq, relative_state, ForbiddenInterval, IntervalKind,
    Mission, RelativeState, Separation, SeparationConfig, Vec2,
};
pub use optimizer::{average_delay, optimize_order, per_order_table, OrderResult, OrderTable};
pub use scenario::{generate_topology, run_monte_carlo, AirspaceConfig, DelaySample, MonteCarloConfig, SampleMode};
pub use scenario_file::{ScenarioFile, Units};
pub use scheduler::{greedy_schedule, Schedule, ScheduleEntry};
pub use statfit::{fit, make_histogram, select_best, Family, FitResult, Histogram};
