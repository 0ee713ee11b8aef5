//! Bootstrap confidence intervals and weight sensitivity sweeps.

pub mod bootstrap;
pub mod sweep;

pub use bootstrap::{bootstrap_ci, IntervalPoint, IntervalSeries, DEFAULT_LEVELS};
pub use sweep::{rank_delta, sweep_weights, weight_sweep, RankTrajectory, SweepSpec, WeightFrame};
