//! Composable pipelines for composite indexes.
//!
//! A [`PipelineContext`] wraps a long-format [`TidyTable`] with column
//! roles (entity id, time, cyclic group) and a replayable step log. Steps
//! from the modules below are chained on it, and [`compute_indexes`]
//! evaluates whole recipes over a [`ParameterGrid`].
//!
//! ```
//! use indexflow::temporal::{temporal_rolling_window, RollingSpec};
//! use indexflow::{Column, PipelineContext, TidyTable, YearMonth};
//!
//! let start = YearMonth::new(2020, 1)?;
//! let t = TidyTable::from_columns([
//!     ("id", Column::text(["a"; 4])),
//!     ("ym", Column::time((0..4).map(|k| start.offset(k)))),
//!     ("prcp", Column::real([10.0, 20.0, 30.0, 40.0])),
//! ])?;
//! let ctx = PipelineContext::init(t, "id", Some("ym"), None)?;
//! let ctx = temporal_rolling_window(ctx, &RollingSpec::sum("prcp", 3))?;
//! assert_eq!(ctx.table().real(".agg")?, [Some(60.0), Some(90.0)]);
//! assert_eq!(ctx.step_log().len(), 2);
//! # Ok::<(), indexflow::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod context;
pub mod dist;
pub mod error;
pub mod fit;
pub mod formula;
pub mod grid;
pub mod indexes;
pub mod io;
pub mod lmoments;
pub mod normal;
mod numeric;
pub mod pipeline;
pub mod reduction;
pub mod simplify;
pub mod spatial;
pub mod synthetic;
pub mod table;
pub mod temporal;
pub mod transform;
pub mod uncertainty;

pub use context::{Notice, PipelineContext, StepRecord};
pub use dist::{Distribution, Family};
pub use error::{Error, Result};
pub use grid::{compute_indexes, Combo, IndexResult, ParameterGrid, Recipe};
pub use numeric::quantile_sorted;
pub use pipeline::Step;
pub use reduction::WeightScheme;
pub use table::{Column, ColumnKind, TidyTable, YearMonth};
