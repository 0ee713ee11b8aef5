//! One-weight sensitivity sweeps and rank tracking.

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::grid::VALUE_COL;
use crate::indexes::gggi::rank_desc;
use crate::reduction::{aggregate_linear, AggregateSpec, WeightScheme, WeightSource};
use crate::table::{Column, TidyTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub target: String,
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_frames")]
    pub n_frames: usize,
    /// Also emit a frame at the target's base weight (if it lies inside
    /// the range and is not already a grid point).
    #[serde(default)]
    pub anchor: bool,
}

fn default_frames() -> usize {
    29
}

impl SweepSpec {
    pub fn new(target: &str, lo: f64, hi: f64) -> Self {
        SweepSpec {
            target: target.to_string(),
            lo,
            hi,
            n_frames: default_frames(),
            anchor: false,
        }
    }
}

/// Target weights of the sweep, increasing.
pub fn sweep_values(spec: &SweepSpec, base: f64) -> Result<Vec<f64>> {
    let (lo, hi) = (spec.lo, spec.hi);
    if !(lo > 0.0 && hi < 1.0) {
        return Err(Error::InvalidParameter(format!("sweep range [{lo}, {hi}] must lie inside (0, 1)")));
    }
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("sweep range needs lo < hi, got [{lo}, {hi}]")));
    }
    if spec.n_frames < 2 {
        return Err(Error::InvalidParameter("a sweep needs at least 2 frames".into()));
    }
    let last = spec.n_frames - 1;
    let mut ws: Vec<f64> = (0..spec.n_frames)
        .map(|i| if i == last { hi } else { lo + (hi - lo) * i as f64 / last as f64 })
        .collect();
    if spec.anchor && (lo..=hi).contains(&base) && !ws.iter().any(|w| (w - base).abs() <= 1e-12) {
        let at = ws.partition_point(|w| *w < base);
        ws.insert(at, base);
    }
    Ok(ws)
}

/// Weight schemes of the sweep: the target takes each sweep value and the
/// other variables share the remainder equally.
pub fn sweep_weights(base: &WeightScheme, spec: &SweepSpec) -> Result<Vec<WeightScheme>> {
    let b = base
        .get(&spec.target)
        .ok_or_else(|| Error::UnresolvedWeight(spec.target.clone()))?;
    let m = base.len();
    if m < 2 {
        return Err(Error::InvalidParameter("a sweep needs at least two weighted variables".into()));
    }
    sweep_values(spec, b)?
        .into_iter()
        .map(|w| {
            let rest = (1.0 - w) / (m - 1) as f64;
            WeightScheme::new(base.vars().map(|v| (v.to_string(), if v == spec.target { w } else { rest })))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightFrame {
    /// 1-based frame number.
    pub frame: usize,
    pub weights: WeightScheme,
    pub ids: Vec<String>,
    pub values: Vec<Option<f64>>,
    pub ranks: Vec<Option<i64>>,
}

/// Recomputes the linear index `Σ w_j x_j` over the rows of `ctx` for
/// every sweep frame. Rows are taken as entities, so `ctx` should hold one
/// row per id.
pub fn weight_sweep(ctx: &PipelineContext, base: &WeightScheme, spec: &SweepSpec) -> Result<Vec<WeightFrame>> {
    let ids = ctx.table().keys(ctx.id_col())?;
    sweep_weights(base, spec)?
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            let out = aggregate_linear(
                ctx.clone(),
                &AggregateSpec {
                    name: VALUE_COL.into(),
                    vars: Vec::new(),
                    weights: WeightSource::Explicit(w.clone()),
                },
            )?;
            let values = out.table().real(VALUE_COL)?;
            let ranks = rank_desc(&ids, &values);
            Ok(WeightFrame {
                frame: i + 1,
                weights: w,
                ids: ids.clone(),
                values,
                ranks,
            })
        })
        .collect()
}

/// Long table of frames: id, `.frame`, one `.w_<var>` column per weight,
/// `.value`, `.rank`.
pub fn frames_table(frames: &[WeightFrame], id_col: &str) -> Result<TidyTable> {
    let mut ids = Vec::new();
    let mut fr = Vec::new();
    let mut values = Vec::new();
    let mut ranks = Vec::new();
    for f in frames {
        ids.extend(f.ids.iter().cloned().map(Some));
        fr.extend(std::iter::repeat_n(Some(f.frame as i64), f.ids.len()));
        values.extend(f.values.iter().copied());
        ranks.extend(f.ranks.iter().copied());
    }
    let mut t = TidyTable::new();
    t.insert(id_col, Column::Text(ids))?;
    t.insert(".frame", Column::Integer(fr))?;
    if let Some(first) = frames.first() {
        for v in first.weights.vars() {
            let col = frames
                .iter()
                .flat_map(|f| std::iter::repeat_n(f.weights.get(v), f.ids.len()))
                .collect();
            t.insert(format!(".w_{v}"), Column::Real(col))?;
        }
    }
    t.insert(VALUE_COL, Column::Real(values))?;
    t.insert(".rank", Column::Integer(ranks))?;
    Ok(t)
}

/// Rank path of one entity across frames.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankTrajectory {
    pub id: String,
    pub ranks: Vec<Option<i64>>,
    /// Largest `|rank - rank in frame 1|`.
    pub max_abs_delta: i64,
    /// 1-based frame where that change first occurs.
    pub extremum_frame: usize,
}

/// Rank trajectories relative to the first frame.
pub fn rank_delta(frames: &[WeightFrame]) -> Result<Vec<RankTrajectory>> {
    if frames.len() < 2 {
        return Err(Error::InvalidParameter("rank_delta needs at least 2 frames".into()));
    }
    let ids = &frames[0].ids;
    if frames.iter().any(|f| &f.ids != ids) {
        return Err(Error::Schema("frames cover different entities".into()));
    }
    Ok(ids
        .iter()
        .enumerate()
        .map(|(e, id)| {
            let ranks: Vec<Option<i64>> = frames.iter().map(|f| f.ranks[e]).collect();
            let mut best = (0, frames[0].frame);
            if let Some(r0) = ranks[0] {
                for (f, r) in frames.iter().zip(&ranks) {
                    if let Some(r) = r {
                        let d = (r - r0).abs();
                        if d > best.0 {
                            best = (d, f.frame);
                        }
                    }
                }
            }
            RankTrajectory {
                id: id.clone(),
                ranks,
                max_abs_delta: best.0,
                extremum_frame: best.1,
            }
        })
        .collect())
}
