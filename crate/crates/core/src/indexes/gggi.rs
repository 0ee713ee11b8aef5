//! Global gender gap index: two linear aggregations, 14 ratios into four
//! dimensions and the dimensions into one value.

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::grid::{compute_indexes, IndexResult, ParameterGrid, Recipe, VALUE_COL};
use crate::reduction::{aggregate_linear, AggregateSpec, WeightScheme, WeightSource};
use crate::table::{Column, TidyTable};

pub const RANK_COL: &str = ".rank";
pub const DIMENSIONS: [&str; 4] = ["economy", "education", "health", "politics"];

/// One row of the weight table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GggiWeight {
    pub variable: String,
    /// Weight within the dimension.
    pub v_wgt: f64,
    pub dimension: String,
    /// Weight of the dimension in the final index.
    pub d_wgt: f64,
    /// Published composite weight (rounded to three decimals).
    pub wgt: f64,
}

/// Bundled weights of the 2023 report.
pub fn gggi_weights() -> Vec<GggiWeight> {
    const ROWS: [(&str, f64, &str, f64); 14] = [
        ("labour_force_participation", 0.199, "economy", 0.050),
        ("wage_equality_for_similar_work", 0.310, "economy", 0.078),
        ("estimated_earned_income", 0.221, "economy", 0.055),
        ("legislators_senior_officials_and_managers", 0.149, "economy", 0.037),
        ("professional_and_technical_workers", 0.121, "economy", 0.030),
        ("literacy_rate", 0.191, "education", 0.048),
        ("enrolment_in_primary_education", 0.459, "education", 0.115),
        ("enrolment_in_secondary_education", 0.230, "education", 0.058),
        ("enrolment_in_tertiary_education", 0.121, "education", 0.030),
        ("sex_ratio_at_birth", 0.693, "health", 0.173),
        ("healthy_life_expectancy", 0.307, "health", 0.077),
        ("women_in_parliament", 0.310, "politics", 0.078),
        ("women_in_ministerial_positions", 0.247, "politics", 0.062),
        ("years_with_female_head_of_state", 0.443, "politics", 0.111),
    ];
    ROWS.iter()
        .map(|&(variable, v_wgt, dimension, wgt)| GggiWeight {
            variable: variable.into(),
            v_wgt,
            dimension: dimension.into(),
            d_wgt: 0.25,
            wgt,
        })
        .collect()
}

/// Lower-case, underscore-separated form of a label.
pub fn snake_case(s: &str) -> String {
    s.split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join("_")
}

/// The weight table as a tidy table with columns
/// `variable, v_wgt, dimension, d_wgt, wgt`.
pub fn weight_table(weights: &[GggiWeight]) -> TidyTable {
    TidyTable::from_columns([
        ("variable", Column::text(weights.iter().map(|w| w.variable.clone()))),
        ("v_wgt", Column::real(weights.iter().map(|w| w.v_wgt))),
        ("dimension", Column::text(weights.iter().map(|w| w.dimension.clone()))),
        ("d_wgt", Column::real(weights.iter().map(|w| w.d_wgt))),
        ("wgt", Column::real(weights.iter().map(|w| w.wgt))),
    ])
    .expect("equal lengths")
}

/// Reads a weight table. Headers are matched after snake-casing (so
/// `V-wgt` is `v_wgt`); variable and dimension labels are snake-cased, and
/// blank dimension / D-wgt cells inherit the previous row's values, as in
/// the published layout.
pub fn weights_from_table(t: &TidyTable) -> Result<Vec<GggiWeight>> {
    let find = |want: &str| -> Result<&str> {
        t.names()
            .find(|n| snake_case(n) == want)
            .ok_or_else(|| Error::Schema(format!("weight table has no `{want}` column")))
    };
    let var = t.keys(find("variable")?)?;
    let v_wgt = t.real(find("v_wgt")?)?;
    let dim = t.column(find("dimension")?)?;
    let d_wgt = t.real(find("d_wgt")?)?;
    let wgt = match find("wgt") {
        Ok(c) => t.real(c)?,
        Err(_) => vec![None; t.nrows()],
    };
    let mut out = Vec::with_capacity(t.nrows());
    let mut cur_dim: Option<(String, f64)> = None;
    for i in 0..t.nrows() {
        let d = dim.cell(i).to_string();
        if !d.trim().is_empty() {
            let dw = d_wgt[i].ok_or_else(|| Error::UnresolvedWeight(format!("D-wgt of `{d}`")))?;
            cur_dim = Some((snake_case(&d), dw));
        }
        let (dimension, d_wgt) = cur_dim
            .clone()
            .ok_or_else(|| Error::Schema(format!("row {} has no dimension", i + 1)))?;
        let v = v_wgt[i].ok_or_else(|| Error::UnresolvedWeight(var[i].clone()))?;
        out.push(GggiWeight {
            variable: snake_case(&var[i]),
            v_wgt: v,
            dimension,
            d_wgt,
            wgt: wgt[i].unwrap_or(v * d_wgt),
        });
    }
    if out.is_empty() {
        return Err(Error::Schema("weight table is empty".into()));
    }
    Ok(out)
}

/// `|wgt - V-wgt * D-wgt|` per row, rounded to 1e-12 so that decimal
/// table entries compare exactly (0.078 - 0.310 * 0.25 is 5e-4, not the
/// binary 5.0000000000000004e-4).
pub fn weight_identity_residuals(weights: &[GggiWeight]) -> Vec<(String, f64)> {
    weights
        .iter()
        .map(|w| {
            let r = (w.wgt - w.v_wgt * w.d_wgt).abs();
            (w.variable.clone(), (r * 1e12).round() / 1e12)
        })
        .collect()
}

/// Dimension names in first-appearance order.
pub fn dimensions(weights: &[GggiWeight]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for w in weights {
        if !out.contains(&w.dimension) {
            out.push(w.dimension.clone());
        }
    }
    out
}

/// Dimension-level weights (D-wgt).
pub fn dimension_weights(weights: &[GggiWeight]) -> Result<WeightScheme> {
    WeightScheme::new(dimensions(weights).into_iter().map(|d| {
        let w = weights.iter().find(|w| w.dimension == d).expect("dimension from weights").d_wgt;
        (d, w)
    }))
}

/// Single-stage weights `V-wgt * D-wgt`.
pub fn composite_weights(weights: &[GggiWeight]) -> Result<WeightScheme> {
    WeightScheme::new(weights.iter().map(|w| (w.variable.clone(), w.v_wgt * w.d_wgt)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GggiMode {
    /// One linear combination of the 14 variables with `V-wgt * D-wgt`.
    Composite,
    /// Variables into dimensions with V-wgt, then dimensions with D-wgt.
    TwoStage,
    /// Input already holds the dimension columns; only D-wgt is applied.
    #[default]
    Dimension,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GggiParams {
    #[serde(default)]
    pub mode: GggiMode,
    /// Cap input ratios at 1 before aggregating.
    #[serde(default)]
    pub truncate: bool,
    /// Overrides D-wgt (used by weight sweeps).
    #[serde(default)]
    pub dimension_weights: Option<WeightScheme>,
}

fn truncate_at_one(ctx: &mut PipelineContext, vars: &[String]) -> Result<()> {
    for v in vars {
        let xs = ctx.table().real(v)?;
        let capped = xs.into_iter().map(|x| x.map(|x| x.min(1.0))).collect();
        ctx.insert(v, Column::Real(capped))?;
    }
    Ok(())
}

fn gggi_pipeline(mut ctx: PipelineContext, weights: &[GggiWeight], params: &GggiParams) -> Result<PipelineContext> {
    let dim_w = match &params.dimension_weights {
        Some(w) => w.clone(),
        None => dimension_weights(weights)?,
    };
    let inputs: Vec<String> = match params.mode {
        GggiMode::Dimension => dim_w.vars().map(str::to_string).collect(),
        _ => weights.iter().map(|w| w.variable.clone()).collect(),
    };
    let missing: Vec<&str> = inputs.iter().filter(|v| !ctx.table().has(v)).map(String::as_str).collect();
    if !missing.is_empty() {
        return Err(Error::Schema(format!("missing GGGI columns: {}", missing.join(", "))));
    }
    if params.truncate {
        truncate_at_one(&mut ctx, &inputs)?;
    }
    match params.mode {
        GggiMode::Composite => {
            if params.dimension_weights.is_some() {
                return Err(Error::InvalidParameter(
                    "dimension weight overrides need the two-stage or dimension mode".into(),
                ));
            }
            aggregate_linear(
                ctx,
                &AggregateSpec {
                    name: VALUE_COL.into(),
                    vars: inputs,
                    weights: WeightSource::Explicit(composite_weights(weights)?),
                },
            )
        }
        GggiMode::TwoStage => {
            for d in dimensions(weights) {
                let vw = WeightScheme::new(
                    weights
                        .iter()
                        .filter(|w| w.dimension == d)
                        .map(|w| (w.variable.clone(), w.v_wgt)),
                )?;
                ctx = aggregate_linear(
                    ctx,
                    &AggregateSpec {
                        name: d,
                        vars: Vec::new(),
                        weights: WeightSource::Explicit(vw),
                    },
                )?;
            }
            aggregate_linear(ctx, &dimension_spec(dim_w))
        }
        GggiMode::Dimension => aggregate_linear(ctx, &dimension_spec(dim_w)),
    }
}

fn dimension_spec(w: WeightScheme) -> AggregateSpec {
    AggregateSpec {
        name: VALUE_COL.into(),
        vars: Vec::new(),
        weights: WeightSource::Explicit(w),
    }
}

/// Ordinal ranks by descending value, ties broken by id; nulls unranked.
pub fn rank_desc(ids: &[String], values: &[Option<f64>]) -> Vec<Option<i64>> {
    let mut order: Vec<usize> = (0..ids.len()).filter(|&i| values[i].is_some()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .unwrap()
            .total_cmp(&values[a].unwrap())
            .then_with(|| ids[a].cmp(&ids[b]))
    });
    let mut ranks = vec![None; ids.len()];
    for (r, i) in order.into_iter().enumerate() {
        ranks[i] = Some(r as i64 + 1);
    }
    ranks
}

/// Recipe computing `.value` and `.rank` for each entity.
pub fn gggi_recipe(weights: &[GggiWeight], params: &GggiParams) -> Recipe {
    let (w, p) = (weights.to_vec(), params.clone());
    Recipe::new("gggi", ParameterGrid::single(), VALUE_COL, move |ctx, _| {
        let mut ctx = gggi_pipeline(ctx, &w, &p)?;
        let ids = ctx.table().keys(ctx.id_col())?;
        let ranks = rank_desc(&ids, &ctx.table().real(VALUE_COL)?);
        ctx.insert(RANK_COL, Column::Integer(ranks))?;
        Ok(ctx)
    })
}

/// Computes the index per entity of `ctx`, with ranks.
pub fn idx_gggi(ctx: &PipelineContext, weights: &[GggiWeight], params: &GggiParams) -> Result<IndexResult> {
    compute_indexes(ctx, &[gggi_recipe(weights, params)])
}
