//! Parameter grids and the multi-recipe driver.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::context::{Notice, PipelineContext, StepRecord};
use crate::error::{Error, Result};
use crate::pipeline::{run_steps, Step};
use crate::table::{Column, TidyTable};

pub const IDX_COL: &str = ".idx";
pub const DIST_COL: &str = ".dist";
pub const SCALE_COL: &str = ".scale";
pub const VALUE_COL: &str = ".value";

/// A single grid coordinate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl ParamValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            ParamValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            ParamValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

/// One point of a [`ParameterGrid`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Combo(pub IndexMap<String, ParamValue>);

impl Combo {
    pub fn get(&self, axis: &str) -> Option<&ParamValue> {
        self.0.get(axis)
    }

    pub fn int(&self, axis: &str) -> Result<i64> {
        self.get(axis)
            .and_then(ParamValue::as_int)
            .ok_or_else(|| Error::InvalidParameter(format!("combo has no integer `{axis}`")))
    }

    pub fn text(&self, axis: &str) -> Result<&str> {
        self.get(axis)
            .and_then(ParamValue::as_text)
            .ok_or_else(|| Error::InvalidParameter(format!("combo has no text `{axis}`")))
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Named axes; the grid is their Cartesian product.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IndexMap<String, Vec<ParamValue>>", into = "IndexMap<String, Vec<ParamValue>>")]
pub struct ParameterGrid {
    axes: IndexMap<String, Vec<ParamValue>>,
}

impl ParameterGrid {
    /// The grid with no axes, which has exactly one (empty) combo.
    pub fn single() -> Self {
        Self::default()
    }

    pub fn axis<V: Into<ParamValue>>(mut self, name: &str, values: impl IntoIterator<Item = V>) -> Result<Self> {
        let values: Vec<ParamValue> = values.into_iter().map(Into::into).collect();
        if values.is_empty() {
            return Err(Error::InvalidParameter(format!("grid axis `{name}` is empty")));
        }
        self.axes.insert(name.to_string(), values);
        Ok(self)
    }

    pub fn axes(&self) -> &IndexMap<String, Vec<ParamValue>> {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.values().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All combos; the last axis varies fastest.
    pub fn combos(&self) -> Vec<Combo> {
        let mut out = vec![Combo::default()];
        for (name, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|c| {
                    values.iter().map(move |v| {
                        let mut c = c.clone();
                        c.0.insert(name.clone(), v.clone());
                        c
                    })
                })
                .collect();
        }
        out
    }
}

impl TryFrom<IndexMap<String, Vec<ParamValue>>> for ParameterGrid {
    type Error = Error;

    fn try_from(axes: IndexMap<String, Vec<ParamValue>>) -> Result<Self> {
        axes.into_iter().try_fold(ParameterGrid::single(), |g, (k, v)| g.axis(&k, v))
    }
}

impl From<ParameterGrid> for IndexMap<String, Vec<ParamValue>> {
    fn from(g: ParameterGrid) -> Self {
        g.axes
    }
}

type RecipeFn = dyn Fn(PipelineContext, &Combo) -> Result<PipelineContext> + Send + Sync;

/// A named pipeline evaluated over every combo of its grid.
#[derive(Clone)]
pub struct Recipe {
    pub name: String,
    pub grid: ParameterGrid,
    /// Column that becomes `.value`.
    pub value_col: String,
    run: Arc<RecipeFn>,
}

impl fmt::Debug for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Recipe")
            .field("name", &self.name)
            .field("grid", &self.grid)
            .field("value_col", &self.value_col)
            .finish_non_exhaustive()
    }
}

impl Recipe {
    pub fn new(
        name: &str,
        grid: ParameterGrid,
        value_col: &str,
        run: impl Fn(PipelineContext, &Combo) -> Result<PipelineContext> + Send + Sync + 'static,
    ) -> Self {
        Recipe {
            name: name.to_string(),
            grid,
            value_col: value_col.to_string(),
            run: Arc::new(run),
        }
    }

    /// A recipe whose pipeline is a list of steps built from the combo.
    pub fn from_steps(
        name: &str,
        grid: ParameterGrid,
        value_col: &str,
        steps: impl Fn(&Combo) -> Result<Vec<Step>> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, grid, value_col, move |ctx, combo| run_steps(ctx, &steps(combo)?))
    }

    pub fn run(&self, ctx: PipelineContext, combo: &Combo) -> Result<PipelineContext> {
        (self.run)(ctx, combo)
    }
}

/// Provenance of one successfully evaluated combo.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComboRun {
    pub recipe: String,
    pub combo: Combo,
    pub rows: usize,
    pub step_log: Vec<StepRecord>,
    pub notices: Vec<Notice>,
}

/// Stacked output of [`compute_indexes`].
#[derive(Clone, Debug, PartialEq)]
pub struct IndexResult {
    pub table: TidyTable,
    pub runs: Vec<ComboRun>,
    /// One [`Error::Recipe`] per failed combo.
    pub failures: Vec<Error>,
}

fn finish_combo(
    original: &[String],
    recipe: &Recipe,
    combo: &Combo,
    ctx: PipelineContext,
) -> Result<(TidyTable, ComboRun)> {
    let step_log = ctx.step_log().to_vec();
    let notices = ctx.notices().to_vec();
    let mut t = ctx.into_table();
    let n = t.nrows();
    if !t.has(&recipe.value_col) {
        return Err(Error::UnknownColumn(recipe.value_col.clone()));
    }
    t.rename(&recipe.value_col, VALUE_COL)?;
    t.insert(IDX_COL, Column::text(std::iter::repeat_n(recipe.name.as_str(), n)))?;
    let dist = combo.get("dist").map(|d| d.to_string());
    t.insert(DIST_COL, Column::Text(vec![dist; n]))?;
    let scale = combo.get("scale").and_then(ParamValue::as_int);
    t.insert(SCALE_COL, Column::Integer(vec![scale; n]))?;
    order_columns(&mut t, original);
    Ok((
        t,
        ComboRun {
            recipe: recipe.name.clone(),
            combo: combo.clone(),
            rows: n,
            step_log,
            notices,
        },
    ))
}

/// Original columns, then `.idx .dist .scale .value`, then intermediates.
fn order_columns(t: &mut TidyTable, original: &[String]) {
    let mut first: Vec<&str> = original.iter().map(String::as_str).collect();
    first.extend([IDX_COL, DIST_COL, SCALE_COL, VALUE_COL]);
    t.reorder(&first);
}

/// Evaluates every recipe over every combo of its grid and stacks the
/// results in `(recipe, combo)` order. Combos are evaluated in parallel;
/// a failing combo is reported in [`IndexResult::failures`] and does not
/// affect the others. Fails only when no combo succeeds.
pub fn compute_indexes(ctx: &PipelineContext, recipes: &[Recipe]) -> Result<IndexResult> {
    let original: Vec<String> = ctx.table().names().map(str::to_string).collect();
    let jobs: Vec<(&Recipe, Combo)> = recipes
        .iter()
        .flat_map(|r| r.grid.combos().into_iter().map(move |c| (r, c)))
        .collect();
    if jobs.is_empty() {
        return Err(Error::InvalidParameter("no recipes to compute".into()));
    }

    let results: Vec<Result<(TidyTable, ComboRun)>> = jobs
        .par_iter()
        .map(|(r, c)| {
            r.run(ctx.clone(), c)
                .and_then(|out| finish_combo(&original, r, c, out))
                .map_err(|e| Error::Recipe {
                    recipe: r.name.clone(),
                    combo: c.to_string(),
                    source: Box::new(e),
                })
        })
        .collect();

    let mut tables = Vec::new();
    let mut runs = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok((t, run)) => {
                tables.push(t);
                runs.push(run);
            }
            Err(e) => failures.push(e),
        }
    }
    if tables.is_empty() {
        return Err(failures.swap_remove(0));
    }
    let mut table = TidyTable::vstack(&tables)?;
    order_columns(&mut table, &original);
    Ok(IndexResult { table, runs, failures })
}
