//! Piecewise-constant categorisation of a continuous index.

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::Column;

/// Strictly decreasing cuts `c_0 > c_1 > … > c_{m-1}` and `m + 1` labels.
///
/// Intervals are closed on the left: `x >= c_0` gets `labels[0]`,
/// `c_i <= x < c_{i-1}` gets `labels[i]`, and `x < c_{m-1}` gets
/// `labels[m]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplificationScheme {
    cuts: Vec<f64>,
    labels: Vec<String>,
}

impl SimplificationScheme {
    pub fn new<S: Into<String>>(cuts: Vec<f64>, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != cuts.len() + 1 {
            return Err(Error::Scheme(format!(
                "{} cuts need {} labels, got {}",
                cuts.len(),
                cuts.len() + 1,
                labels.len()
            )));
        }
        if cuts.iter().any(|c| !c.is_finite()) {
            return Err(Error::Scheme("cuts must be finite".into()));
        }
        if cuts.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Scheme(format!("cuts must be strictly decreasing: {cuts:?}")));
        }
        Ok(SimplificationScheme { cuts, labels })
    }

    /// Mild / moderate / severe / extreme drought at -1, -1.5, -2.
    pub fn drought() -> Self {
        Self::new(
            vec![-1.0, -1.5, -2.0],
            ["mild drought", "moderate drought", "severe drought", "extreme drought"],
        )
        .expect("valid scheme")
    }

    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Category rank; 0 is the top interval.
    pub fn rank(&self, x: f64) -> usize {
        self.cuts.iter().position(|&c| x >= c).unwrap_or(self.cuts.len())
    }

    pub fn classify(&self, x: f64) -> &str {
        &self.labels[self.rank(x)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplifySpec {
    pub var: String,
    pub scheme: SimplificationScheme,
    #[serde(default = "default_out")]
    pub out: String,
}

fn default_out() -> String {
    ".category".into()
}

/// Adds a text column of category labels.
pub fn simplify(mut ctx: PipelineContext, spec: &SimplifySpec) -> Result<PipelineContext> {
    // re-validate: the scheme may have been deserialized
    let scheme = SimplificationScheme::new(spec.scheme.cuts.clone(), spec.scheme.labels.clone())?;
    let xs = ctx.table().real(&spec.var)?;
    let cats = xs
        .iter()
        .map(|x| x.filter(|x| !x.is_nan()).map(|x| scheme.classify(x).to_string()))
        .collect();
    ctx.insert(&spec.out, Column::Text(cats))?;
    ctx.record(&Step::Simplify(spec.clone()));
    Ok(ctx)
}
