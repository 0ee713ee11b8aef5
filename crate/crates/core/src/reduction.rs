//! Dimension reduction: weighted linear and geometric aggregation, and
//! user formulas.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::formula::{parse_formula, LinearFormula};
use crate::pipeline::Step;
use crate::table::Column;

/// Tolerance for treating a weight vector as summing to one.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// Variable name -> non-negative weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightScheme {
    entries: IndexMap<String, f64>,
}

impl WeightScheme {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, f64)>) -> Result<Self> {
        let mut map = IndexMap::new();
        for (k, w) in entries {
            let k = k.into();
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWeights(format!("weight for `{k}` is {w}")));
            }
            if map.insert(k.clone(), w).is_some() {
                return Err(Error::InvalidWeights(format!("duplicate variable `{k}`")));
            }
        }
        if !map.values().any(|&w| w > 0.0) {
            return Err(Error::InvalidWeights("no positive weight".into()));
        }
        Ok(WeightScheme { entries: map })
    }

    /// `n` variables with weight `1/n` each.
    pub fn equal<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        let w = 1.0 / vars.len() as f64;
        Self::new(vars.into_iter().map(|v| (v, w)))
    }

    pub fn sum(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.sum() - 1.0).abs() <= NORMALIZED_TOL
    }

    pub fn normalized(&self) -> Self {
        let s = self.sum();
        WeightScheme {
            entries: self.entries.iter().map(|(k, w)| (k.clone(), w / s)).collect(),
        }
    }

    pub fn get(&self, var: &str) -> Option<f64> {
        self.entries.get(var).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, w)| (k.as_str(), *w))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Restricts the scheme to `vars`, in that order.
    pub fn subset(&self, vars: &[String]) -> Result<Self> {
        let entries = vars
            .iter()
            .map(|v| {
                self.get(v)
                    .map(|w| (v.clone(), w))
                    .ok_or_else(|| Error::UnresolvedWeight(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }
}

/// Where aggregation weights come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    Explicit(WeightScheme),
    /// A numeric column of the attached metadata table.
    Meta(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateSpec {
    pub name: String,
    /// Column names; `a:b` selects the columns from `a` to `b` in table
    /// order. Empty means every variable the weights name.
    #[serde(default)]
    pub vars: Vec<String>,
    pub weights: WeightSource,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaSpec {
    pub name: String,
    pub formula: String,
}

fn expand_vars(ctx: &PipelineContext, vars: &[String]) -> Result<Vec<String>> {
    let names: Vec<&str> = ctx.table().names().collect();
    let mut out = Vec::new();
    for v in vars {
        match v.split_once(':') {
            Some((a, b)) => {
                let pos = |x: &str| {
                    names
                        .iter()
                        .position(|n| *n == x.trim())
                        .ok_or_else(|| Error::UnknownColumn(x.trim().to_string()))
                };
                let (i, j) = (pos(a)?, pos(b)?);
                let (i, j) = (i.min(j), i.max(j));
                out.extend(names[i..=j].iter().map(|s| s.to_string()));
            }
            None => out.push(v.clone()),
        }
    }
    Ok(out)
}

fn resolve_weights(ctx: &mut PipelineContext, spec: &AggregateSpec) -> Result<(Vec<String>, WeightScheme)> {
    let scheme = match &spec.weights {
        WeightSource::Explicit(w) => w.clone(),
        WeightSource::Meta(col) => {
            let meta = ctx
                .meta()
                .ok_or_else(|| Error::Schema("no metadata attached for weight lookup".into()))?;
            let map = meta.lookup(col)?;
            // keep table column order
            let ordered: Vec<(String, f64)> = ctx
                .table()
                .names()
                .filter_map(|n| map.get(n).map(|w| (n.to_string(), *w)))
                .collect();
            WeightScheme::new(ordered)?
        }
    };
    let vars = if spec.vars.is_empty() {
        scheme.vars().map(str::to_string).collect()
    } else {
        expand_vars(ctx, &spec.vars)?
    };
    let scheme = scheme.subset(&vars)?;
    let scheme = if scheme.is_normalized() {
        scheme
    } else {
        ctx.notice(
            "dimension_reduction",
            format!("weights for `{}` sum to {}; normalized", spec.name, scheme.sum()),
        );
        scheme.normalized()
    };
    Ok((vars, scheme))
}

/// Row-wise combination; any null contributor nulls the row. Returns the
/// values and the per-row count of null contributors.
fn combine(
    ctx: &PipelineContext,
    vars: &[String],
    f: impl Fn(&[f64]) -> f64,
) -> Result<(Vec<Option<f64>>, Vec<i64>)> {
    let cols: Vec<Vec<Option<f64>>> = vars.iter().map(|v| ctx.table().real(v)).collect::<Result<_>>()?;
    let n = ctx.table().nrows();
    let mut out = Vec::with_capacity(n);
    let mut missing = Vec::with_capacity(n);
    let mut row = Vec::with_capacity(vars.len());
    for i in 0..n {
        row.clear();
        row.extend(cols.iter().filter_map(|c| c[i]));
        let miss = (vars.len() - row.len()) as i64;
        missing.push(miss);
        out.push((miss == 0).then(|| f(&row)));
    }
    Ok((out, missing))
}

fn attach(ctx: &mut PipelineContext, name: &str, values: Vec<Option<f64>>, missing: Vec<i64>) -> Result<()> {
    if missing.iter().any(|&m| m > 0) {
        let mut per_entity: BTreeMap<String, i64> = BTreeMap::new();
        for (id, rows) in ctx.entity_rows()? {
            let c = rows.iter().filter(|&&i| missing[i] > 0).count() as i64;
            if c > 0 {
                per_entity.insert(id, c);
            }
        }
        let summary: Vec<String> = per_entity.iter().map(|(k, v)| format!("{k}: {v}")).collect();
        ctx.notice(
            "dimension_reduction",
            format!("`{name}` is null where a contributor is missing ({})", summary.join(", ")),
        );
        ctx.insert(&format!("{name}.missing"), Column::integer(missing))?;
    }
    ctx.insert(name, Column::Real(values))
}

/// Adds `spec.name = Σ w_j x_j` with normalized weights.
pub fn aggregate_linear(mut ctx: PipelineContext, spec: &AggregateSpec) -> Result<PipelineContext> {
    let (vars, w) = resolve_weights(&mut ctx, spec)?;
    let ws: Vec<f64> = vars.iter().map(|v| w.get(v).expect("resolved")).collect();
    let (values, missing) = combine(&ctx, &vars, |xs| xs.iter().zip(&ws).map(|(x, w)| w * x).sum())?;
    attach(&mut ctx, &spec.name, values, missing)?;
    ctx.record(&Step::AggregateLinear(spec.clone()));
    Ok(ctx)
}

/// Adds `spec.name = Π x_j^{w_j}`. All contributing values must be positive.
pub fn aggregate_geometric(mut ctx: PipelineContext, spec: &AggregateSpec) -> Result<PipelineContext> {
    let (vars, w) = resolve_weights(&mut ctx, spec)?;
    for v in &vars {
        let xs = ctx.table().real(v)?;
        let bad: Vec<String> = xs
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_some_and(|x| x <= 0.0))
            .map(|(i, _)| ctx.row_label(i))
            .collect();
        if !bad.is_empty() {
            return Err(Error::Domain {
                op: "aggregate_geometric",
                column: v.clone(),
                rows: bad,
            });
        }
    }
    let ws: Vec<f64> = vars.iter().map(|v| w.get(v).expect("resolved")).collect();
    let (values, missing) = combine(&ctx, &vars, |xs| {
        xs.iter().zip(&ws).map(|(x, w)| w * x.ln()).sum::<f64>().exp()
    })?;
    attach(&mut ctx, &spec.name, values, missing)?;
    ctx.record(&Step::AggregateGeometric(spec.clone()));
    Ok(ctx)
}

/// Evaluates a parsed formula row-wise into `name`.
pub fn evaluate_formula(mut ctx: PipelineContext, formula: &LinearFormula, name: &str) -> Result<PipelineContext> {
    let vars: Vec<String> = formula.variables().map(str::to_string).collect();
    for v in &vars {
        ctx.table().column(v)?;
    }
    let coefs: Vec<f64> = formula.terms.iter().map(|t| t.coef).collect();
    let (values, missing) = combine(&ctx, &vars, |xs| xs.iter().zip(&coefs).map(|(x, c)| c * x).sum())?;
    attach(&mut ctx, name, values, missing)?;
    ctx.record(&Step::ManualInput(FormulaSpec {
        name: name.to_string(),
        formula: formula.to_string(),
    }));
    Ok(ctx)
}

pub fn manual_input(ctx: PipelineContext, spec: &FormulaSpec) -> Result<PipelineContext> {
    let f = parse_formula(&spec.formula)?;
    evaluate_formula(ctx, &f, &spec.name)
}

/// Weights proportional to `1 / sd_j` (sample sd over non-null rows),
/// scaled to sum to one.
pub fn weights_from_inverse_sd(ctx: &PipelineContext, vars: &[String]) -> Result<WeightScheme> {
    let vars = expand_vars(ctx, vars)?;
    let mut inv = Vec::with_capacity(vars.len());
    for v in &vars {
        let xs: Vec<f64> = ctx.table().real(v)?.into_iter().flatten().collect();
        if xs.len() < 2 {
            return Err(Error::InsufficientSample { n: xs.len(), needed: 2 });
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        if !(sd > 0.0) {
            return Err(Error::ConstantColumn(v.clone()));
        }
        inv.push((v.clone(), 1.0 / sd));
    }
    Ok(WeightScheme::new(inv)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::TidyTable;

    fn ctx(cols: &[(&str, &[f64])]) -> PipelineContext {
        let n = cols[0].1.len();
        let mut all = vec![("id".to_string(), Column::text((0..n).map(|i| format!("e{i}"))))];
        all.extend(cols.iter().map(|(k, v)| (k.to_string(), Column::real(v.iter().copied()))));
        PipelineContext::init(TidyTable::from_columns(all).unwrap(), "id", None, None).unwrap()
    }

    fn explicit(ws: &[(&str, f64)]) -> WeightSource {
        WeightSource::Explicit(WeightScheme::new(ws.iter().map(|(k, w)| (k.to_string(), *w))).unwrap())
    }

    fn col(c: &PipelineContext, name: &str) -> Vec<Option<f64>> {
        c.table().real(name).unwrap()
    }

    #[test]
    fn health_dimension_weights() {
        let c = ctx(&[("sex_ratio", &[0.944]), ("life_expectancy", &[1.06])]);
        let spec = AggregateSpec {
            name: "health".into(),
            vars: vec![],
            weights: explicit(&[("sex_ratio", 0.693), ("life_expectancy", 0.307)]),
        };
        let out = aggregate_linear(c, &spec).unwrap();
        let v = col(&out, "health")[0].unwrap();
        assert!((v - (0.693 * 0.944 + 0.307 * 1.06)).abs() < 1e-15);
    }

    #[test]
    fn convex_fixed_point() {
        let c = ctx(&[("a", &[0.7]), ("b", &[0.7]), ("c", &[0.7])]);
        let spec = AggregateSpec {
            name: "y".into(),
            vars: vec!["a:c".into()],
            weights: explicit(&[("a", 0.2), ("b", 0.3), ("c", 0.5)]),
        };
        let v = col(&aggregate_linear(c, &spec).unwrap(), "y")[0].unwrap();
        assert!((v - 0.7).abs() < 1e-15);
    }

    #[test]
    fn auto_normalize_notice() {
        let c = ctx(&[("a", &[1.0]), ("b", &[3.0])]);
        let spec = AggregateSpec {
            name: "y".into(),
            vars: vec![],
            weights: explicit(&[("a", 1.0), ("b", 1.0)]),
        };
        let out = aggregate_linear(c, &spec).unwrap();
        assert_eq!(col(&out, "y"), [Some(2.0)]);
        assert!(out.notices()[0].message.contains("normalized"));
    }

    #[test]
    fn missing_contributor_nulls_row() {
        let t = TidyTable::from_columns([
            ("id", Column::text(["p", "q"])),
            ("a", Column::Real(vec![Some(1.0), None])),
            ("b", Column::real([1.0, 1.0])),
        ])
        .unwrap();
        let c = PipelineContext::init(t, "id", None, None).unwrap();
        let spec = AggregateSpec {
            name: "y".into(),
            vars: vec![],
            weights: explicit(&[("a", 0.5), ("b", 0.5)]),
        };
        let out = aggregate_linear(c, &spec).unwrap();
        assert_eq!(col(&out, "y"), [Some(1.0), None]);
        assert_eq!(col(&out, "y.missing"), [Some(0.0), Some(1.0)]);
        assert!(out.notices().iter().any(|n| n.message.contains("q: 1")));
    }

    #[test]
    fn unresolved_weight() {
        let c = ctx(&[("a", &[1.0]), ("b", &[1.0])]);
        let spec = AggregateSpec {
            name: "y".into(),
            vars: vec!["a".into(), "b".into()],
            weights: explicit(&[("a", 1.0)]),
        };
        assert_eq!(aggregate_linear(c, &spec).unwrap_err(), Error::UnresolvedWeight("b".into()));
    }

    #[test]
    fn weights_from_meta() {
        let c = ctx(&[("a", &[2.0]), ("b", &[4.0])]);
        let meta = TidyTable::from_columns([
            ("variable", Column::text(["a", "b"])),
            ("wgt", Column::real([0.25, 0.75])),
        ])
        .unwrap();
        let c = c.add_meta(meta, "variable").unwrap();
        let spec = AggregateSpec {
            name: "y".into(),
            vars: vec![],
            weights: WeightSource::Meta("wgt".into()),
        };
        assert_eq!(col(&aggregate_linear(c, &spec).unwrap(), "y"), [Some(3.5)]);
    }

    #[test]
    fn geometric() {
        let c = ctx(&[("a", &[4.0, 3.0]), ("b", &[9.0, 3.0])]);
        let spec = AggregateSpec {
            name: "g".into(),
            vars: vec![],
            weights: explicit(&[("a", 0.5), ("b", 0.5)]),
        };
        let out = aggregate_geometric(c, &spec).unwrap();
        let v = col(&out, "g");
        assert!((v[0].unwrap() - 6.0).abs() < 1e-12);
        assert!((v[1].unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_zero_is_domain_error() {
        let c = ctx(&[("a", &[0.0]), ("b", &[9.0])]);
        let spec = AggregateSpec {
            name: "g".into(),
            vars: vec![],
            weights: explicit(&[("a", 0.5), ("b", 0.5)]),
        };
        assert!(matches!(aggregate_geometric(c, &spec), Err(Error::Domain { .. })));
    }

    #[test]
    fn formula_evaluation() {
        let c = ctx(&[("p", &[3.0]), ("q", &[2.0])]);
        let out = manual_input(c, &FormulaSpec { name: "y".into(), formula: "2*p - 0.5*q".into() }).unwrap();
        assert_eq!(col(&out, "y"), [Some(5.0)]);
        let out = manual_input(out, &FormulaSpec { name: "z".into(), formula: "p".into() }).unwrap();
        assert_eq!(col(&out, "z"), col(&out, "p"));
    }

    #[test]
    fn formula_unknown_identifier() {
        let c = ctx(&[("p", &[3.0])]);
        let r = manual_input(c, &FormulaSpec { name: "y".into(), formula: "p + r".into() });
        assert_eq!(r.unwrap_err(), Error::UnknownColumn("r".into()));
    }

    #[test]
    fn inverse_sd_weights() {
        // sds 1 and 2
        let c = ctx(&[("a", &[-1.0, 0.0, 1.0]), ("b", &[-2.0, 0.0, 2.0]), ("c", &[5.0, 6.0, 7.0])]);
        let w = weights_from_inverse_sd(&c, &["a".into(), "b".into()]).unwrap();
        assert!((w.get("a").unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((w.get("b").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let w = weights_from_inverse_sd(&c, &["a".into(), "c".into(), "b".into()]).unwrap();
        assert!((w.get("a").unwrap() - 0.4).abs() < 1e-15);
        assert!((w.get("c").unwrap() - 0.4).abs() < 1e-15);
        assert!((w.get("b").unwrap() - 0.2).abs() < 1e-15);
        let w = weights_from_inverse_sd(&c, &["a".into(), "c".into()]).unwrap();
        assert_eq!(w.get("a"), w.get("c"));
    }

    #[test]
    fn zero_sd_rejected() {
        let c = ctx(&[("a", &[1.0, 1.0])]);
        assert!(weights_from_inverse_sd(&c, &["a".into()]).is_err());
    }
}
