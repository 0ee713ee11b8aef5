//! Pipeline context: a table with column roles, optional metadata and a
//! log of every step applied to it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::{Cell, Column, ColumnKind, TidyTable};

/// One applied step. `params` is the serialized [`Step`], which makes the
/// log replayable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub module: String,
    pub operation: String,
    pub params: serde_json::Value,
}

/// A non-fatal diagnostic raised while running a step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Notice {
    pub operation: String,
    pub message: String,
}

/// Variable-keyed metadata (usually weights) attached with [`PipelineContext::add_meta`].
#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    pub table: TidyTable,
    pub var_col: String,
    pub matched: Vec<String>,
    pub unmatched: Vec<String>,
}

impl Metadata {
    /// Looks up `column` for every matched variable. Rows with a null
    /// value in `column` are skipped.
    pub fn lookup(&self, column: &str) -> Result<BTreeMap<String, f64>> {
        let vars = self.table.keys(&self.var_col)?;
        let vals = self.table.real(column)?;
        let matched: BTreeSet<&str> = self.matched.iter().map(String::as_str).collect();
        Ok(vars
            .into_iter()
            .zip(vals)
            .filter(|(v, _)| matched.contains(v.as_str()))
            .filter_map(|(v, w)| w.map(|w| (v, w)))
            .collect())
    }

    /// Text lookup, e.g. the dimension each variable belongs to.
    pub fn lookup_text(&self, column: &str) -> Result<BTreeMap<String, String>> {
        let vars = self.table.keys(&self.var_col)?;
        let col = self.table.column(column)?;
        Ok(vars
            .into_iter()
            .enumerate()
            .filter_map(|(i, v)| match col.cell(i) {
                Cell::Null => None,
                c => Some((v, c.to_string())),
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Roles {
    pub id: String,
    pub time: Option<String>,
    pub group: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineContext {
    table: TidyTable,
    roles: Roles,
    meta: Option<Metadata>,
    seed: u64,
    step_log: Vec<StepRecord>,
    notices: Vec<Notice>,
}

impl PipelineContext {
    /// Sets column roles and sorts the table by `(id, time)`.
    pub fn init(table: TidyTable, id: &str, time: Option<&str>, group: Option<&str>) -> Result<Self> {
        Self::init_with_seed(table, id, time, group, 0)
    }

    pub fn init_with_seed(
        table: TidyTable,
        id: &str,
        time: Option<&str>,
        group: Option<&str>,
        seed: u64,
    ) -> Result<Self> {
        let check = |role: &'static str, col: &str| {
            if table.has(col) {
                Ok(())
            } else {
                Err(Error::Role {
                    role,
                    column: col.to_string(),
                })
            }
        };
        check("id", id)?;
        if let Some(t) = time {
            check("time", t)?;
            let kind = table.column(t)?.kind();
            if !matches!(kind, ColumnKind::Time | ColumnKind::Integer) {
                return Err(Error::ColumnType {
                    column: t.to_string(),
                    expected: "time",
                    found: kind.name(),
                });
            }
        }
        if let Some(g) = group {
            check("group", g)?;
        }

        let mut keys = vec![id];
        keys.extend(time);
        let table = table.sort_by(&keys)?;

        // Sorted, so duplicates are adjacent.
        let ids = table.column(id)?;
        let times = time.map(|t| table.column(t)).transpose()?;
        for i in 1..table.nrows() {
            let same_id = ids.cell(i) == ids.cell(i - 1);
            let same_time = times.is_none_or(|t| t.cell(i) == t.cell(i - 1));
            if same_id && same_time {
                return Err(Error::DuplicateKey {
                    id: ids.cell(i).to_string(),
                    time: times.map(|t| t.cell(i).to_string()).unwrap_or_default(),
                });
            }
        }

        let roles = Roles {
            id: id.to_string(),
            time: time.map(str::to_string),
            group: group.map(str::to_string),
        };
        let mut ctx = PipelineContext {
            table,
            roles: roles.clone(),
            meta: None,
            seed,
            step_log: Vec::new(),
            notices: Vec::new(),
        };
        ctx.step_log.push(StepRecord {
            module: "data".into(),
            operation: "init".into(),
            params: serde_json::json!({ "roles": roles, "seed": seed }),
        });
        Ok(ctx)
    }

    /// Attaches a metadata table keyed by the variable names in `var_col`.
    /// Variables that do not name a column of the table are reported as a
    /// notice; if none match, this is an error.
    pub fn add_meta(mut self, meta: TidyTable, var_col: &str) -> Result<Self> {
        if !meta.has(var_col) {
            return Err(Error::Schema(format!("metadata has no column `{var_col}`")));
        }
        let mut matched = Vec::new();
        let mut unmatched = Vec::new();
        for v in meta.keys(var_col)? {
            if v.is_empty() {
                continue;
            }
            if self.table.has(&v) {
                matched.push(v);
            } else {
                unmatched.push(v);
            }
        }
        if matched.is_empty() {
            return Err(Error::EmptyJoin(var_col.to_string()));
        }
        if !unmatched.is_empty() {
            self.notice("add_meta", format!("unmatched variables: {}", unmatched.join(", ")));
        }
        self.step_log.push(StepRecord {
            module: "data".into(),
            operation: "add_meta".into(),
            params: serde_json::json!({ "var_col": var_col, "matched": matched, "unmatched": unmatched }),
        });
        self.meta = Some(Metadata {
            table: meta,
            var_col: var_col.to_string(),
            matched,
            unmatched,
        });
        Ok(self)
    }

    pub fn table(&self) -> &TidyTable {
        &self.table
    }

    pub fn into_table(self) -> TidyTable {
        self.table
    }

    pub fn roles(&self) -> &Roles {
        &self.roles
    }

    pub fn id_col(&self) -> &str {
        &self.roles.id
    }

    pub fn time_col(&self) -> Option<&str> {
        self.roles.time.as_deref()
    }

    pub fn group_col(&self) -> Option<&str> {
        self.roles.group.as_deref()
    }

    pub fn meta(&self) -> Option<&Metadata> {
        self.meta.as_ref()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn step_log(&self) -> &[StepRecord] {
        &self.step_log
    }

    pub fn notices(&self) -> &[Notice] {
        &self.notices
    }

    pub fn notice(&mut self, operation: &str, message: impl Into<String>) {
        self.notices.push(Notice {
            operation: operation.to_string(),
            message: message.into(),
        });
    }

    pub(crate) fn set_table(&mut self, table: TidyTable) {
        self.table = table;
    }

    pub(crate) fn insert(&mut self, name: &str, col: Column) -> Result<()> {
        self.table.insert(name, col)
    }

    pub(crate) fn record(&mut self, step: &Step) {
        let (module, operation) = step.name();
        self.step_log.push(StepRecord {
            module: module.to_string(),
            operation: operation.to_string(),
            params: serde_json::to_value(step).expect("steps serialize"),
        });
    }

    /// Row indices grouped by entity id, in table order.
    pub fn entity_rows(&self) -> Result<Vec<(String, Vec<usize>)>> {
        Ok(group_rows(&self.table.keys(&self.roles.id)?))
    }

    /// Renders the key of row `i` as `id@time` for diagnostics.
    pub fn row_label(&self, i: usize) -> String {
        let id = self.table.cell(&self.roles.id, i).map(|c| c.to_string()).unwrap_or_default();
        match self.time_col() {
            Some(t) => format!("{id}@{}", self.table.cell(t, i).map(|c| c.to_string()).unwrap_or_default()),
            None => id,
        }
    }

    /// Re-applies every logged step to `original`, starting from the logged
    /// roles and seed. Metadata attachments are not replayable and must be
    /// supplied again through `meta`.
    pub fn replay(original: TidyTable, log: &[StepRecord], meta: Option<(TidyTable, &str)>) -> Result<Self> {
        let init = log
            .first()
            .filter(|r| r.operation == "init")
            .ok_or_else(|| Error::Config("step log does not start with init".into()))?;
        let roles: Roles = serde_json::from_value(init.params["roles"].clone())
            .map_err(|e| Error::Config(e.to_string()))?;
        let seed = init.params["seed"].as_u64().unwrap_or(0);
        let mut ctx = Self::init_with_seed(
            original,
            &roles.id,
            roles.time.as_deref(),
            roles.group.as_deref(),
            seed,
        )?;
        let mut meta = meta;
        for rec in &log[1..] {
            if rec.operation == "add_meta" {
                let (t, col) = meta
                    .take()
                    .ok_or_else(|| Error::Config("replay needs the metadata table".into()))?;
                ctx = ctx.add_meta(t, col)?;
                continue;
            }
            let step: Step = serde_json::from_value(rec.params.clone()).map_err(|e| Error::Config(e.to_string()))?;
            ctx = step.apply(ctx)?;
        }
        Ok(ctx)
    }
}

/// Groups row indices by key, preserving first-appearance order.
pub(crate) fn group_rows(keys: &[String]) -> Vec<(String, Vec<usize>)> {
    let mut out: indexmap::IndexMap<&str, Vec<usize>> = indexmap::IndexMap::new();
    for (i, k) in keys.iter().enumerate() {
        out.entry(k.as_str()).or_default().push(i);
    }
    out.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::YearMonth;

    fn ym(y: i32, m: u32) -> YearMonth {
        YearMonth::new(y, m).unwrap()
    }

    #[test]
    fn init_sets_roles_and_sorts() {
        let t = TidyTable::from_columns([
            ("id", Column::text(["b", "a", "a"])),
            ("ym", Column::time([ym(1990, 1), ym(1990, 2), ym(1990, 1)])),
            ("month", Column::integer([1, 2, 1])),
            ("prcp", Column::real([1.0, 2.0, 3.0])),
        ])
        .unwrap();
        let ctx = PipelineContext::init(t, "id", Some("ym"), Some("month")).unwrap();
        assert_eq!(ctx.roles().group.as_deref(), Some("month"));
        assert_eq!(ctx.table().keys("id").unwrap(), ["a", "a", "b"]);
        assert_eq!(ctx.table().real("prcp").unwrap(), [Some(3.0), Some(2.0), Some(1.0)]);
        assert_eq!(ctx.step_log().len(), 1);
        assert_eq!(ctx.step_log()[0].operation, "init");
    }

    #[test]
    fn single_row_id_only() {
        let t = TidyTable::from_columns([("id", Column::text(["x"]))]).unwrap();
        let ctx = PipelineContext::init(t, "id", None, None).unwrap();
        assert_eq!(ctx.table().nrows(), 1);
    }

    #[test]
    fn duplicate_key_rejected() {
        let t = TidyTable::from_columns([
            ("id", Column::text(["a", "a"])),
            ("ym", Column::time([ym(1990, 12), ym(1990, 12)])),
        ])
        .unwrap();
        let err = PipelineContext::init(t, "id", Some("ym"), None).unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateKey {
                id: "a".into(),
                time: "1990-12".into()
            }
        );
    }

    #[test]
    fn unknown_role_column() {
        let t = TidyTable::from_columns([("id", Column::text(["a"]))]).unwrap();
        assert!(matches!(
            PipelineContext::init(t, "id", Some("ym"), None),
            Err(Error::Role { role: "time", .. })
        ));
    }

    fn one_var() -> PipelineContext {
        let t = TidyTable::from_columns([("id", Column::text(["a"])), ("x1", Column::real([1.0]))]).unwrap();
        PipelineContext::init(t, "id", None, None).unwrap()
    }

    #[test]
    fn add_meta_single_match() {
        let meta = TidyTable::from_columns([("variable", Column::text(["x1"])), ("wgt", Column::real([1.0]))]).unwrap();
        let ctx = one_var().add_meta(meta, "variable").unwrap();
        assert_eq!(ctx.meta().unwrap().lookup("wgt").unwrap()["x1"], 1.0);
        assert!(ctx.notices().is_empty());
    }

    #[test]
    fn add_meta_unmatched_is_noticed() {
        let meta = TidyTable::from_columns([
            ("variable", Column::text(["x1", "nope"])),
            ("wgt", Column::real([0.5, 0.5])),
        ])
        .unwrap();
        let ctx = one_var().add_meta(meta, "variable").unwrap();
        assert_eq!(ctx.meta().unwrap().unmatched, ["nope"]);
        assert!(ctx.notices()[0].message.contains("nope"));
    }

    #[test]
    fn add_meta_errors() {
        let meta = TidyTable::from_columns([("variable", Column::text(["zz"]))]).unwrap();
        assert!(matches!(one_var().add_meta(meta.clone(), "variable"), Err(Error::EmptyJoin(_))));
        assert!(matches!(one_var().add_meta(meta, "var"), Err(Error::Schema(_))));
    }
}
