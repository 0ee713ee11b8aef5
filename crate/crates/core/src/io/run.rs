//! Executes a [`PipelineConfig`]: one output file plus a manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::context::{Notice, PipelineContext, StepRecord};
use crate::error::{Error, Result};
use crate::grid::{compute_indexes, ComboRun, Recipe, DIST_COL, IDX_COL, SCALE_COL};
use crate::indexes::gggi::{
    self, dimension_weights, gggi_recipe, gggi_weights, weights_from_table, GggiMode, GggiParams, GggiWeight,
};
use crate::indexes::{spei_recipe, spi_recipe};
use crate::io::config::{Format, InputSchema, PipelineConfig};
use crate::io::csv::{read_station_csv_path, read_table_csv_path, table_to_json_records, write_table_csv, Schema};
use crate::pipeline::run_steps;
use crate::table::TidyTable;
use crate::uncertainty::sweep::frames_table;
use crate::uncertainty::{bootstrap_ci, weight_sweep};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowCounts {
    pub input: usize,
    pub output: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        Failure {
            error: e.kind(),
            message: e.to_string(),
        }
    }
}

/// Everything needed to audit or replay a run. Contains no timestamps,
/// so identical runs give identical manifests.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub seed: u64,
    pub config_hash: String,
    pub config: PipelineConfig,
    pub prcp_unit: Option<String>,
    /// Steps applied to the input before the recipes.
    pub step_log: Vec<StepRecord>,
    pub combos: Vec<ComboRun>,
    pub failures: Vec<Failure>,
    pub notices: Vec<Notice>,
    pub row_counts: RowCounts,
    pub columns: Schema,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub output: PathBuf,
    pub manifest: PathBuf,
    pub table: TidyTable,
    pub failures: Vec<Error>,
}

/// `<output file name>.manifest.json` next to the output.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

fn load_weights(path: Option<&PathBuf>) -> Result<Vec<GggiWeight>> {
    match path {
        Some(p) => weights_from_table(&read_table_csv_path(p, None)?),
        None => Ok(gggi_weights()),
    }
}

pub fn read_input(config: &PipelineConfig) -> Result<TidyTable> {
    match config.input.schema {
        InputSchema::Station => read_station_csv_path(&config.input.path),
        InputSchema::Table => read_table_csv_path(&config.input.path, None),
    }
}

fn recipes(config: &PipelineConfig) -> Result<Vec<Recipe>> {
    let mut out = Vec::new();
    let boot = |n: usize| if n > 1 { n } else { config.n_boot };
    if let Some(p) = &config.recipes.spi {
        let mut p = p.clone();
        p.n_boot = boot(p.n_boot);
        out.push(spi_recipe(&p)?);
    }
    if let Some(p) = &config.recipes.spei {
        let mut p = p.clone();
        p.n_boot = boot(p.n_boot);
        out.push(spei_recipe(&p)?);
    }
    if let Some(g) = &config.recipes.gggi {
        out.push(gggi_recipe(&load_weights(g.weights.as_ref())?, &g.params));
    }
    Ok(out)
}

struct Computed {
    table: TidyTable,
    combos: Vec<ComboRun>,
    failures: Vec<Error>,
}

fn compute(config: &PipelineConfig, ctx: &PipelineContext) -> Result<Computed> {
    if let Some(s) = &config.sweep {
        let weights = load_weights(s.weights.as_ref())?;
        let base = dimension_weights(&weights)?;
        // Build the dimension columns first when only the raw variables are given.
        let ctx = if base.vars().all(|d| ctx.table().has(d)) {
            ctx.clone()
        } else {
            let params = GggiParams {
                mode: GggiMode::TwoStage,
                ..GggiParams::default()
            };
            let res = gggi::idx_gggi(ctx, &weights, &params)?;
            PipelineContext::init_with_seed(res.table, ctx.id_col(), None, None, ctx.seed())?
        };
        let frames = weight_sweep(&ctx, &base, &s.spec)?;
        return Ok(Computed {
            table: frames_table(&frames, ctx.id_col())?,
            combos: Vec::new(),
            failures: Vec::new(),
        });
    }
    if config.recipes.is_empty() {
        return Ok(Computed {
            table: ctx.table().clone(),
            combos: Vec::new(),
            failures: Vec::new(),
        });
    }
    let res = compute_indexes(ctx, &recipes(config)?)?;
    let table = if config.n_boot > 1 {
        let mut keys = vec![IDX_COL, DIST_COL, SCALE_COL, ctx.id_col()];
        keys.extend(ctx.time_col());
        bootstrap_ci(&res.table, &keys, &config.levels)?.to_table()?
    } else {
        res.table
    };
    Ok(Computed {
        table,
        combos: res.runs,
        failures: res.failures,
    })
}

pub fn write_output(table: &TidyTable, path: &Path, format: Format) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        Format::Csv => write_table_csv(table, &mut f)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut f, &table_to_json_records(table)).map_err(|e| Error::Io(e.to_string()))?;
            std::io::Write::write_all(&mut f, b"\n")?;
        }
    }
    std::io::Write::flush(&mut f)?;
    Ok(())
}

/// Runs `config`, writing the output and its manifest. Failing combos are
/// reported in the result and the manifest; any other error aborts.
pub fn run(config: &PipelineConfig) -> Result<RunReport> {
    config.validate()?;
    let input = read_input(config)?;
    let n_input = input.nrows();
    let init = &config.init;
    let ctx = PipelineContext::init_with_seed(
        input,
        &init.id,
        init.time.as_deref(),
        init.group.as_deref(),
        config.seed,
    )?;
    let ctx = run_steps(ctx, &config.steps)?;
    let Computed {
        table,
        combos,
        failures,
    } = compute(config, &ctx)?;

    write_output(&table, &config.output.path, config.output.format)?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed,
        config_hash: config.hash(),
        config: config.clone(),
        prcp_unit: config.prcp_unit.clone(),
        step_log: ctx.step_log().to_vec(),
        combos,
        failures: failures.iter().map(Failure::from).collect(),
        notices: ctx.notices().to_vec(),
        row_counts: RowCounts {
            input: n_input,
            output: table.nrows(),
        },
        columns: Schema::of(&table),
    };
    let mpath = manifest_path(&config.output.path);
    let mut text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(&mpath, text)?;
    Ok(RunReport {
        output: config.output.path.clone(),
        manifest: mpath,
        table,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_sits_beside_output() {
        assert_eq!(
            manifest_path(Path::new("/tmp/out/spi.csv")),
            PathBuf::from("/tmp/out/spi.csv.manifest.json")
        );
    }
}
