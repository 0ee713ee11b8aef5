use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use indexflow::dist::Family;
use indexflow::indexes::{GggiMode, GggiParams, SpeiParams, SpiParams};
use indexflow::io::config::{GggiConfig, InitConfig, InputConfig, InputSchema, OutputConfig, RecipesConfig, SweepConfig};
use indexflow::io::{load_config, run, Format, PipelineConfig};
use indexflow::uncertainty::SweepSpec;
use indexflow::Error;

/// Composite index pipelines: drought indexes, gender-gap index, bootstrap
/// intervals and weight sweeps.
#[derive(Parser)]
#[command(name = "indexflow", version)]
struct Cli {
    /// Output format (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Random seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Only report errors.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input CSV.
    #[arg(long = "in", value_name = "CSV")]
    input: PathBuf,
    /// Output file; a manifest is written next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Station {
    #[command(flatten)]
    io: Io,
    /// Time scales in months.
    #[arg(long, value_delimiter = ',', default_value = "6,12,24,36")]
    scale: Vec<usize>,
    /// Precipitation column.
    #[arg(long, default_value = "prcp")]
    prcp: String,
    /// Declared precipitation unit, recorded in the manifest.
    #[arg(long)]
    prcp_unit: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML config (or the config recorded in a manifest).
    Compute {
        config: PathBuf,
        /// Write the output here instead of the configured path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standardized precipitation index.
    Spi {
        #[command(flatten)]
        station: Station,
        #[arg(long, value_delimiter = ',', default_value = "gamma")]
        dist: Vec<Family>,
    },
    /// Standardized precipitation-evapotranspiration index.
    Spei {
        #[command(flatten)]
        station: Station,
        #[arg(long, value_delimiter = ',', default_value = "gev,glo")]
        dist: Vec<Family>,
    },
    /// Gender gap index with ranks.
    Gggi {
        #[command(flatten)]
        io: Io,
        /// Weight table CSV (Variable, V-wgt, Dimension, D-wgt, wgt).
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dimension")]
        mode: Mode,
        /// Cap ratios at 1 before aggregating.
        #[arg(long)]
        truncate: bool,
        #[arg(long, default_value = "country")]
        id: String,
    },
    /// Bootstrap confidence intervals for SPI.
    Bootstrap {
        #[command(flatten)]
        station: Station,
        #[arg(long, default_value_t = 100)]
        n_boot: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.8,0.95")]
        levels: Vec<f64>,
        #[arg(long, default_value = "gamma")]
        dist: Family,
    },
    /// Vary one dimension weight and track index values and ranks.
    Sweep {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value = "politics")]
        target: String,
        /// `lo:hi`
        #[arg(long, default_value = "0.07:0.52", value_parser = parse_range)]
        range: (f64, f64),
        #[arg(long, default_value_t = 29)]
        frames: usize,
        /// Add a frame at the target's base weight.
        #[arg(long)]
        anchor: bool,
        #[arg(long, default_value = "country")]
        id: String,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Composite,
    TwoStage,
    Dimension,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((p(a)?, p(b)?))
}

fn abs(p: &Path) -> PathBuf {
    std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf())
}

fn base_config(io: &Io, schema: InputSchema, init: InitConfig) -> PipelineConfig {
    PipelineConfig {
        seed: 0,
        n_boot: 1,
        levels: indexflow::uncertainty::DEFAULT_LEVELS.to_vec(),
        prcp_unit: None,
        input: InputConfig {
            path: abs(&io.input),
            schema,
        },
        init,
        steps: Vec::new(),
        recipes: RecipesConfig::default(),
        sweep: None,
        output: OutputConfig {
            path: abs(&io.out),
            format: Format::Csv,
        },
    }
}

fn station_config(s: &Station) -> PipelineConfig {
    let mut c = base_config(
        &s.io,
        InputSchema::Station,
        InitConfig {
            id: "id".into(),
            time: Some("ym".into()),
            group: Some("month".into()),
        },
    );
    c.prcp_unit = s.prcp_unit.clone();
    c
}

fn country_config(io: &Io, id: &str) -> PipelineConfig {
    base_config(
        io,
        InputSchema::Table,
        InitConfig {
            id: id.to_string(),
            time: None,
            group: None,
        },
    )
}

fn build(cmd: &Command) -> indexflow::Result<PipelineConfig> {
    Ok(match cmd {
        Command::Compute { config, out } => {
            let mut c = load_config(config)?;
            if let Some(o) = out {
                c.output.path = abs(o);
            }
            c
        }
        Command::Spi { station, dist } => {
            let mut c = station_config(station);
            c.recipes.spi = Some(SpiParams {
                prcp: station.prcp.clone(),
                dists: dist.clone(),
                ..SpiParams::new(&station.scale)
            });
            c
        }
        Command::Spei { station, dist } => {
            let mut c = station_config(station);
            c.recipes.spei = Some(SpeiParams {
                prcp: station.prcp.clone(),
                ..SpeiParams::new(&station.scale, dist)
            });
            c
        }
        Command::Bootstrap {
            station,
            n_boot,
            levels,
            dist,
        } => {
            let mut c = station_config(station);
            c.n_boot = *n_boot;
            c.levels = levels.clone();
            c.recipes.spi = Some(SpiParams {
                prcp: station.prcp.clone(),
                dists: vec![*dist],
                ..SpiParams::new(&station.scale)
            });
            c
        }
        Command::Gggi {
            io,
            weights,
            mode,
            truncate,
            id,
        } => {
            let mut c = country_config(io, id);
            c.recipes.gggi = Some(GggiConfig {
                params: GggiParams {
                    mode: match mode {
                        Mode::Composite => GggiMode::Composite,
                        Mode::TwoStage => GggiMode::TwoStage,
                        Mode::Dimension => GggiMode::Dimension,
                    },
                    truncate: *truncate,
                    dimension_weights: None,
                },
                weights: weights.as_deref().map(abs),
            });
            c
        }
        Command::Sweep {
            io,
            weights,
            target,
            range,
            frames,
            anchor,
            id,
        } => {
            let mut c = country_config(io, id);
            c.sweep = Some(SweepConfig {
                spec: SweepSpec {
                    n_frames: *frames,
                    anchor: *anchor,
                    ..SweepSpec::new(target, range.0, range.1)
                },
                weights: weights.as_deref().map(abs),
            });
            c
        }
    })
}

fn error_json(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build(&cli.command).and_then(|mut config| {
        if let Some(s) = cli.seed {
            config.seed = s;
        }
        if let Some(f) = cli.format {
            config.output.format = f;
        }
        run(&config)
    });
    match result {
        Ok(report) => {
            if !cli.quiet {
                for f in &report.failures {
                    eprintln!("warning: {}", error_json(f));
                }
                eprintln!(
                    "wrote {} rows to {} (manifest {})",
                    report.table.nrows(),
                    report.output.display(),
                    report.manifest.display()
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
