//! SPI and SPEI recipes: rolling sum, per-cell distribution fit and the
//! inverse-normal transform, over a grid of time scales (and families).

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::dist::Family;
use crate::error::{Error, Result};
use crate::fit::FitSpec;
use crate::grid::{compute_indexes, Combo, IndexResult, ParameterGrid, Recipe};
use crate::indexes::pet::PetSpec;
use crate::normal::NormaliseSpec;
use crate::pipeline::Step;
use crate::reduction::FormulaSpec;
use crate::temporal::RollingSpec;

/// Water balance column of the SPEI recipe.
pub const BALANCE_COL: &str = ".d";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiParams {
    #[serde(default = "default_prcp")]
    pub prcp: String,
    pub scales: Vec<usize>,
    #[serde(default = "default_spi_dist")]
    pub dists: Vec<Family>,
    #[serde(default = "one")]
    pub n_boot: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeiParams {
    #[serde(default = "default_prcp")]
    pub prcp: String,
    #[serde(default)]
    pub pet: PetSpec,
    pub scales: Vec<usize>,
    #[serde(default = "default_spei_dist")]
    pub dists: Vec<Family>,
    #[serde(default = "one")]
    pub n_boot: usize,
}

fn default_prcp() -> String {
    "prcp".into()
}
fn default_spi_dist() -> Vec<Family> {
    vec![Family::Gamma]
}
fn default_spei_dist() -> Vec<Family> {
    vec![Family::Gev, Family::Glo]
}
fn one() -> usize {
    1
}

impl SpiParams {
    pub fn new(scales: &[usize]) -> Self {
        SpiParams {
            prcp: default_prcp(),
            scales: scales.to_vec(),
            dists: default_spi_dist(),
            n_boot: 1,
        }
    }
}

impl SpeiParams {
    pub fn new(scales: &[usize], dists: &[Family]) -> Self {
        SpeiParams {
            prcp: default_prcp(),
            pet: PetSpec::default(),
            scales: scales.to_vec(),
            dists: dists.to_vec(),
            n_boot: 1,
        }
    }
}

fn grid(scales: &[usize], dists: &[Family]) -> Result<ParameterGrid> {
    ParameterGrid::single()
        .axis("scale", scales.iter().map(|&k| k as i64))?
        .axis("dist", dists.iter().map(|d| d.name()))
}

fn combo_params(c: &Combo) -> Result<(usize, Family)> {
    let k = c.int("scale")?;
    if k < 1 {
        return Err(Error::InvalidParameter(format!("scale must be at least 1, got {k}")));
    }
    Ok((k as usize, c.text("dist")?.parse()?))
}

/// Steps of one SPI combo.
pub fn spi_steps(prcp: &str, scale: usize, family: Family, n_boot: usize) -> Vec<Step> {
    vec![
        Step::TemporalRollingWindow(RollingSpec::sum(prcp, scale)),
        Step::DistributionFit(FitSpec::new(".agg", family).with_boot(n_boot)),
        Step::Normalise(NormaliseSpec::default()),
    ]
}

/// Steps of one SPEI combo: PET, water balance, then the SPI chain on it.
pub fn spei_steps(prcp: &str, pet: &PetSpec, scale: usize, family: Family, n_boot: usize) -> Vec<Step> {
    let mut steps = vec![
        Step::Pet(pet.clone()),
        Step::ManualInput(FormulaSpec {
            name: BALANCE_COL.into(),
            formula: format!("{prcp} - {}", pet.out),
        }),
    ];
    steps.extend(spi_steps(BALANCE_COL, scale, family, n_boot));
    steps
}

pub fn spi_recipe(p: &SpiParams) -> Result<Recipe> {
    let p2 = p.clone();
    Ok(Recipe::from_steps("spi", grid(&p.scales, &p.dists)?, ".index", move |c| {
        let (k, fam) = combo_params(c)?;
        Ok(spi_steps(&p2.prcp, k, fam, p2.n_boot))
    }))
}

pub fn spei_recipe(p: &SpeiParams) -> Result<Recipe> {
    let p2 = p.clone();
    Ok(Recipe::from_steps("spei", grid(&p.scales, &p.dists)?, ".index", move |c| {
        let (k, fam) = combo_params(c)?;
        Ok(spei_steps(&p2.prcp, &p2.pet, k, fam, p2.n_boot))
    }))
}

/// Standardized precipitation index at each scale. The context's group
/// role should be the calendar month so each month gets its own fit.
pub fn idx_spi(ctx: &PipelineContext, params: &SpiParams) -> Result<IndexResult> {
    compute_indexes(ctx, &[spi_recipe(params)?])
}

/// Standardized precipitation-evapotranspiration index.
pub fn idx_spei(ctx: &PipelineContext, params: &SpeiParams) -> Result<IndexResult> {
    compute_indexes(ctx, &[spei_recipe(params)?])
}
