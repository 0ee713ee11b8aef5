//! Every example under `examples/` runs to completion.

mod bootstrap_intervals {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bootstrap_intervals.rs"));
}

mod csv_config_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/csv_config_run.rs"));
}

mod distribution_fit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/distribution_fit.rs"));
}

mod drought_categories {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/drought_categories.rs"));
}

mod formula_aggregation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/formula_aggregation.rs"));
}

mod gggi_index {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gggi_index.rs"));
}

mod pet_water_balance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pet_water_balance.rs"));
}

mod spatial_regions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spatial_regions.rs"));
}

mod spi_spei_grid {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spi_spei_grid.rs"));
}

mod spi_step_by_step {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spi_step_by_step.rs"));
}

mod transform_rescale {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/transform_rescale.rs"));
}

mod weight_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weight_sweep.rs"));
}

#[test]
fn bootstrap_intervals_runs() {
    bootstrap_intervals::main().expect("bootstrap_intervals example failed");
}

#[test]
fn csv_config_run_runs() {
    csv_config_run::main().expect("csv_config_run example failed");
}

#[test]
fn distribution_fit_runs() {
    distribution_fit::main().expect("distribution_fit example failed");
}

#[test]
fn drought_categories_runs() {
    drought_categories::main().expect("drought_categories example failed");
}

#[test]
fn formula_aggregation_runs() {
    formula_aggregation::main().expect("formula_aggregation example failed");
}

#[test]
fn gggi_index_runs() {
    gggi_index::main().expect("gggi_index example failed");
}

#[test]
fn pet_water_balance_runs() {
    pet_water_balance::main().expect("pet_water_balance example failed");
}

#[test]
fn spatial_regions_runs() {
    spatial_regions::main().expect("spatial_regions example failed");
}

#[test]
fn spi_spei_grid_runs() {
    spi_spei_grid::main().expect("spi_spei_grid example failed");
}

#[test]
fn spi_step_by_step_runs() {
    spi_step_by_step::main().expect("spi_step_by_step example failed");
}

#[test]
fn transform_rescale_runs() {
    transform_rescale::main().expect("transform_rescale example failed");
}

#[test]
fn weight_sweep_runs() {
    weight_sweep::main().expect("weight_sweep example failed");
}
