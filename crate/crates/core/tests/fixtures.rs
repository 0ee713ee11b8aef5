//! The files under `fixtures/` are generated from `indexflow::synthetic`.
//! Run with `REGENERATE_FIXTURES=1` to rewrite them after changing the
//! generator; otherwise this checks they are up to date.

use std::path::PathBuf;

use indexflow::indexes::gggi::gggi_weights;
use indexflow::io::csv::{read_station_csv_path, table_to_csv_string};
use indexflow::synthetic::{default_stations, gggi_table, station_table, COUNTRIES};
use indexflow::{Column, TidyTable, YearMonth};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn stations(n_months: usize, seed: u64) -> TidyTable {
    let mut t = station_table(&default_stations(), YearMonth::new(1990, 1).unwrap(), n_months, seed);
    t.remove("month");
    t
}

/// The weight table in its published layout: dimension and D-wgt only on the first
/// row of each block.
fn weights_layout() -> TidyTable {
    let w = gggi_weights();
    let label = |s: &str| {
        let s = s.replace('_', " ");
        let mut c = s.chars();
        c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
    };
    let first: Vec<bool> = (0..w.len()).map(|i| i == 0 || w[i].dimension != w[i - 1].dimension).collect();
    TidyTable::from_columns([
        ("Variable", Column::text(w.iter().map(|r| label(&r.variable)))),
        ("V-wgt", Column::real(w.iter().map(|r| r.v_wgt))),
        (
            "Dimension",
            Column::Text(w.iter().zip(&first).map(|(r, f)| f.then(|| label(&r.dimension))).collect()),
        ),
        ("D-wgt", Column::Real(w.iter().zip(&first).map(|(r, f)| f.then_some(r.d_wgt)).collect())),
        ("wgt", Column::real(w.iter().map(|r| r.wgt))),
    ])
    .unwrap()
}

fn expected() -> Vec<(&'static str, String)> {
    vec![
        ("stations_small.csv", table_to_csv_string(&stations(48, 1)).unwrap()),
        ("stations.csv", table_to_csv_string(&stations(360, 2)).unwrap()),
        ("gggi_sample.csv", table_to_csv_string(&gggi_table(&COUNTRIES, 3)).unwrap()),
        ("gggi_weights.csv", table_to_csv_string(&weights_layout()).unwrap()),
    ]
}

#[test]
fn fixtures_are_current() {
    let regen = std::env::var_os("REGENERATE_FIXTURES").is_some();
    for (name, text) in expected() {
        let path = dir().join(name);
        if regen {
            std::fs::write(&path, &text).unwrap();
        } else {
            let on_disk = std::fs::read_to_string(&path).unwrap_or_default();
            assert!(on_disk == text, "{name} is stale; rerun with REGENERATE_FIXTURES=1");
        }
    }
}

#[test]
fn small_station_fixture_has_96_rows() {
    let t = read_station_csv_path(&dir().join("stations_small.csv")).unwrap();
    assert_eq!(t.nrows(), 96);
    assert!(t.has("month"));
}

#[test]
fn bundled_weight_file_matches_constants() {
    let t = indexflow::io::csv::read_table_csv_path(&dir().join("gggi_weights.csv"), None).unwrap();
    let w = indexflow::indexes::gggi::weights_from_table(&t).unwrap();
    assert_eq!(w, gggi_weights());
}
