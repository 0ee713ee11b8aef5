//! Seeded synthetic data for examples, fixtures and tests. Nothing here
//! is real observational data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Gamma, Normal};

use crate::indexes::gggi::gggi_weights;
use crate::table::{Column, TidyTable, YearMonth};

/// One synthetic station.
#[derive(Clone, Debug, PartialEq)]
pub struct StationSpec {
    pub id: String,
    pub name: String,
    pub lat: f64,
    pub long: f64,
    /// Annual mean temperature (°C).
    pub tmean: f64,
    /// Half the seasonal temperature range (°C).
    pub tamp: f64,
    /// Gamma shape of monthly precipitation.
    pub shape: f64,
    /// Mean monthly precipitation (mm).
    pub pmean: f64,
}

impl StationSpec {
    pub fn new(id: &str, lat: f64) -> Self {
        StationSpec {
            id: id.to_string(),
            name: format!("Station {id}"),
            lat,
            long: 145.0,
            tmean: 22.0,
            tamp: 5.0,
            shape: 2.0,
            pmean: 60.0,
        }
    }
}

/// Two southern-hemisphere stations.
pub fn default_stations() -> Vec<StationSpec> {
    vec![
        StationSpec {
            long: 153.0,
            ..StationSpec::new("ST001", -27.5)
        },
        StationSpec {
            long: 146.8,
            tmean: 25.0,
            tamp: 4.0,
            pmean: 90.0,
            ..StationSpec::new("ST002", -19.3)
        },
    ]
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Monthly station table (`id, ym, prcp, tavg, long, lat, name, month`)
/// from `start` for `n_months` months. Precipitation is gamma distributed
/// with a seasonal scale (wetter in austral summer); temperature follows a
/// seasonal cosine plus noise. Values are rounded to 0.1.
pub fn station_table(stations: &[StationSpec], start: YearMonth, n_months: usize, seed: u64) -> TidyTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).expect("valid normal");
    let mut id = Vec::new();
    let mut ym = Vec::new();
    let mut prcp = Vec::new();
    let mut tavg = Vec::new();
    let mut long = Vec::new();
    let mut lat = Vec::new();
    let mut name = Vec::new();
    let mut month = Vec::new();
    for s in stations {
        for k in 0..n_months {
            let t = start.offset(k as i64);
            let phase = 2.0 * std::f64::consts::PI * f64::from(t.month() - 1) / 12.0;
            let seasonal = 1.0 + 0.5 * phase.cos();
            let scale = s.pmean * seasonal / s.shape;
            let p = Gamma::new(s.shape, scale).expect("valid gamma").sample(&mut rng);
            id.push(s.id.clone());
            ym.push(t);
            prcp.push(round1(p).max(0.1));
            tavg.push(round1(s.tmean + s.tamp * phase.cos() + noise.sample(&mut rng)));
            long.push(s.long);
            lat.push(s.lat);
            name.push(s.name.clone());
            month.push(i64::from(t.month()));
        }
    }
    TidyTable::from_columns([
        ("id", Column::text(id)),
        ("ym", Column::time(ym)),
        ("prcp", Column::real(prcp)),
        ("tavg", Column::real(tavg)),
        ("long", Column::real(long)),
        ("lat", Column::real(lat)),
        ("name", Column::text(name)),
        ("month", Column::integer(month)),
    ])
    .expect("equal lengths")
}

/// `n` iid draws of gamma(shape, scale) as one station starting Jan 1900,
/// with columns `id, ym, prcp, month`.
pub fn iid_gamma_station(n: usize, shape: f64, scale: f64, seed: u64) -> TidyTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Gamma::new(shape, scale).expect("valid gamma");
    let start = YearMonth::new(1900, 1).expect("valid month");
    let yms: Vec<YearMonth> = (0..n as i64).map(|k| start.offset(k)).collect();
    TidyTable::from_columns([
        ("id", Column::text(std::iter::repeat_n("iid", n))),
        ("ym", Column::time(yms.iter().copied())),
        ("prcp", Column::real((0..n).map(|_| g.sample(&mut rng)))),
        ("month", Column::integer(yms.iter().map(|t| i64::from(t.month())))),
    ])
    .expect("equal lengths")
}

/// Country labels used by the synthetic gender-gap table.
pub const COUNTRIES: [&str; 16] = [
    "Afghanistan",
    "Algeria",
    "Armenia",
    "Bangladesh",
    "Brazil",
    "Chad",
    "Finland",
    "Iceland",
    "Iran",
    "Kazakhstan",
    "New Zealand",
    "Norway",
    "Pakistan",
    "Panama",
    "Poland",
    "Slovakia",
];

/// Synthetic female-to-male ratios in `[0, 1]` for the 14 gender-gap
/// variables, one row per entity (`country` column). Politics variables
/// are drawn lower and more dispersed than the rest.
pub fn gggi_table(countries: &[&str], seed: u64) -> TidyTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = gggi_weights();
    let mut t = TidyTable::new();
    t.insert("country", Column::text(countries.iter().copied())).expect("fresh table");
    let level: Vec<f64> = countries.iter().map(|_| rng.random_range(0.55..0.95)).collect();
    for w in &weights {
        let vals = level.iter().map(|&l| {
            let x = if w.dimension == "politics" {
                rng.random_range(0.0..1.0) * l * 0.8
            } else {
                l + rng.random_range(-0.1..0.1)
            };
            (x.clamp(0.0, 1.0) * 1000.0).round() / 1000.0
        });
        t.insert(w.variable.clone(), Column::real(vals)).expect("equal lengths");
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn station_table_is_reproducible() {
        let a = station_table(&default_stations(), YearMonth::new(1990, 1).unwrap(), 48, 1);
        let b = station_table(&default_stations(), YearMonth::new(1990, 1).unwrap(), 48, 1);
        assert_eq!(a, b);
        assert_eq!(a.nrows(), 96);
        assert!(a.real("prcp").unwrap().iter().all(|p| p.unwrap() > 0.0));
    }

    #[test]
    fn gggi_values_in_unit_interval() {
        let t = gggi_table(&COUNTRIES, 3);
        assert_eq!(t.nrows(), 16);
        assert_eq!(t.ncols(), 15);
        for (n, c) in t.iter().skip(1) {
            assert!(c.as_real().unwrap().iter().all(|x| (0.0..=1.0).contains(&x.unwrap())), "{n}");
        }
    }
}
