//! Thornthwaite potential evapotranspiration from monthly mean temperature
//! and latitude.
//!
//! This is the variable-transformation slot of the SPEI recipe; another PET
//! model only needs to produce the same `.pet` column.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::context::PipelineContext;
use crate::error::{Error, Result};
use crate::pipeline::Step;
use crate::table::{Column, YearMonth};

/// Mid-month day of year, January to December.
const MID_MONTH_DOY: [f64; 12] = [15.0, 46.0, 74.0, 105.0, 135.0, 162.0, 198.0, 228.0, 258.0, 288.0, 318.0, 344.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PetSpec {
    #[serde(default = "default_tavg")]
    pub tavg: String,
    #[serde(default = "default_lat")]
    pub lat: String,
    #[serde(default = "default_out")]
    pub out: String,
}

fn default_tavg() -> String {
    "tavg".into()
}
fn default_lat() -> String {
    "lat".into()
}
fn default_out() -> String {
    ".pet".into()
}

impl Default for PetSpec {
    fn default() -> Self {
        PetSpec {
            tavg: default_tavg(),
            lat: default_lat(),
            out: default_out(),
        }
    }
}

/// Solar declination (radians) at the middle of `month`.
pub fn solar_declination(month: u32) -> f64 {
    let j = MID_MONTH_DOY[(month - 1) as usize];
    0.409 * (2.0 * PI * j / 365.0 - 1.39).sin()
}

/// Mean daylight hours at latitude `lat` (degrees) in `month`.
pub fn daylight_hours(lat: f64, month: u32) -> f64 {
    let phi = lat.to_radians();
    let arg = (-phi.tan() * solar_declination(month).tan()).clamp(-1.0, 1.0);
    24.0 * arg.acos() / PI
}

/// Annual heat index `I` from twelve monthly mean temperatures.
pub fn heat_index(monthly_means: &[f64; 12]) -> f64 {
    monthly_means.iter().filter(|&&t| t > 0.0).map(|t| (t / 5.0).powf(1.514)).sum()
}

/// Exponent `a` of the Thornthwaite equation.
pub fn thornthwaite_exponent(i: f64) -> f64 {
    6.75e-7 * i.powi(3) - 7.71e-5 * i.powi(2) + 1.792e-2 * i + 0.49239
}

/// PET (mm) for one month, given the station's heat index.
pub fn thornthwaite(tavg: f64, lat: f64, ym: YearMonth, heat_index: f64) -> f64 {
    if tavg <= 0.0 || heat_index <= 0.0 {
        return 0.0;
    }
    let a = thornthwaite_exponent(heat_index);
    let l = daylight_hours(lat, ym.month());
    let n = f64::from(ym.days_in_month());
    16.0 * (l / 12.0) * (n / 30.0) * (10.0 * tavg / heat_index).powf(a)
}

/// Adds `spec.out` with monthly PET per row. The heat index of each entity
/// is computed from its climatological monthly means, so every calendar
/// month must be observed at least once.
pub fn pet_thornthwaite(mut ctx: PipelineContext, spec: &PetSpec) -> Result<PipelineContext> {
    let time_col = ctx
        .time_col()
        .ok_or(Error::Role {
            role: "time",
            column: String::new(),
        })?
        .to_string();
    let table = ctx.table();
    let times = table.time(&time_col)?;
    let tavg = table.real(&spec.tavg)?;
    let lat = table.real(&spec.lat)?;

    let mut pet = vec![None; table.nrows()];
    for (id, rows) in ctx.entity_rows()? {
        let mut sum = [0.0; 12];
        let mut count = [0usize; 12];
        for &i in &rows {
            if let (Some(ym), Some(t)) = (times[i], tavg[i]) {
                let m = (ym.month() - 1) as usize;
                sum[m] += t;
                count[m] += 1;
            }
        }
        if let Some(m) = count.iter().position(|&c| c == 0) {
            return Err(Error::Schema(format!(
                "heat index for `{id}` needs all 12 calendar months; month {} has no temperature",
                m + 1
            )));
        }
        let means: [f64; 12] = std::array::from_fn(|m| sum[m] / count[m] as f64);
        let hi = heat_index(&means);
        for &i in &rows {
            let (Some(ym), Some(t), Some(phi)) = (times[i], tavg[i], lat[i]) else {
                continue;
            };
            if !(-90.0..=90.0).contains(&phi) {
                return Err(Error::Domain {
                    op: "pet_thornthwaite",
                    column: spec.lat.clone(),
                    rows: vec![ctx.row_label(i)],
                });
            }
            pet[i] = Some(thornthwaite(t, phi, ym, hi));
        }
    }
    ctx.insert(&spec.out, Column::Real(pet))?;
    ctx.record(&Step::Pet(spec.clone()));
    Ok(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equator_has_twelve_hour_days() {
        for m in 1..=12 {
            assert!((daylight_hours(0.0, m) - 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn northern_summer_is_longer() {
        assert!(daylight_hours(45.0, 6) > 15.0);
        assert!(daylight_hours(45.0, 12) < 9.0);
        assert!((daylight_hours(45.0, 6) + daylight_hours(-45.0, 6) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn polar_day_and_night() {
        assert_eq!(daylight_hours(80.0, 6), 24.0);
        assert_eq!(daylight_hours(80.0, 12), 0.0);
    }

    #[test]
    fn freezing_month_has_no_pet() {
        let ym = YearMonth::new(2000, 1).unwrap();
        assert_eq!(thornthwaite(-3.0, 40.0, ym, 50.0), 0.0);
        assert_eq!(thornthwaite(0.0, 40.0, ym, 50.0), 0.0);
    }

    #[test]
    fn constant_twenty_degrees_at_equator() {
        let hi = heat_index(&[20.0; 12]);
        // 12 * 4^1.514
        assert!((hi - 12.0 * 4f64.powf(1.514)).abs() < 1e-12);
        let apr = thornthwaite(20.0, 0.0, YearMonth::new(2001, 4).unwrap(), hi);
        let jun = thornthwaite(20.0, 0.0, YearMonth::new(2001, 6).unwrap(), hi);
        let sep = thornthwaite(20.0, 0.0, YearMonth::new(2001, 9).unwrap(), hi);
        assert!((apr - jun).abs() < 1e-12 && (jun - sep).abs() < 1e-12);
        // 10T/I = 200/I and L = 12, N = 30
        let expect = 16.0 * (200.0 / hi).powf(thornthwaite_exponent(hi));
        assert!((apr - expect).abs() < 1e-9);
        let jan = thornthwaite(20.0, 0.0, YearMonth::new(2001, 1).unwrap(), hi);
        assert!((jan - apr * 31.0 / 30.0).abs() < 1e-9);
    }
}
