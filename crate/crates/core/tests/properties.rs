use proptest::prelude::*;

use indexflow::dist::{fit_sample, Distribution, Family};
use indexflow::formula::parse_formula;
use indexflow::io::csv::{read_table_csv, table_to_csv_string, Schema};
use indexflow::lmoments::sample_l_moments;
use indexflow::normal::{norm_cdf, norm_quantile};
use indexflow::simplify::SimplificationScheme;
use indexflow::temporal::{rolling, Stat};
use indexflow::transform::{ScaleKind, ScalingSpec};
use indexflow::{Column, TidyTable, WeightScheme, YearMonth};

fn series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..500.0, 1..80)
}

proptest! {
    #[test]
    fn rolling_matches_brute_force(xs in series(), k in 1usize..40) {
        let opt: Vec<Option<f64>> = xs.iter().copied().map(Some).collect();
        let out = rolling(&opt, k, Stat::Sum);
        let n = xs.len();
        prop_assert_eq!(out.len(), if k > n { 0 } else { n - k + 1 });
        for (i, s) in out.iter().enumerate() {
            let mut acc = 0.0;
            for x in &xs[i..i + k] {
                acc += x;
            }
            prop_assert_eq!(s.unwrap().to_bits(), acc.to_bits());
        }
    }

    #[test]
    fn rolling_telescopes(xs in prop::collection::vec(0i32..1000, 2..80), k in 1usize..20) {
        // integer-valued sums are exact, so the identity holds bit for bit
        let opt: Vec<Option<f64>> = xs.iter().map(|&x| Some(f64::from(x))).collect();
        let s = rolling(&opt, k, Stat::Sum);
        for i in 1..s.len() {
            let lhs = s[i].unwrap() - s[i - 1].unwrap();
            let rhs = f64::from(xs[i + k - 1]) - f64::from(xs[i - 1]);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn null_poisons_only_its_windows(xs in series(), k in 1usize..10, hole in 0usize..80) {
        let mut opt: Vec<Option<f64>> = xs.iter().copied().map(Some).collect();
        let hole = hole % opt.len();
        opt[hole] = None;
        for (i, s) in rolling(&opt, k, Stat::Mean).iter().enumerate() {
            prop_assert_eq!(s.is_none(), (i..i + k).contains(&hole));
        }
    }

    #[test]
    fn scaling_preserves_order(xs in prop::collection::vec(-1e3f64..1e3, 3..50)) {
        prop_assume!(xs.iter().any(|x| *x != xs[0]));
        for kind in [ScaleKind::Center, ScaleKind::Zscore, ScaleKind::Minmax] {
            let s = ScalingSpec::fit(kind, &xs, "x").unwrap();
            for a in &xs {
                for b in &xs {
                    if a < b {
                        prop_assert!(s.apply(*a) <= s.apply(*b));
                    }
                }
            }
        }
        let mm = ScalingSpec::fit(ScaleKind::Minmax, &xs, "x").unwrap();
        let ys: Vec<f64> = xs.iter().map(|x| mm.apply(*x)).collect();
        prop_assert!(ys.iter().all(|y| (-1e-12..=1.0 + 1e-12).contains(y)));
    }

    #[test]
    fn formula_round_trips(coefs in prop::collection::vec(-50i32..50, 1..6)) {
        let text = coefs
            .iter()
            .enumerate()
            .map(|(i, c)| match (i, *c < 0) {
                (0, _) => format!("{c}*v0"),
                (_, true) => format!(" - {}*v{i}", -c),
                (_, false) => format!(" + {c}*v{i}"),
            })
            .collect::<String>();
        let f = parse_formula(&text).unwrap();
        let again = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(&f, &again);
        let parsed: Vec<f64> = f.terms.iter().map(|t| t.coef).collect();
        let expected: Vec<f64> = coefs.iter().map(|&c| f64::from(c)).collect();
        prop_assert_eq!(parsed, expected);
    }

    #[test]
    fn normalised_weights_sum_to_one(ws in prop::collection::vec(0.001f64..100.0, 1..15)) {
        let w = WeightScheme::new(ws.iter().enumerate().map(|(i, w)| (format!("v{i}"), *w))).unwrap();
        prop_assert!(w.normalized().is_normalized());
    }

    #[test]
    fn l_moments_ignore_order(mut xs in prop::collection::vec(-1e3f64..1e3, 4..60), seed in any::<u64>()) {
        let a = sample_l_moments(&xs).unwrap();
        // deterministic shuffle
        let n = xs.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            xs.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(a, sample_l_moments(&xs).unwrap());
        prop_assert!(a.l2 >= 0.0);
        if let Some(t3) = a.t3 {
            prop_assert!(t3.abs() < 1.0 + 1e-12);
        }
    }

    #[test]
    fn cdf_and_quantile_are_monotone(p in 0.001f64..0.998, dp in 0.0001f64..0.001, fam in 0usize..3) {
        let d = [
            Distribution::gamma(2.0, 30.0).unwrap(),
            Distribution::gev(5.0, 2.0, 0.15).unwrap(),
            Distribution::glo(0.0, 1.0, -0.2).unwrap(),
        ][fam];
        let (x0, x1) = (d.quantile(p).unwrap(), d.quantile(p + dp).unwrap());
        prop_assert!(x0 < x1);
        prop_assert!(d.cdf(x0) <= d.cdf(x1));
        prop_assert!((d.cdf(x0) - p).abs() < 1e-9);
    }

    #[test]
    fn inverse_normal_round_trip(p in 1e-6f64..(1.0 - 1e-6)) {
        let z = norm_quantile(p).unwrap();
        prop_assert!((norm_cdf(z) - p).abs() <= 1e-9);
        prop_assert!((norm_quantile(1.0 - p).unwrap() + z).abs() <= 1e-9);
    }

    #[test]
    fn simplify_is_monotone(a in -4.0f64..4.0, b in -4.0f64..4.0) {
        let s = SimplificationScheme::drought();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(s.rank(lo) >= s.rank(hi));
    }

    #[test]
    fn csv_round_trip_with_schema(
        vals in prop::collection::vec((prop::option::of(-1e6f64..1e6), prop::option::of(-1000i64..1000), "[a-z ,\"]{0,8}"), 1..30)
    ) {
        let start = YearMonth::new(2000, 1).unwrap();
        let t = TidyTable::from_columns([
            ("ym", Column::time((0..vals.len() as i64).map(|k| start.offset(k)))),
            ("x", Column::Real(vals.iter().map(|v| v.0).collect())),
            ("n", Column::Integer(vals.iter().map(|v| v.1).collect())),
            // an empty string reads back as null, so keep text non-empty
            ("s", Column::text(vals.iter().map(|v| format!("<{}>", v.2)))),
        ]).unwrap();
        let text = table_to_csv_string(&t).unwrap();
        let back = read_table_csv(text.as_bytes(), Some(&Schema::of(&t))).unwrap();
        prop_assert_eq!(back, t);
    }
}

#[test]
fn gamma_fit_is_scale_equivariant() {
    let xs: Vec<f64> = (1..=40).map(|i| f64::from(i).powf(1.3)).collect();
    let a = fit_sample(&xs, Family::Gamma).unwrap().params();
    let ys: Vec<f64> = xs.iter().map(|x| x * 10.0).collect();
    let b = fit_sample(&ys, Family::Gamma).unwrap().params();
    assert!((a[0] - b[0]).abs() < 1e-9 * a[0]);
    assert!((a[1] * 10.0 - b[1]).abs() < 1e-9 * b[1]);
}
