//! Sample L-moments from unbiased probability-weighted moments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LMoments {
    pub n: usize,
    /// Location.
    pub l1: f64,
    /// Scale; zero iff the sample is constant (or `n == 1`).
    pub l2: f64,
    /// L-skewness `l3 / l2`; needs `n >= 3`.
    pub t3: Option<f64>,
    /// L-kurtosis `l4 / l2`; needs `n >= 4`.
    pub t4: Option<f64>,
    /// Set when every value is equal; ratios are then reported as zero.
    pub constant: bool,
}

impl LMoments {
    pub fn t2(&self) -> f64 {
        self.l2 / self.l1
    }
}

/// Computes `l1`, `l2`, `t3`, `t4` of `xs`. The result does not depend on
/// the order of `xs`.
pub fn sample_l_moments(xs: &[f64]) -> Result<LMoments> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::InsufficientSample { n, needed: 1 });
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("sample contains non-finite values".into()));
    }
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    let nf = n as f64;

    // b_r = n^-1 Σ_{i} [(i-1)(i-2)..(i-r)] / [(n-1)(n-2)..(n-r)] x_(i)
    let mut b = [0.0f64; 4];
    for (j, &x) in s.iter().enumerate() {
        let i = j as f64; // i - 1 for 1-based rank
        b[0] += x;
        if n > 1 {
            b[1] += x * i / (nf - 1.0);
        }
        if n > 2 {
            b[2] += x * i * (i - 1.0) / ((nf - 1.0) * (nf - 2.0));
        }
        if n > 3 {
            b[3] += x * i * (i - 1.0) * (i - 2.0) / ((nf - 1.0) * (nf - 2.0) * (nf - 3.0));
        }
    }
    for v in &mut b {
        *v /= nf;
    }

    let l1 = b[0];
    let constant = s[0] == s[n - 1];
    if constant {
        return Ok(LMoments {
            n,
            l1,
            l2: 0.0,
            t3: (n >= 3).then_some(0.0),
            t4: (n >= 4).then_some(0.0),
            constant: true,
        });
    }
    let l2 = 2.0 * b[1] - b[0];
    let l3 = 6.0 * b[2] - 6.0 * b[1] + b[0];
    let l4 = 20.0 * b[3] - 30.0 * b[2] + 12.0 * b[1] - b[0];
    Ok(LMoments {
        n,
        l1,
        l2,
        t3: (n >= 3).then(|| l3 / l2),
        t4: (n >= 4).then(|| l4 / l2),
        constant: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_pwm() {
        let lm = sample_l_moments(&[1.0, 2.0, 3.0]).unwrap();
        assert!((lm.l1 - 2.0).abs() < 1e-15);
        assert!((lm.l2 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(lm.t3, Some(0.0));
        assert_eq!(lm.t4, None);
    }

    #[test]
    fn constant_sample() {
        let lm = sample_l_moments(&[4.0; 6]).unwrap();
        assert_eq!(lm.l2, 0.0);
        assert_eq!(lm.t3, Some(0.0));
        assert!(lm.constant);
    }

    #[test]
    fn empty_sample() {
        assert_eq!(sample_l_moments(&[]).unwrap_err(), Error::InsufficientSample { n: 0, needed: 1 });
    }

    #[test]
    fn single_value() {
        let lm = sample_l_moments(&[3.5]).unwrap();
        assert_eq!(lm.l1, 3.5);
        assert_eq!(lm.t3, None);
    }

    #[test]
    fn skewed_sample_has_positive_t3() {
        let lm = sample_l_moments(&[1.0, 1.0, 1.0, 2.0, 10.0]).unwrap();
        assert!(lm.t3.unwrap() > 0.0);
        assert!(lm.t3.unwrap() < 1.0);
    }
}
