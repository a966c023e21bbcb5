use serde::{Deserialize, Serialize};

use super::dist::{student_t_tail, student_t_two_sided};
use crate::error::{Error, Result};

/// Simple least-squares line `y = intercept + slope * x` with inference on
/// the slope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub n: usize,
    pub slope: f64,
    pub intercept: f64,
    pub se_slope: f64,
    pub se_intercept: f64,
    pub r_squared: f64,
    /// slope / se_slope.
    pub t_stat: f64,
    /// Two-sided p for slope = 0 on n - 2 degrees of freedom.
    pub p_two_sided: f64,
}

impl RegressionFit {
    pub fn residual_df(&self) -> usize {
        self.n - 2
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Closed-form OLS over `(x, y)` points.
///
/// With centered sums Sxx, Sxy and residual sum of squares RSS:
/// `se_slope = sqrt(RSS / (n - 2) / Sxx)`. A perfect fit has `se_slope = 0`,
/// `r_squared = 1` and, for a nonzero slope, an infinite `t_stat` with p = 0.
pub fn ols_fit(points: &[(f64, f64)]) -> Result<RegressionFit> {
    let n = points.len();
    if n < 3 {
        return Err(Error::Degenerate(format!(
            "regression needs at least 3 points, got {n}"
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Degenerate("non-finite regression input".into()));
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("x values have zero variance".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = (y - mean_y) - slope * (x - mean_x);
            r * r
        })
        .sum();
    let sigma2 = rss / (nf - 2.0);
    let se_slope = (sigma2 / sxx).sqrt();
    let se_intercept = (sigma2 * (1.0 / nf + mean_x * mean_x / sxx)).sqrt();
    let r_squared = if syy > 0.0 {
        (1.0 - rss / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let (t_stat, p_two_sided) = if se_slope > 0.0 {
        let t = slope / se_slope;
        (t, student_t_two_sided(t, nf - 2.0))
    } else if slope == 0.0 {
        (0.0, 1.0)
    } else {
        (slope.signum() * f64::INFINITY, 0.0)
    };
    Ok(RegressionFit {
        n,
        slope,
        intercept,
        se_slope,
        se_intercept,
        r_squared,
        t_stat,
        p_two_sided,
    })
}

/// Test of equal slopes between two independent fits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeComparison {
    /// (b1 - b2) / sqrt(s_b1² + s_b2²)
    pub t: f64,
    /// n1 + n2 - 4
    pub df: usize,
    /// Upper tail P(T >= t).
    pub p_one_sided: f64,
    pub p_two_sided: f64,
}

impl SlopeComparison {
    /// One-sided p in the direction of the observed difference,
    /// `min(p_one_sided, 1 - p_one_sided)`.
    pub fn p_directional(&self) -> f64 {
        self.p_one_sided.min(1.0 - self.p_one_sided)
    }
}

/// Compares two regression slopes with the t statistic
/// `(b1 - b2) / sqrt(s_b1² + s_b2²)` on `n1 + n2 - 4` degrees of freedom.
pub fn compare_slopes(first: &RegressionFit, second: &RegressionFit) -> Result<SlopeComparison> {
    let total = first.n + second.n;
    if total < 5 {
        return Err(Error::Degenerate(format!(
            "slope comparison needs n1 + n2 >= 5, got {total}"
        )));
    }
    let se = first.se_slope.hypot(second.se_slope);
    if se == 0.0 {
        return Err(Error::Undefined(
            "both slope standard errors are zero".into(),
        ));
    }
    let df = total - 4;
    let t = (first.slope - second.slope) / se;
    let p_one_sided = student_t_tail(t, df as f64);
    Ok(SlopeComparison {
        t,
        df,
        p_one_sided,
        p_two_sided: 2.0 * p_one_sided.min(1.0 - p_one_sided),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(slope: f64, se: f64, n: usize) -> RegressionFit {
        RegressionFit {
            n,
            slope,
            intercept: 0.0,
            se_slope: se,
            se_intercept: 0.0,
            r_squared: 0.9,
            t_stat: slope / se,
            p_two_sided: 0.0,
        }
    }

    #[test]
    fn perfect_line() {
        let pts: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, i as f64)).collect();
        let f = ols_fit(&pts).unwrap();
        assert_eq!(f.slope, 1.0);
        assert_eq!(f.intercept, 0.0);
        assert_eq!(f.se_slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
        assert_eq!(f.p_two_sided, 0.0);
    }

    #[test]
    fn flat_line_has_unit_p() {
        let pts = [(0.0, 2.0), (1.0, 2.0), (2.0, 2.0)];
        let f = ols_fit(&pts).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.t_stat, 0.0);
        assert_eq!(f.p_two_sided, 1.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            ols_fit(&[(0.0, 1.0), (1.0, 2.0)]),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            ols_fit(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn known_small_fit() {
        // x = 1..5, y = 2, 4, 5, 4, 5: slope 0.6, intercept 2.2, RSS 2.4
        let pts = [(1.0, 2.0), (2.0, 4.0), (3.0, 5.0), (4.0, 4.0), (5.0, 5.0)];
        let f = ols_fit(&pts).unwrap();
        assert!((f.slope - 0.6).abs() < 1e-14);
        assert!((f.intercept - 2.2).abs() < 1e-14);
        assert!((f.se_slope - (0.8f64 / 10.0).sqrt()).abs() < 1e-14);
        assert!((f.r_squared - (1.0 - 2.4 / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn identical_fits_compare_to_zero() {
        let a = fit(-0.8, 0.07, 6);
        let c = compare_slopes(&a, &a).unwrap();
        assert_eq!(c.t, 0.0);
        assert_eq!(c.p_one_sided, 0.5);
        assert_eq!(c.p_two_sided, 1.0);
        assert_eq!(c.df, 8);
    }

    #[test]
    fn published_quintile_pairs() {
        let q1 = fit(-0.8060, 0.0714, 6);
        let q2 = fit(-1.0139, 0.1034, 6);
        let q4 = fit(-0.9687, 0.0904, 6);
        let c12 = compare_slopes(&q1, &q2).unwrap();
        assert!((c12.t - 1.654).abs() < 2e-3);
        assert!((c12.p_one_sided - 0.0683).abs() < 1e-3);
        let c14 = compare_slopes(&q1, &q4).unwrap();
        assert!((c14.p_one_sided - 0.0978).abs() < 1e-3);
    }

    #[test]
    fn swap_negates_t() {
        let a = fit(-0.8, 0.07, 6);
        let b = fit(-1.0, 0.1, 7);
        let ab = compare_slopes(&a, &b).unwrap();
        let ba = compare_slopes(&b, &a).unwrap();
        assert_eq!(ab.t, -ba.t);
        assert!((ab.p_two_sided - ba.p_two_sided).abs() < 1e-15);
        assert!((ab.p_directional() - ba.p_directional()).abs() < 1e-15);
    }

    #[test]
    fn zero_errors_are_undefined() {
        let a = fit(1.0, 0.0, 5);
        assert!(matches!(compare_slopes(&a, &a), Err(Error::Undefined(_))));
    }
}
