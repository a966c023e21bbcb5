//! Upper-tail probabilities.

use std::f64::consts::PI;

use super::special::{beta_reg_split, gamma_q};

/// P(T >= t) for Student's t with `df` degrees of freedom.
///
/// Uses P(T >= t) = I_x(df/2, 1/2) / 2 with x = df / (df + t²) for t > 0
/// and the reflection tail(-t) = 1 - tail(t). `df == 1` uses the Cauchy
/// closed form.
pub fn student_t_tail(t: f64, df: f64) -> f64 {
    if t.is_nan() || df.is_nan() || df <= 0.0 {
        return f64::NAN;
    }
    if t == 0.0 {
        return 0.5;
    }
    let upper = if df == 1.0 {
        (1.0 / t.abs()).atan() / PI
    } else if t.is_infinite() {
        0.0
    } else {
        let t2 = t * t;
        let denom = df + t2;
        0.5 * beta_reg_split(df / 2.0, 0.5, df / denom, t2 / denom)
    };
    if t > 0.0 {
        upper
    } else {
        1.0 - upper
    }
}

/// P(|T| >= |t|).
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    (2.0 * student_t_tail(t.abs(), df)).min(1.0)
}

/// P(F >= f) for the F distribution with (d1, d2) degrees of freedom.
pub fn f_tail(f: f64, d1: f64, d2: f64) -> f64 {
    if f.is_nan() || d1 <= 0.0 || d2 <= 0.0 {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let denom = d2 + d1 * f;
    beta_reg_split(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom)
}

/// P(X >= x) for chi-square with `k` degrees of freedom.
pub fn chi2_tail(x: f64, k: f64) -> f64 {
    gamma_q(k / 2.0, x / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_tail_fixed_points() {
        for df in [1.0, 2.0, 5.0, 8.0, 200.0] {
            assert_eq!(student_t_tail(0.0, df), 0.5);
        }
        assert_eq!(student_t_tail(1.0, 1.0), 0.25);
        assert_eq!(student_t_tail(-1.0, 1.0), 0.75);
        assert!((student_t_tail(1.654, 8.0) - 0.0683).abs() < 5e-4);
    }

    #[test]
    fn t_tail_df2_closed_form() {
        // P(T >= t) = 1/2 - t / (2 sqrt(2 + t²)) for df = 2
        for t in [-3.0, -0.4, 0.3, 1.0, 7.5, 40.0] {
            let exact = 0.5 - t / (2.0 * (2.0f64 + t * t).sqrt());
            assert!((student_t_tail(t, 2.0) - exact).abs() < 1e-13, "t={t}");
        }
    }

    #[test]
    fn t_tail_normal_limit() {
        let p = student_t_tail(1.96, 150.0);
        assert!((0.024..=0.027).contains(&p));
    }

    #[test]
    fn f_tail_reduces_to_t() {
        // F(1, d) = T(d)²
        for &(t, d) in &[(1.3, 4.0), (2.2, 11.0), (0.4, 30.0)] {
            let f = f_tail(t * t, 1.0, d);
            assert!((f - student_t_two_sided(t, d)).abs() < 1e-12);
        }
        assert_eq!(f_tail(0.0, 2.0, 6.0), 1.0);
    }

    #[test]
    fn chi2_two_df_is_exponential() {
        for x in [0.2, 1.0, 6.0, 30.0] {
            assert!((chi2_tail(x, 2.0) - (-x / 2.0).exp()).abs() < 1e-14);
        }
    }
}
