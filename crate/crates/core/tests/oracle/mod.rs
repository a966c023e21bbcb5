//! Independent reference implementations for the statistics kernel.
//!
//! Sums of squares are exact over rationals. Tail probabilities come from the
//! closed-form series for integer degrees of freedom, or from tanh-sinh
//! quadrature of the beta density for fractional ones; neither touches the
//! continued fractions used by the library.

#![allow(dead_code)]

pub mod sandpile;

use std::f64::consts::PI;

use num::{BigRational, ToPrimitive, Zero};

/// One-sided upper-tail critical values (df, [t at 0.05, 0.025, 0.01, 0.005]),
/// as printed to three decimals.
pub const T_TABLE_LEVELS: [f64; 4] = [0.05, 0.025, 0.01, 0.005];
pub const T_TABLE: [(f64, [f64; 4]); 5] = [
    (1.0, [6.314, 12.706, 31.821, 63.657]),
    (2.0, [2.920, 4.303, 6.965, 9.925]),
    (8.0, [1.860, 2.306, 2.896, 3.355]),
    (30.0, [1.697, 2.042, 2.457, 2.750]),
    (120.0, [1.658, 1.980, 2.358, 2.617]),
];

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn f(x: &BigRational) -> f64 {
    x.to_f64().expect("representable")
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn mean_q(xs: &[f64]) -> BigRational {
    let sum = xs.iter().fold(BigRational::zero(), |acc, &x| acc + q(x));
    sum / int(xs.len())
}

pub fn ss_q(xs: &[f64], m: &BigRational) -> BigRational {
    xs.iter().fold(BigRational::zero(), |acc, &x| {
        let d = q(x) - m;
        acc + &d * &d
    })
}

/// P(T > t) for integer `df` from the finite trigonometric series.
pub fn t_upper_series(t: f64, df: u32) -> f64 {
    let theta = (t.abs() / (df as f64).sqrt()).atan();
    let (s, c) = theta.sin_cos();
    let inner = if df % 2 == 1 {
        let mut sum = 0.0;
        if df > 1 {
            let mut term = c;
            sum = term;
            let mut k = 3;
            while k < df {
                term *= c * c * (k - 1) as f64 / k as f64;
                sum += term;
                k += 2;
            }
        }
        2.0 / PI * (theta + s * sum)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 2;
        while k < df {
            term *= c * c * (k - 1) as f64 / k as f64;
            sum += term;
            k += 2;
        }
        s * sum
    };
    let upper = (1.0 - inner) / 2.0;
    if t >= 0.0 {
        upper
    } else {
        1.0 - upper
    }
}

/// ∫₀ᶻ x^(a-1) (1-x)^(b-1) dx by tanh-sinh quadrature.
fn beta_integral(a: f64, b: f64, z: f64) -> f64 {
    let h = 1.0 / 128.0;
    let n = (7.0 / h) as i32;
    let mut sum = 0.0;
    for i in -n..=n {
        let t = i as f64 * h;
        let u = PI / 2.0 * t.sinh();
        let x = z / (1.0 + (2.0 * u).exp());
        let one_minus_x = (1.0 - z) + z / (1.0 + (-2.0 * u).exp());
        if x <= 0.0 || one_minus_x <= 0.0 {
            continue;
        }
        let dx = z * PI / 4.0 * t.cosh() / u.cosh().powi(2);
        sum += dx * ((a - 1.0) * x.ln() + (b - 1.0) * one_minus_x.ln()).exp();
    }
    sum * h
}

pub fn beta_reg_quad(a: f64, b: f64, z: f64) -> f64 {
    beta_integral(a, b, z) / beta_integral(a, b, 1.0)
}

pub fn t_upper_quad(t: f64, df: f64) -> f64 {
    let upper = 0.5 * beta_reg_quad(df / 2.0, 0.5, df / (df + t * t));
    if t >= 0.0 {
        upper
    } else {
        1.0 - upper
    }
}

pub fn f_upper_quad(x: f64, d1: f64, d2: f64) -> f64 {
    beta_reg_quad(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x))
}

pub struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub se_slope: f64,
    pub se_intercept: f64,
    /// `None` when y is constant.
    pub r_squared: Option<f64>,
    /// `(t, two-sided p)`, `None` for a perfect fit.
    pub test: Option<(f64, f64)>,
}

/// `None` when every x is equal.
pub fn ols(xs: &[f64], ys: &[f64]) -> Option<Ols> {
    let n = xs.len();
    let (xbar, ybar) = (mean_q(xs), mean_q(ys));
    let sxx = ss_q(xs, &xbar);
    if sxx.is_zero() {
        return None;
    }
    let syy = ss_q(ys, &ybar);
    let sxy = xs
        .iter()
        .zip(ys)
        .fold(BigRational::zero(), |acc, (&x, &y)| {
            acc + (q(x) - &xbar) * (q(y) - &ybar)
        });
    let slope = &sxy / &sxx;
    let intercept = &ybar - &slope * &xbar;
    let sse = &syy - &slope * &sxy;
    let s2 = &sse / int(n - 2);
    let se_slope = f(&(&s2 / &sxx)).sqrt();
    let se_intercept = f(&(&s2 * (int(1) / int(n) + &xbar * &xbar / &sxx))).sqrt();
    let r_squared = (!syy.is_zero()).then(|| f(&(int(1) - &sse / &syy)));
    let test = (se_slope > 0.0).then(|| {
        let t = f(&slope) / se_slope;
        (t, (2.0 * t_upper_series(t.abs(), (n - 2) as u32)).min(1.0))
    });
    Some(Ols {
        slope: f(&slope),
        intercept: f(&intercept),
        se_slope,
        se_intercept,
        r_squared,
        test,
    })
}

/// `(t, df, one-sided p, two-sided p)`; `None` with zero pooled variance.
pub fn pooled_t(a: &[f64], b: &[f64]) -> Option<(f64, usize, f64, f64)> {
    let (ma, mb) = (mean_q(a), mean_q(b));
    let ss = ss_q(a, &ma) + ss_q(b, &mb);
    if ss.is_zero() {
        return None;
    }
    let df = a.len() + b.len() - 2;
    let sp2 = ss / int(df);
    let inv = int(1) / int(a.len()) + int(1) / int(b.len());
    let t = f(&(&ma - &mb)) / f(&(sp2 * inv)).sqrt();
    let one = t_upper_series(t, df as u32);
    let two = (2.0 * t_upper_series(t.abs(), df as u32)).min(1.0);
    Some((t, df, one, two))
}

/// `(t, Welch df, one-sided p)`; `None` if either sample is constant.
pub fn welch_t(a: &[f64], b: &[f64]) -> Option<(f64, f64, f64)> {
    let (ma, mb) = (mean_q(a), mean_q(b));
    let (na, nb) = (a.len(), b.len());
    let va = ss_q(a, &ma) / int(na - 1);
    let vb = ss_q(b, &mb) / int(nb - 1);
    if va.is_zero() || vb.is_zero() {
        return None;
    }
    let qa = &va / int(na);
    let qb = &vb / int(nb);
    let total = &qa + &qb;
    let df = &total * &total / (&qa * &qa / int(na - 1) + &qb * &qb / int(nb - 1));
    let t = f(&(&ma - &mb)) / f(&total).sqrt();
    let df = f(&df);
    Some((t, df, t_upper_quad(t, df)))
}

pub struct Anova {
    pub ss_between: f64,
    pub ss_within: f64,
    pub f: f64,
    pub df: (usize, usize),
    pub p: f64,
}

/// `None` with zero within-group variation.
pub fn anova(groups: &[Vec<f64>]) -> Option<Anova> {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let grand = mean_q(&all);
    let mut ssb = BigRational::zero();
    let mut ssw = BigRational::zero();
    for g in groups {
        let m = mean_q(g);
        let d = &m - &grand;
        ssb += &d * &d * int(g.len());
        ssw += ss_q(g, &m);
    }
    if ssw.is_zero() {
        return None;
    }
    let d1 = groups.len() - 1;
    let d2 = all.len() - groups.len();
    let fstat = f(&((&ssb / int(d1)) / (&ssw / int(d2))));
    Some(Anova {
        ss_between: f(&ssb),
        ss_within: f(&ssw),
        f: fstat,
        df: (d1, d2),
        p: f_upper_quad(fstat, d1 as f64, d2 as f64),
    })
}

/// |got - want| within `tol`, relative once |want| exceeds 1.
pub fn agrees(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}
