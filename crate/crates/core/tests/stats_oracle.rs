mod oracle;

use oracle::*;
use proptest::prelude::*;
use sandfire_core::stats::{
    f_tail, ols_fit, one_way_anova, student_t_tail, student_t_two_sided, two_sample_t, TTestVariant,
};

const TOL: f64 = 1e-10;

fn close(got: f64, want: f64, what: &str) -> Result<(), TestCaseError> {
    prop_assert!(
        agrees(got, want, TOL),
        "{what}: got {got:e}, oracle {want:e}"
    );
    Ok(())
}

fn sample(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, len)
}

#[test]
fn quadrature_agrees_with_series() {
    for df in [1u32, 2, 3, 8, 17, 30] {
        for t in [-2.5, 0.3, 1.0, 1.654, 4.0] {
            let a = t_upper_series(t, df);
            let b = t_upper_quad(t, df as f64);
            assert!((a - b).abs() < 1e-12, "df {df} t {t}: {a} vs {b}");
        }
    }
}

#[test]
fn t_tail_exact_points() {
    for df in [1.0, 2.0, 3.5, 8.0, 120.0] {
        assert_eq!(student_t_tail(0.0, df), 0.5);
    }
    assert_eq!(student_t_tail(1.0, 1.0), 0.25);
}

#[test]
fn t_table_values() {
    for (df, row) in T_TABLE {
        for (t, p) in row.iter().zip(T_TABLE_LEVELS) {
            let got = student_t_tail(*t, df);
            assert!((got - p).abs() < 5e-5, "df {df} t {t}: {got} vs {p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ols_matches_exact_oracle(ys in sample(3..12), xs_seed in sample(12..13)) {
        let xs = &xs_seed[..ys.len()];
        let Some(want) = ols(xs, &ys) else { return Ok(()); };
        let pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let fit = ols_fit(&pts).unwrap();
        close(fit.slope, want.slope, "slope")?;
        close(fit.intercept, want.intercept, "intercept")?;
        close(fit.se_slope, want.se_slope, "se_slope")?;
        close(fit.se_intercept, want.se_intercept, "se_intercept")?;
        if let Some(r2) = want.r_squared {
            close(fit.r_squared, r2, "r2")?;
        }
        if let Some((t, p)) = want.test {
            close(fit.t_stat, t, "t")?;
            close(fit.p_two_sided, p, "p")?;
        }
    }

    #[test]
    fn pooled_t_matches_exact_oracle(a in sample(2..10), b in sample(2..10)) {
        let Some((t, df, one, two)) = pooled_t(&a, &b) else { return Ok(()); };
        let r = two_sample_t(&a, &b, TTestVariant::Pooled).unwrap();
        close(r.statistic, t, "t")?;
        prop_assert_eq!(r.df, df as f64);
        close(r.p_one_sided, one, "p one-sided")?;
        close(r.p_two_sided, two, "p two-sided")?;
    }

    #[test]
    fn welch_t_matches_quadrature(a in sample(2..10), b in sample(2..10)) {
        let Some((t, df, one)) = welch_t(&a, &b) else { return Ok(()); };
        let r = two_sample_t(&a, &b, TTestVariant::Welch).unwrap();
        close(r.statistic, t, "t")?;
        close(r.df, df, "df")?;
        close(r.p_one_sided, one, "p one-sided")?;
    }

    #[test]
    fn anova_matches_exact_oracle(groups in prop::collection::vec(sample(2..7), 2..6)) {
        let Some(want) = anova(&groups) else { return Ok(()); };
        let r = one_way_anova(&groups).unwrap();
        close(r.ss_between, want.ss_between, "ssb")?;
        close(r.ss_within, want.ss_within, "ssw")?;
        close(r.f_statistic, want.f, "F")?;
        prop_assert_eq!((r.df_between, r.df_within), want.df);
        close(r.p_value, want.p, "p")?;
    }

    #[test]
    fn t_tail_matches_series(t in -40.0f64..40.0, df in 1u32..200) {
        close(student_t_tail(t, df as f64), t_upper_series(t, df), "tail")?;
    }

    #[test]
    fn t_tail_fractional_df(t in -10.0f64..10.0, df in 0.6f64..60.0) {
        close(student_t_tail(t, df), t_upper_quad(t, df), "tail")?;
    }

    #[test]
    fn f_tail_matches_quadrature(x in 0.01f64..30.0, d1 in 1u32..20, d2 in 1u32..60) {
        close(f_tail(x, d1 as f64, d2 as f64), f_upper_quad(x, d1 as f64, d2 as f64), "F tail")?;
    }

    #[test]
    fn t_tail_is_a_survival_function(t in -50.0f64..50.0, dt in 0.0f64..5.0, df in 1.0f64..300.0) {
        let p = student_t_tail(t, df);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(student_t_tail(t + dt, df) <= p + 1e-15);
        prop_assert!((p + student_t_tail(-t, df) - 1.0).abs() < 1e-12);
        prop_assert!((student_t_two_sided(t, df) - 2.0 * student_t_tail(t.abs(), df)).abs() < 1e-15);
    }

    #[test]
    fn regression_is_affine_equivariant(
        ys in sample(4..10),
        xs_seed in sample(10..11),
        scale in 0.5f64..4.0,
        shift in -50.0f64..50.0,
    ) {
        let xs = &xs_seed[..ys.len()];
        let pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let moved: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, scale * y + shift)).collect();
        let (Ok(a), Ok(b)) = (ols_fit(&pts), ols_fit(&moved)) else { return Ok(()); };
        prop_assert!((b.slope - scale * a.slope).abs() <= 1e-9 * (1.0 + a.slope.abs()));
        prop_assert!((b.r_squared - a.r_squared).abs() <= 1e-9);
        prop_assert!((b.t_stat - a.t_stat).abs() <= 1e-7 * (1.0 + a.t_stat.abs()));
    }
}
