//! Group-comparison tests: two-sample t, one-way ANOVA, Kruskal–Wallis.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dist::{chi2_tail, f_tail, student_t_tail, student_t_two_sided};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TTestVariant {
    #[default]
    Pooled,
    Welch,
}

impl fmt::Display for TTestVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TTestVariant::Pooled => "pooled",
            TTestVariant::Welch => "welch",
        })
    }
}

impl FromStr for TTestVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" => Ok(TTestVariant::Pooled),
            "welch" => Ok(TTestVariant::Welch),
            other => Err(Error::Config(format!("unknown t-test variant `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub variant: TTestVariant,
    pub statistic: f64,
    pub df: f64,
    pub mean_a: f64,
    pub mean_b: f64,
    /// P(T >= t).
    pub p_one_sided: f64,
    pub p_two_sided: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnovaResult {
    pub f_statistic: f64,
    pub df_between: usize,
    pub df_within: usize,
    pub ss_between: f64,
    pub ss_within: f64,
    pub p_value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankTestResult {
    /// Tie-corrected H statistic.
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sum of squared deviations from the mean.
fn sum_sq_dev(xs: &[f64], m: f64) -> f64 {
    xs.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Two-sample t-test of equal means.
pub fn two_sample_t(a: &[f64], b: &[f64], variant: TTestVariant) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Degenerate(format!(
            "t-test needs at least 2 values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let (ssa, ssb) = (sum_sq_dev(a, ma), sum_sq_dev(b, mb));
    if ssa + ssb == 0.0 {
        return Err(Error::Undefined("both samples have zero variance".into()));
    }
    let (se, df) = match variant {
        TTestVariant::Pooled => {
            let df = na + nb - 2.0;
            let pooled = (ssa + ssb) / df;
            ((pooled * (1.0 / na + 1.0 / nb)).sqrt(), df)
        }
        TTestVariant::Welch => {
            let qa = ssa / (na - 1.0) / na;
            let qb = ssb / (nb - 1.0) / nb;
            let se2 = qa + qb;
            let df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
            (se2.sqrt(), df)
        }
    };
    let statistic = (ma - mb) / se;
    Ok(TTestResult {
        variant,
        statistic,
        df,
        mean_a: ma,
        mean_b: mb,
        p_one_sided: student_t_tail(statistic, df),
        p_two_sided: student_t_two_sided(statistic, df),
    })
}

/// One-way ANOVA: F = MS_between / MS_within on (k - 1, N - k) df.
pub fn one_way_anova<G: AsRef<[f64]>>(groups: &[G]) -> Result<AnovaResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::Degenerate(format!(
            "ANOVA needs at least 2 groups, got {k}"
        )));
    }
    if let Some(i) = groups.iter().position(|g| g.as_ref().len() < 2) {
        return Err(Error::Degenerate(format!(
            "ANOVA group {} has fewer than 2 values",
            i + 1
        )));
    }
    let total: usize = groups.iter().map(|g| g.as_ref().len()).sum();
    let grand = groups.iter().flat_map(|g| g.as_ref().iter()).sum::<f64>() / total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let g = g.as_ref();
        let m = mean(g);
        ss_between += g.len() as f64 * (m - grand) * (m - grand);
        ss_within += sum_sq_dev(g, m);
    }
    if ss_within == 0.0 {
        return Err(Error::Undefined("zero within-group variance".into()));
    }
    let df_between = k - 1;
    let df_within = total - k;
    let f = (ss_between / df_between as f64) / (ss_within / df_within as f64);
    Ok(AnovaResult {
        f_statistic: f,
        df_between,
        df_within,
        ss_between,
        ss_within,
        p_value: f_tail(f, df_between as f64, df_within as f64),
    })
}

/// Kruskal–Wallis rank test across groups, average ranks for ties and the
/// usual tie correction; p from chi-square on k - 1 df.
pub fn kruskal_wallis<G: AsRef<[f64]>>(groups: &[G]) -> Result<RankTestResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::Degenerate(format!(
            "rank test needs at least 2 groups, got {k}"
        )));
    }
    if groups.iter().any(|g| g.as_ref().is_empty()) {
        return Err(Error::Degenerate("rank test group is empty".into()));
    }
    let mut pooled: Vec<(f64, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| g.as_ref().iter().map(move |&v| (v, gi)))
        .collect();
    if pooled.iter().any(|(v, _)| v.is_nan()) {
        return Err(Error::Degenerate("rank test input contains NaN".into()));
    }
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));

    let n = pooled.len() as f64;
    let mut rank_sums = vec![0.0; k];
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1 ..= j share their average
        let avg = (i + 1 + j) as f64 / 2.0;
        for &(_, gi) in &pooled[i..j] {
            rank_sums[gi] += avg;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let correction = 1.0 - tie_term / (n * n * n - n);
    if correction <= 0.0 {
        return Err(Error::Undefined("all observations are tied".into()));
    }
    let h_raw = 12.0 / (n * (n + 1.0))
        * groups
            .iter()
            .zip(&rank_sums)
            .map(|(g, r)| r * r / g.as_ref().len() as f64)
            .sum::<f64>()
        - 3.0 * (n + 1.0);
    let statistic = (h_raw / correction).max(0.0);
    let df = k - 1;
    Ok(RankTestResult {
        statistic,
        df,
        p_value: chi2_tail(statistic, df as f64),
    })
}
