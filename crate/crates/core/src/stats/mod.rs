//! Statistics kernel: least-squares lines, slope comparison, t/F/chi-square
//! tails and the group tests used by the analysis pipeline.

mod dist;
mod hypothesis;
mod regression;
pub mod special;

pub use dist::{chi2_tail, f_tail, student_t_tail, student_t_two_sided};
pub use hypothesis::{
    kruskal_wallis, one_way_anova, two_sample_t, AnovaResult, RankTestResult, TTestResult,
    TTestVariant,
};
pub use regression::{compare_slopes, ols_fit, RegressionFit, SlopeComparison};

/// Median of a non-empty slice (mean of the middle pair for even length).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}
