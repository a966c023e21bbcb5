//! CSV renderings of the analysis outputs.
//!
//! Every table may start with a `# ` banner line naming the toolkit version
//! and the digest of its input; data rows never carry anything
//! run-dependent, so output is byte-stable for a given input.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::periods::PeriodComparison;
use super::slopes::SlopeRiskReport;
use crate::fire::{ClassAverageTable, FireClass};
use crate::sandpile::Histogram;

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significance level used to star pairwise slope comparisons.
pub const PAIR_ALPHA: f64 = 0.1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `sandfire <version> input-sha256=<digest>`
pub fn banner_line(input_digest: &str) -> String {
    format!("sandfire {TOOLKIT_VERSION} input-sha256={input_digest}")
}

fn start(banner: Option<&str>, header: &str) -> String {
    let mut out = String::new();
    if let Some(b) = banner {
        out.push_str("# ");
        out.push_str(b);
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    out
}

fn quote(label: &str) -> String {
    if label.contains([',', '"', '\n']) {
        format!("\"{}\"", label.replace('"', "\"\""))
    } else {
        label.to_owned()
    }
}

/// Category × class mean counts.
pub fn table1_csv(table: &ClassAverageTable, banner: Option<&str>) -> String {
    let mut out = start(
        banner,
        "category,years,class_a,class_b,class_c,class_d,class_e,class_f,class_g",
    );
    for (c, label) in table.labels.iter().enumerate() {
        let _ = write!(out, "{},{}", quote(label), table.sizes[c]);
        for class in FireClass::ALL {
            let _ = write!(out, ",{}", table.mean(c, class));
        }
        out.push('\n');
    }
    out
}

/// One fit per category.
pub fn table2_csv(report: &SlopeRiskReport, banner: Option<&str>) -> String {
    let mut out = start(
        banner,
        "category,n,intercept,slope,se_slope,se_intercept,t_stat,p_two_sided,r_squared",
    );
    for (label, f) in report.labels.iter().zip(&report.fits) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            quote(label),
            f.n,
            f.intercept,
            f.slope,
            f.se_slope,
            f.se_intercept,
            f.t_stat,
            f.p_two_sided,
            f.r_squared
        );
    }
    out
}

/// Square matrix: slopes on the diagonal, one-sided p of each pair above
/// it, `*` (p < 0.1) or `-` below it.
pub fn table3_csv(report: &SlopeRiskReport, banner: Option<&str>) -> String {
    let header: Vec<String> = std::iter::once("category".to_owned())
        .chain(report.labels.iter().map(|l| quote(l)))
        .collect();
    let mut out = start(banner, &header.join(","));
    let k = report.category_count();
    for i in 0..k {
        out.push_str(&quote(&report.labels[i]));
        for j in 0..k {
            out.push(',');
            if i == j {
                let _ = write!(out, "{}", report.fits[i].slope);
            } else {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                let p = report
                    .comparison(a, b)
                    .map(|c| c.p_directional())
                    .unwrap_or(f64::NAN);
                if i < j {
                    let _ = write!(out, "{p}");
                } else {
                    out.push(if p < PAIR_ALPHA { '*' } else { '-' });
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Long-form pairwise comparisons with every statistic.
pub fn pairs_csv(report: &SlopeRiskReport, banner: Option<&str>) -> String {
    let mut out = start(
        banner,
        "first,second,t,df,p_one_sided,p_directional,p_two_sided",
    );
    let k = report.category_count();
    for i in 0..k {
        for j in i + 1..k {
            if let Some(c) = report.comparison(i, j) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    quote(&report.labels[i]),
                    quote(&report.labels[j]),
                    c.t,
                    c.df,
                    c.p_one_sided,
                    c.p_directional(),
                    c.p_two_sided
                );
            }
        }
    }
    out
}

/// Slope-vs-median-acreage points with the fitted line evaluated at each.
pub fn fig2f_csv(report: &SlopeRiskReport, banner: Option<&str>) -> Option<String> {
    let burn = report.slopes_vs_burn.as_ref()?;
    let mut out = start(
        banner,
        "category,median_prescribed_acres,slope,included,fitted_slope",
    );
    for &(c, median, slope) in &burn.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            quote(&report.labels[c]),
            median,
            slope,
            burn.is_included(c),
            burn.fit.predict(median)
        );
    }
    Some(out)
}

/// log10 points of one category with the fitted line at each x.
pub fn fig_points_csv(report: &SlopeRiskReport, category: usize, banner: Option<&str>) -> String {
    let pts = &report.points[category];
    let fit = &report.fits[category];
    let mut out = start(banner, "class,log10_acres,log10_mean_count,fitted");
    for (class, &(x, y)) in pts.classes.iter().zip(&pts.points) {
        let _ = writeln!(out, "{class},{x},{y},{}", fit.predict(x));
    }
    out
}

pub fn histogram_csv(hist: &Histogram, banner: Option<&str>) -> String {
    let mut out = start(banner, "lower,upper,representative,count,width,density");
    for b in &hist.bins {
        let density = b.density().map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            b.lower, b.upper, b.representative, b.count, b.width, density
        );
    }
    out
}

/// Pairwise period t-tests and the burned-acreage ANOVA.
pub fn periods_csv(cmp: &PeriodComparison, banner: Option<&str>) -> String {
    let mut out = start(
        banner,
        "measure,test,first,second,statistic,df,p_one_sided,p_two_sided",
    );
    for (measure, tests) in [
        ("prescribed_acres", &cmp.prescribed_tests),
        ("total_burned_acres", &cmp.burned_tests),
    ] {
        for t in tests {
            let r = &t.result;
            let _ = writeln!(
                out,
                "{measure},t_{},{},{},{},{},{},{}",
                r.variant,
                quote(&cmp.labels[t.first]),
                quote(&cmp.labels[t.second]),
                r.statistic,
                r.df,
                r.p_one_sided,
                r.p_two_sided
            );
        }
    }
    let a = &cmp.burned_anova;
    let _ = writeln!(
        out,
        "total_burned_acres,anova,all,,{},{}/{},,{}",
        a.f_statistic, a.df_between, a.df_within, a.p_value
    );
    out
}
