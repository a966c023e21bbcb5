use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::fixture::{
    florida_table, PUBLISHED_P, PUBLISHED_PAIR_P, PUBLISHED_R2, PUBLISHED_SE, PUBLISHED_SLOPES,
};
use super::slopes::{fit_table, SlopeRiskReport};
use crate::error::Result;
use crate::stats::RegressionFit;

pub const SLOPE_TOLERANCE: f64 = 0.01;
pub const SE_TOLERANCE: f64 = 0.003;
pub const R2_TOLERANCE: f64 = 0.005;
pub const PAIR_P_TOLERANCE: f64 = 0.003;
/// Fit p-values are printed to two significant digits around 3e-4.
pub const FIT_P_TOLERANCE: f64 = 5e-5;

/// A computed value set against its published counterpart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub published: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.computed - self.published).abs() <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub report: SlopeRiskReport,
    pub checks: Vec<Check>,
}

impl Reproduction {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Fixed-width side-by-side listing, one line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:>12} {:>12} {:>9}  result",
            "quantity", "computed", "published", "tol"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<22} {:>12.6} {:>12.6} {:>9} {}",
                c.name,
                c.computed,
                c.published,
                c.tolerance,
                if c.passed() { "PASS" } else { "FAIL" }
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

type Metric = fn(&RegressionFit) -> f64;

/// Fits the embedded Florida quintile table and checks every slope, standard
/// error, R², fit p-value and pairwise one-sided p against the published
/// figures.
pub fn reproduce_published() -> Result<Reproduction> {
    let report = fit_table(&florida_table())?;
    let mut checks = Vec::new();
    let metrics: [(&str, &[f64; 5], f64, Metric); 4] = [
        ("slope", &PUBLISHED_SLOPES, SLOPE_TOLERANCE, |f| f.slope),
        ("se_slope", &PUBLISHED_SE, SE_TOLERANCE, |f| f.se_slope),
        ("r_squared", &PUBLISHED_R2, R2_TOLERANCE, |f| f.r_squared),
        ("p_fit", &PUBLISHED_P, FIT_P_TOLERANCE, |f| f.p_two_sided),
    ];
    for (name, published, tolerance, get) in metrics {
        for (q, &p) in published.iter().enumerate() {
            checks.push(Check {
                name: format!("Q{} {name}", q + 1),
                computed: get(&report.fits[q]),
                published: p,
                tolerance,
            });
        }
    }
    for &(i, j, p) in &PUBLISHED_PAIR_P {
        let computed = report
            .comparison(i, j)
            .map(|c| c.p_directional())
            .unwrap_or(f64::NAN);
        checks.push(Check {
            name: format!("Q{}-Q{} p_one_sided", i + 1, j + 1),
            computed,
            published: p,
            tolerance: PAIR_P_TOLERANCE,
        });
    }
    Ok(Reproduction { report, checks })
}
