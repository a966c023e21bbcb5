use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fire::{average_counts, CategoryGrouping, ClassAverageTable, FireClass, FireDataset};
use crate::par::map_ordered;
use crate::stats::{compare_slopes, ols_fit, RegressionFit, SlopeComparison};

/// log10(class acreage) vs log10(mean count) for one category, classes B–G
/// with a positive mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogLogPoints {
    pub category: usize,
    pub classes: Vec<FireClass>,
    pub points: Vec<(f64, f64)>,
    /// Classes dropped because their mean count is zero.
    pub excluded: Vec<FireClass>,
}

/// Log-of-mean points for `category`; class A is never used.
pub fn build_log_points(table: &ClassAverageTable, category: usize) -> Result<LogLogPoints> {
    if category >= table.category_count() {
        return Err(Error::Config(format!(
            "category {category} out of range ({} categories)",
            table.category_count()
        )));
    }
    let mut out = LogLogPoints {
        category,
        classes: Vec::new(),
        points: Vec::new(),
        excluded: Vec::new(),
    };
    for class in FireClass::FITTED {
        let m = table.mean(category, class);
        if m > 0.0 {
            out.classes.push(class);
            out.points
                .push((class.representative_acres().log10(), m.log10()));
        } else {
            out.excluded.push(class);
        }
    }
    if out.points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "category `{}` has {} classes with nonzero counts, need 3",
            table.labels[category],
            out.points.len()
        )));
    }
    Ok(out)
}

/// Regression of category slopes on median prescribed acreage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurnRegression {
    pub fit: RegressionFit,
    /// `(category, median acres, slope)` for every category with a median.
    pub points: Vec<(usize, f64, f64)>,
    pub excluded_categories: Vec<usize>,
}

impl BurnRegression {
    pub fn is_included(&self, category: usize) -> bool {
        !self.excluded_categories.contains(&category)
    }
}

/// Per-category fits with the pairwise slope comparisons.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeRiskReport {
    pub labels: Vec<String>,
    pub points: Vec<LogLogPoints>,
    pub fits: Vec<RegressionFit>,
    /// Square matrix, `comparisons[i][j]` compares category i against j;
    /// the diagonal is `None`.
    pub comparisons: Vec<Vec<Option<SlopeComparison>>>,
    pub slopes_vs_burn: Option<BurnRegression>,
}

impl SlopeRiskReport {
    pub fn category_count(&self) -> usize {
        self.labels.len()
    }

    pub fn comparison(&self, i: usize, j: usize) -> Option<&SlopeComparison> {
        self.comparisons.get(i)?.get(j)?.as_ref()
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.fits.iter().map(|f| f.slope).collect()
    }
}

/// Fits every category of a class-average table and compares all pairs.
///
/// Categories that cannot be fitted are all reported in one
/// insufficient-data error.
pub fn fit_table(table: &ClassAverageTable) -> Result<SlopeRiskReport> {
    let categories: Vec<usize> = (0..table.category_count()).collect();
    let results = map_ordered(&categories, |&c| {
        let pts = build_log_points(table, c)?;
        let fit = ols_fit(&pts.points)
            .map_err(|e| Error::InsufficientData(format!("category `{}`: {e}", table.labels[c])))?;
        Ok((pts, fit))
    });

    let mut problems = Vec::new();
    let mut points = Vec::new();
    let mut fits = Vec::new();
    for r in results {
        match r {
            Ok((p, f)) => {
                points.push(p);
                fits.push(f);
            }
            Err(Error::InsufficientData(msg)) => problems.push(msg),
            Err(e) => return Err(e),
        }
    }
    if !problems.is_empty() {
        return Err(Error::InsufficientData(problems.join("; ")));
    }

    let k = fits.len();
    let mut comparisons = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                comparisons[i][j] = Some(compare_slopes(&fits[i], &fits[j])?);
            }
        }
    }
    Ok(SlopeRiskReport {
        labels: table.labels.clone(),
        points,
        fits,
        comparisons,
        slopes_vs_burn: None,
    })
}

/// Class averages per category, then [`fit_table`].
pub fn fit_all_categories(
    dataset: &FireDataset,
    grouping: &CategoryGrouping,
) -> Result<SlopeRiskReport> {
    fit_table(&average_counts(dataset, grouping)?)
}

/// OLS of category slope on median prescribed acreage, skipping `exclude`
/// and categories without a median.
pub fn slopes_vs_burn(
    report: &SlopeRiskReport,
    category_medians: &BTreeMap<usize, f64>,
    exclude: &[usize],
) -> Result<BurnRegression> {
    let points: Vec<(usize, f64, f64)> = category_medians
        .iter()
        .filter(|(&c, _)| c < report.fits.len())
        .map(|(&c, &m)| (c, m, report.fits[c].slope))
        .collect();
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|(c, _, _)| !exclude.contains(c))
        .map(|&(_, m, s)| (m, s))
        .collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "slope-vs-burn regression has {} usable categories, need 3",
            used.len()
        )));
    }
    let fit = ols_fit(&used)
        .map_err(|e| Error::InsufficientData(format!("slope-vs-burn regression: {e}")))?;
    let mut excluded_categories: Vec<usize> = exclude.to_vec();
    excluded_categories.sort_unstable();
    excluded_categories.dedup();
    Ok(BurnRegression {
        fit,
        points,
        excluded_categories,
    })
}
