use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fire::{assign_periods, FireDataset, Period};
use crate::stats::{one_way_anova, two_sample_t, AnovaResult, TTestResult, TTestVariant};

/// A t-test between periods `first` and `second` (indices into the period list).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTest {
    pub first: usize,
    pub second: usize,
    pub result: TTestResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodComparison {
    pub labels: Vec<String>,
    /// Prescribed acreage, every pair of periods that have at least two values.
    pub prescribed_tests: Vec<PairTest>,
    /// Total burned acreage, every pair of periods.
    pub burned_tests: Vec<PairTest>,
    /// Total burned acreage across all periods.
    pub burned_anova: AnovaResult,
}

/// Compares consecutive (or arbitrary) periods of the record: t-tests on
/// prescribed acreage where it was recorded, and t-tests plus a one-way
/// ANOVA on total burned acreage.
pub fn period_comparison(
    dataset: &FireDataset,
    periods: &[Period],
    variant: TTestVariant,
) -> Result<PeriodComparison> {
    let grouping = assign_periods(dataset, periods)?;
    let k = periods.len();
    let mut prescribed: Vec<Vec<f64>> = vec![Vec::new(); k];
    let mut burned: Vec<Vec<f64>> = vec![Vec::new(); k];
    for r in dataset.records() {
        if let Some(c) = grouping.category_of(r.year) {
            if let Some(p) = r.prescribed_acres {
                prescribed[c].push(p);
            }
            if let Some(b) = r.total_burned_acres {
                burned[c].push(b);
            }
        }
    }
    if k < 2 {
        return Err(Error::Config(
            "period comparison needs at least 2 periods".into(),
        ));
    }
    for (p, values) in periods.iter().zip(&burned) {
        if values.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "period {} has {} records with total burned acreage, need 2",
                p.label,
                values.len()
            )));
        }
    }

    let pair = |data: &[Vec<f64>], i: usize, j: usize| -> Result<PairTest> {
        two_sample_t(&data[i], &data[j], variant)
            .map(|result| PairTest {
                first: i,
                second: j,
                result,
            })
            .map_err(|e| {
                Error::InsufficientData(format!(
                    "periods {} vs {}: {e}",
                    periods[i].label, periods[j].label
                ))
            })
    };

    let mut prescribed_tests = Vec::new();
    let mut burned_tests = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if prescribed[i].len() >= 2 && prescribed[j].len() >= 2 {
                prescribed_tests.push(pair(&prescribed, i, j)?);
            }
            burned_tests.push(pair(&burned, i, j)?);
        }
    }
    let burned_anova = one_way_anova(&burned)
        .map_err(|e| Error::InsufficientData(format!("burned-acreage ANOVA: {e}")))?;
    Ok(PeriodComparison {
        labels: periods.iter().map(|p| p.label.clone()).collect(),
        prescribed_tests,
        burned_tests,
        burned_anova,
    })
}
