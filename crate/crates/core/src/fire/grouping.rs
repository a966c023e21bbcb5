use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::records::{FireClass, FireDataset};
use crate::error::{Error, Result};
use crate::stats::median;

/// Inclusive range of years.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub label: String,
    pub start: i32,
    pub end: i32,
}

impl Period {
    pub fn new(start: i32, end: i32) -> Self {
        Period {
            label: format!("{start}-{end}"),
            start,
            end,
        }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupingMethod {
    QuantileByPrescribedAcres { groups: usize },
    ExplicitPeriods { periods: Vec<Period> },
    AllYears,
}

impl fmt::Display for GroupingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupingMethod::QuantileByPrescribedAcres { groups } => write!(f, "quantile:{groups}"),
            GroupingMethod::ExplicitPeriods { periods } => {
                let parts: Vec<String> = periods
                    .iter()
                    .map(|p| format!("{}-{}", p.start, p.end))
                    .collect();
                write!(f, "periods:{}", parts.join(","))
            }
            GroupingMethod::AllYears => write!(f, "all"),
        }
    }
}

impl FromStr for GroupingMethod {
    type Err = Error;

    /// `quintile`, `quantile:<g>`, `all` or `periods:<y0>-<y1>,<y2>-<y3>,…`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quintile" => return Ok(GroupingMethod::QuantileByPrescribedAcres { groups: 5 }),
            "quartile" => return Ok(GroupingMethod::QuantileByPrescribedAcres { groups: 4 }),
            "all" => return Ok(GroupingMethod::AllYears),
            _ => {}
        }
        if let Some(g) = s.strip_prefix("quantile:") {
            let groups = g
                .parse()
                .map_err(|_| Error::Config(format!("bad group count `{g}`")))?;
            return Ok(GroupingMethod::QuantileByPrescribedAcres { groups });
        }
        if let Some(list) = s.strip_prefix("periods:") {
            let periods = list
                .split(',')
                .map(|p| {
                    let (a, b) = p
                        .trim()
                        .split_once('-')
                        .ok_or_else(|| Error::Config(format!("bad period `{p}`")))?;
                    let start = a
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad period start `{a}`")))?;
                    let end = b
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad period end `{b}`")))?;
                    Ok(Period::new(start, end))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(GroupingMethod::ExplicitPeriods { periods });
        }
        Err(Error::Config(format!(
            "unknown grouping `{s}` (expected quintile, quantile:<g>, periods:<spec> or all)"
        )))
    }
}

/// Years assigned to numbered categories (0-based internally).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategoryGrouping {
    pub method: GroupingMethod,
    pub labels: Vec<String>,
    pub assignments: BTreeMap<i32, usize>,
    /// Median prescribed acreage for categories that have any.
    pub category_medians: BTreeMap<usize, f64>,
}

impl CategoryGrouping {
    pub fn category_count(&self) -> usize {
        self.labels.len()
    }

    pub fn years_in(&self, category: usize) -> Vec<i32> {
        self.assignments
            .iter()
            .filter(|&(_, &c)| c == category)
            .map(|(&y, _)| y)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.labels.len()];
        for &c in self.assignments.values() {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn category_of(&self, year: i32) -> Option<usize> {
        self.assignments.get(&year).copied()
    }

    /// Builds the grouping named by `method`.
    pub fn build(dataset: &FireDataset, method: &GroupingMethod) -> Result<Self> {
        match method {
            GroupingMethod::QuantileByPrescribedAcres { groups } => {
                assign_quantiles(dataset, *groups)
            }
            GroupingMethod::ExplicitPeriods { periods } => assign_periods(dataset, periods),
            GroupingMethod::AllYears => Ok(all_years(dataset)),
        }
    }
}

fn medians_of(
    dataset: &FireDataset,
    assignments: &BTreeMap<i32, usize>,
    k: usize,
) -> BTreeMap<usize, f64> {
    let mut acres: Vec<Vec<f64>> = vec![Vec::new(); k];
    for r in dataset.records() {
        if let (Some(&c), Some(a)) = (assignments.get(&r.year), r.prescribed_acres) {
            acres[c].push(a);
        }
    }
    acres
        .iter()
        .enumerate()
        .filter_map(|(c, v)| median(v).map(|m| (c, m)))
        .collect()
}

fn quantile_name(groups: usize) -> &'static str {
    match groups {
        2 => "Half",
        3 => "Tercile",
        4 => "Quartile",
        5 => "Quintile",
        10 => "Decile",
        _ => "Quantile",
    }
}

/// Group sizes for `n` items in `groups` quantiles: `n / groups` each, with
/// the remainder handed out one at a time to the outermost groups first
/// (1st, last, 2nd, second-to-last, …).
pub fn quantile_sizes(n: usize, groups: usize) -> Vec<usize> {
    let mut sizes = vec![n / groups; groups];
    let (mut lo, mut hi) = (0, groups - 1);
    for i in 0..n % groups {
        if i % 2 == 0 {
            sizes[lo] += 1;
            lo += 1;
        } else {
            sizes[hi] += 1;
            hi -= 1;
        }
    }
    sizes
}

/// Splits years into `groups` categories by ascending prescribed acreage,
/// ties ordered by year.
pub fn assign_quantiles(dataset: &FireDataset, groups: usize) -> Result<CategoryGrouping> {
    if groups < 2 {
        return Err(Error::Config(format!(
            "need at least 2 groups, got {groups}"
        )));
    }
    let missing: Vec<i32> = dataset
        .records()
        .iter()
        .filter(|r| r.prescribed_acres.is_none())
        .map(|r| r.year)
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingPrescribed(missing));
    }
    let n = dataset.len();
    if n < groups {
        return Err(Error::InsufficientData(format!(
            "{n} records cannot form {groups} groups"
        )));
    }

    let mut order: Vec<(f64, i32)> = dataset
        .records()
        .iter()
        .map(|r| (r.prescribed_acres.unwrap_or_default(), r.year))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut assignments = BTreeMap::new();
    let mut pos = 0;
    for (cat, size) in quantile_sizes(n, groups).into_iter().enumerate() {
        for &(_, year) in &order[pos..pos + size] {
            assignments.insert(year, cat);
        }
        pos += size;
    }
    let name = quantile_name(groups);
    Ok(CategoryGrouping {
        method: GroupingMethod::QuantileByPrescribedAcres { groups },
        labels: (1..=groups).map(|i| format!("{name} {i}")).collect(),
        category_medians: medians_of(dataset, &assignments, groups),
        assignments,
    })
}

/// One category per period; years outside every period stay unassigned.
pub fn assign_periods(dataset: &FireDataset, periods: &[Period]) -> Result<CategoryGrouping> {
    if periods.is_empty() {
        return Err(Error::Config("no periods given".into()));
    }
    for p in periods {
        if p.start > p.end {
            return Err(Error::Config(format!(
                "period {} ends before it starts",
                p.label
            )));
        }
    }
    for (i, a) in periods.iter().enumerate() {
        for b in &periods[i + 1..] {
            if a.start <= b.end && b.start <= a.end {
                return Err(Error::Config(format!(
                    "periods {} and {} overlap",
                    a.label, b.label
                )));
            }
        }
    }
    let assignments: BTreeMap<i32, usize> = dataset
        .years()
        .filter_map(|y| periods.iter().position(|p| p.contains(y)).map(|c| (y, c)))
        .collect();
    Ok(CategoryGrouping {
        method: GroupingMethod::ExplicitPeriods {
            periods: periods.to_vec(),
        },
        labels: periods.iter().map(|p| p.label.clone()).collect(),
        category_medians: medians_of(dataset, &assignments, periods.len()),
        assignments,
    })
}

/// A single category holding every year.
pub fn all_years(dataset: &FireDataset) -> CategoryGrouping {
    let assignments: BTreeMap<i32, usize> = dataset.years().map(|y| (y, 0)).collect();
    CategoryGrouping {
        method: GroupingMethod::AllYears,
        labels: vec!["All years".into()],
        category_medians: medians_of(dataset, &assignments, 1),
        assignments,
    }
}

/// Mean yearly count of every class, per category.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassAverageTable {
    pub labels: Vec<String>,
    /// `means[category][class.index()]`
    pub means: Vec<[f64; 7]>,
    /// Years behind each category (0 for tables given directly).
    pub sizes: Vec<usize>,
}

impl ClassAverageTable {
    pub fn category_count(&self) -> usize {
        self.labels.len()
    }

    pub fn mean(&self, category: usize, class: FireClass) -> f64 {
        self.means[category][class.index()]
    }
}

/// Arithmetic mean of raw yearly counts within each category, class A included.
pub fn average_counts(
    dataset: &FireDataset,
    grouping: &CategoryGrouping,
) -> Result<ClassAverageTable> {
    let k = grouping.category_count();
    let mut sums = vec![[0u64; 7]; k];
    let mut sizes = vec![0usize; k];
    for r in dataset.records() {
        if let Some(c) = grouping.category_of(r.year) {
            for (s, v) in sums[c].iter_mut().zip(r.counts) {
                *s += v;
            }
            sizes[c] += 1;
        }
    }
    if let Some(empty) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InsufficientData(format!(
            "category `{}` has no records",
            grouping.labels[empty]
        )));
    }
    let means = sums
        .iter()
        .zip(&sizes)
        .map(|(s, &n)| s.map(|v| v as f64 / n as f64))
        .collect();
    Ok(ClassAverageTable {
        labels: grouping.labels.clone(),
        means,
        sizes,
    })
}
