//! Size-frequency histograms of avalanche records.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lattice::AvalancheEvent;
use super::run::SimulationRun;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binning {
    /// Edges 1, r, r², … up to the first edge above the largest size.
    Logarithmic { ratio: f64 },
    /// Bins `[e_i, e_{i+1})`; sizes outside the edges are counted separately.
    ExplicitEdges { edges: Vec<f64> },
}

impl Default for Binning {
    fn default() -> Self {
        Binning::Logarithmic { ratio: 2.0 }
    }
}

impl fmt::Display for Binning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binning::Logarithmic { ratio } => write!(f, "log:{ratio}"),
            Binning::ExplicitEdges { edges } => {
                let parts: Vec<String> = edges.iter().map(|e| e.to_string()).collect();
                write!(f, "edges:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Binning {
    type Err = Error;

    /// `log:<ratio>` or `edges:<e0>,<e1>,…`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(r) = s.strip_prefix("log:") {
            let ratio = r
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad log-binning ratio `{r}`")))?;
            let b = Binning::Logarithmic { ratio };
            b.validate()?;
            Ok(b)
        } else if let Some(list) = s.strip_prefix("edges:") {
            let edges = list
                .split(',')
                .map(|e| {
                    e.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad bin edge `{e}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let b = Binning::ExplicitEdges { edges };
            b.validate()?;
            Ok(b)
        } else {
            Err(Error::Config(format!(
                "unknown binning `{s}` (expected log:<ratio> or edges:<list>)"
            )))
        }
    }
}

impl Binning {
    pub fn validate(&self) -> Result<()> {
        match self {
            Binning::Logarithmic { ratio } => {
                if !(ratio.is_finite() && *ratio > 1.0) {
                    return Err(Error::Config(format!(
                        "logarithmic bin ratio must exceed 1, got {ratio}"
                    )));
                }
            }
            Binning::ExplicitEdges { edges } => {
                if edges.len() < 2 {
                    return Err(Error::Config("need at least two bin edges".into()));
                }
                if edges[0] <= 0.0 || !edges.iter().all(|e| e.is_finite()) {
                    return Err(Error::Config(
                        "bin edges must be positive and finite".into(),
                    ));
                }
                if edges.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(
                        "bin edges must be strictly increasing".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Half-open bin `[lower, upper)` over integer sizes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    /// Geometric mean of the edges.
    pub representative: f64,
    pub count: u64,
    /// How many integer sizes the bin can hold.
    pub width: u64,
}

impl HistogramBin {
    fn new(lower: f64, upper: f64) -> Self {
        HistogramBin {
            lower,
            upper,
            representative: (lower * upper).sqrt(),
            count: 0,
            width: (upper.ceil() - lower.ceil()).max(0.0) as u64,
        }
    }

    /// Count per admissible integer size; `None` for bins holding no integer.
    pub fn density(&self) -> Option<f64> {
        (self.width > 0).then(|| self.count as f64 / self.width as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    /// Nonzero sizes that fell outside explicit edges.
    pub outside: u64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }
}

/// Which avalanche statistic is binned.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMeasure {
    #[default]
    Topplings,
    Area,
}

impl SizeMeasure {
    pub fn of(&self, e: &AvalancheEvent) -> u64 {
        match self {
            SizeMeasure::Topplings => e.topplings,
            SizeMeasure::Area => e.area,
        }
    }
}

/// Histogram of the run's avalanche sizes (topplings). Events without any
/// toppling are left out.
pub fn size_distribution(run: &SimulationRun, binning: &Binning) -> Result<Histogram> {
    let sizes: Vec<u64> = run.events.iter().map(|e| e.topplings).collect();
    histogram(&sizes, binning)
}

/// Histogram of the run under another size measure.
pub fn size_distribution_by(
    run: &SimulationRun,
    binning: &Binning,
    measure: SizeMeasure,
) -> Result<Histogram> {
    let sizes: Vec<u64> = run.events.iter().map(|e| measure.of(e)).collect();
    histogram(&sizes, binning)
}

/// Bins the nonzero entries of `sizes`.
pub fn histogram(sizes: &[u64], binning: &Binning) -> Result<Histogram> {
    binning.validate()?;
    let nonzero = || sizes.iter().copied().filter(|&s| s > 0);
    let Some(max) = nonzero().max() else {
        return Ok(Histogram::default());
    };

    match binning {
        Binning::Logarithmic { ratio } => {
            let ratio = *ratio;
            let nbins = log_bin_index(max, ratio) + 1;
            let mut bins: Vec<HistogramBin> = (0..nbins)
                .map(|k| HistogramBin::new(ratio.powi(k as i32), ratio.powi(k as i32 + 1)))
                .collect();
            for s in nonzero() {
                bins[log_bin_index(s, ratio)].count += 1;
            }
            Ok(Histogram { bins, outside: 0 })
        }
        Binning::ExplicitEdges { edges } => {
            let mut bins: Vec<HistogramBin> = edges
                .windows(2)
                .map(|w| HistogramBin::new(w[0], w[1]))
                .collect();
            let mut outside = 0;
            for s in nonzero() {
                let x = s as f64;
                // first edge strictly greater than x
                let upper = edges.partition_point(|&e| e <= x);
                if upper == 0 || upper == edges.len() {
                    outside += 1;
                } else {
                    bins[upper - 1].count += 1;
                }
            }
            Ok(Histogram { bins, outside })
        }
    }
}

/// Index `k` with `ratio^k <= size < ratio^(k+1)`, using exact powers to
/// settle floating-point rounding at the edges.
fn log_bin_index(size: u64, ratio: f64) -> usize {
    let x = size as f64;
    let mut k = (x.ln() / ratio.ln()).floor().max(0.0) as i32;
    while k > 0 && ratio.powi(k) > x {
        k -= 1;
    }
    while ratio.powi(k + 1) <= x {
        k += 1;
    }
    k as usize
}
