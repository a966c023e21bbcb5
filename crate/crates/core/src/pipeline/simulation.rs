use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sandpile::{
    histogram, run_batch, seed_sweep, Binning, DepositionPolicy, Histogram, LatticeConfig,
    SimulationRun,
};
use crate::stats::{kruskal_wallis, ols_fit, RankTestResult, RegressionFit};

/// Fewest nonzero avalanches worth fitting.
pub const MIN_NONZERO_EVENTS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationFitOptions {
    pub binning: Binning,
    /// Bins with fewer counts are left out of the fit.
    pub min_count: u64,
}

impl Default for SimulationFitOptions {
    fn default() -> Self {
        SimulationFitOptions {
            binning: Binning::default(),
            min_count: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationFit {
    pub histogram: Histogram,
    /// `(log10 representative size, log10 density)` of the fitted bins.
    pub points: Vec<(f64, f64)>,
    pub fit: RegressionFit,
}

/// Fits log10(count per unit size) against log10(bin representative) over
/// bins holding at least `min_count` events. Normalizing by bin width makes
/// the slope estimate the exponent of the size distribution itself.
pub fn fit_histogram(hist: &Histogram, min_count: u64) -> Result<(Vec<(f64, f64)>, RegressionFit)> {
    let points: Vec<(f64, f64)> = hist
        .bins
        .iter()
        .filter(|b| b.count > 0 && b.count >= min_count)
        .filter_map(|b| b.density().map(|d| (b.representative.log10(), d.log10())))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} usable histogram bins, need 3",
            points.len()
        )));
    }
    let fit = ols_fit(&points)?;
    Ok((points, fit))
}

/// Size-frequency fit of a simulated run's avalanche sizes (topplings).
pub fn analyze_simulation(
    run: &SimulationRun,
    options: &SimulationFitOptions,
) -> Result<SimulationFit> {
    analyze_sizes(&run.sizes(), options)
}

/// As [`analyze_simulation`], from raw sizes (zeros are ignored).
pub fn analyze_sizes(sizes: &[u64], options: &SimulationFitOptions) -> Result<SimulationFit> {
    let nonzero = sizes.iter().filter(|&&s| s > 0).count();
    if nonzero < MIN_NONZERO_EVENTS {
        return Err(Error::InsufficientData(format!(
            "{nonzero} nonzero avalanches, need {MIN_NONZERO_EVENTS}"
        )));
    }
    let histogram = histogram(sizes, &options.binning)?;
    let (points, fit) = fit_histogram(&histogram, options.min_count)?;
    Ok(SimulationFit {
        histogram,
        points,
        fit,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: DepositionPolicy,
    pub events: usize,
    pub mean_size: f64,
    /// Share of deposits that toppled anything.
    pub active_fraction: f64,
    pub max_size: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyComparison {
    pub summaries: Vec<PolicySummary>,
    /// Kruskal–Wallis across the pooled per-policy size samples.
    pub rank_test: RankTestResult,
}

impl PolicyComparison {
    pub fn summary(&self, policy: DepositionPolicy) -> Option<&PolicySummary> {
        self.summaries.iter().find(|s| s.policy == policy)
    }
}

/// Runs `base` under each deposition policy for `seeds` matched seeds
/// (`base.seed`, `base.seed + 1`, …) and compares the avalanche-size
/// samples with a rank test.
pub fn compare_policies(
    base: &LatticeConfig,
    policies: &[DepositionPolicy],
    seeds: usize,
) -> Result<PolicyComparison> {
    if seeds == 0 {
        return Err(Error::Config("need at least one seed".into()));
    }
    let configs: Vec<LatticeConfig> = policies
        .iter()
        .flat_map(|&p| seed_sweep(&base.clone().with_policy(p), seeds))
        .collect();
    let runs = run_batch(&configs)?;

    let mut samples = Vec::with_capacity(policies.len());
    let mut summaries = Vec::with_capacity(policies.len());
    for (&policy, chunk) in policies.iter().zip(runs.chunks(seeds)) {
        let sizes: Vec<u64> = chunk.iter().flat_map(|r| r.sizes()).collect();
        let n = sizes.len();
        summaries.push(PolicySummary {
            policy,
            events: n,
            mean_size: sizes.iter().sum::<u64>() as f64 / n as f64,
            active_fraction: sizes.iter().filter(|&&s| s > 0).count() as f64 / n as f64,
            max_size: sizes.iter().copied().max().unwrap_or(0),
        });
        samples.push(sizes.into_iter().map(|s| s as f64).collect::<Vec<f64>>());
    }
    Ok(PolicyComparison {
        summaries,
        rank_test: kruskal_wallis(&samples)?,
    })
}
