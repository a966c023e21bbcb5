use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default toppling threshold for the 4-neighbor lattice.
pub const DEFAULT_THRESHOLD: u64 = 4;

/// A lattice coordinate, `row` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

impl Site {
    pub fn new(row: usize, col: usize) -> Self {
        Site { row, col }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Where each new grain lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DepositionPolicy {
    UniformRandom,
    /// Agent aiming for the biggest collapse: drops on a most-loaded cell.
    MaxIntent,
    /// Agent avoiding collapse: drops on a least-loaded cell.
    MinIntent,
    FixedSite {
        site: Site,
    },
}

impl fmt::Display for DepositionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepositionPolicy::UniformRandom => write!(f, "uniform"),
            DepositionPolicy::MaxIntent => write!(f, "max"),
            DepositionPolicy::MinIntent => write!(f, "min"),
            DepositionPolicy::FixedSite { site } => write!(f, "fixed:{},{}", site.row, site.col),
        }
    }
}

impl FromStr for DepositionPolicy {
    type Err = Error;

    /// Accepts `uniform`, `max`, `min` or `fixed:<row>,<col>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "random" => Ok(DepositionPolicy::UniformRandom),
            "max" => Ok(DepositionPolicy::MaxIntent),
            "min" => Ok(DepositionPolicy::MinIntent),
            other => {
                let coords = other.strip_prefix("fixed:").ok_or_else(|| {
                    Error::Config(format!(
                        "unknown deposition policy `{other}` (expected uniform, max, min or fixed:<row>,<col>)"
                    ))
                })?;
                let (r, c) = coords
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("bad fixed site `{coords}`")))?;
                let row = r
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad row `{r}` in fixed site")))?;
                let col = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad column `{c}` in fixed site")))?;
                Ok(DepositionPolicy::FixedSite {
                    site: Site { row, col },
                })
            }
        }
    }
}

/// How ties are resolved when MaxIntent/MinIntent find several extreme cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Lowest row-major index wins.
    #[default]
    LowestIndex,
    /// Uniform choice among the tied cells, drawn from the run's generator.
    SeededRandom,
}

/// Fuel-removal intervention, the lattice analog of a prescribed burn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterventionPolicy {
    #[default]
    None,
    PeriodicRemoval {
        /// Deposits between interventions.
        period: u64,
        /// Fraction of most-loaded cells targeted, in (0, 1].
        top_fraction: f64,
        grains_removed_per_cell: u64,
    },
}

impl InterventionPolicy {
    /// True when an intervention fires after the `deposit_count`-th deposit.
    pub fn is_due(&self, deposit_count: u64) -> bool {
        match *self {
            InterventionPolicy::None => false,
            InterventionPolicy::PeriodicRemoval { period, .. } => {
                period > 0 && deposit_count > 0 && deposit_count.is_multiple_of(period)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let InterventionPolicy::PeriodicRemoval {
            period,
            top_fraction,
            grains_removed_per_cell,
        } = *self
        {
            if period == 0 {
                return Err(Error::Config("intervention period must be positive".into()));
            }
            if !(top_fraction > 0.0 && top_fraction <= 1.0) {
                return Err(Error::Config(format!(
                    "intervention top_fraction {top_fraction} outside (0, 1]"
                )));
            }
            if grains_removed_per_cell == 0 {
                return Err(Error::Config(
                    "intervention grains_removed_per_cell must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for InterventionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterventionPolicy::None => write!(f, "none"),
            InterventionPolicy::PeriodicRemoval {
                period,
                top_fraction,
                grains_removed_per_cell,
            } => write!(
                f,
                "periodic:{period},{top_fraction},{grains_removed_per_cell}"
            ),
        }
    }
}

impl FromStr for InterventionPolicy {
    type Err = Error;

    /// Accepts `none` or `periodic:<period>,<top_fraction>,<grains_per_cell>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "none" {
            return Ok(InterventionPolicy::None);
        }
        let body = s.strip_prefix("periodic:").ok_or_else(|| {
            Error::Config(format!(
                "unknown intervention `{s}` (expected none or periodic:<period>,<fraction>,<grains>)"
            ))
        })?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "periodic intervention needs 3 fields, got `{body}`"
            )));
        }
        let bad = |what: &str, v: &str| Error::Config(format!("bad {what} `{v}` in intervention"));
        let policy = InterventionPolicy::PeriodicRemoval {
            period: parts[0].parse().map_err(|_| bad("period", parts[0]))?,
            top_fraction: parts[1]
                .parse()
                .map_err(|_| bad("top_fraction", parts[1]))?,
            grains_removed_per_cell: parts[2].parse().map_err(|_| bad("grain count", parts[2]))?,
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Everything that determines a simulation run. Equal configs give
/// bit-identical runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub width: usize,
    pub height: usize,
    pub threshold: u64,
    pub seed: u64,
    pub warmup_deposits: u64,
    pub measured_deposits: u64,
    pub deposition_policy: DepositionPolicy,
    pub intervention: InterventionPolicy,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl LatticeConfig {
    /// Uniform deposition, threshold 4, seed 0, warmup of ten deposits per cell.
    pub fn new(width: usize, height: usize) -> Self {
        LatticeConfig {
            width,
            height,
            threshold: DEFAULT_THRESHOLD,
            seed: 0,
            warmup_deposits: default_warmup(width, height),
            measured_deposits: 1,
            deposition_policy: DepositionPolicy::UniformRandom,
            intervention: InterventionPolicy::None,
            tie_break: TieBreak::LowestIndex,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threshold(mut self, threshold: u64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_deposits(mut self, warmup: u64, measured: u64) -> Self {
        self.warmup_deposits = warmup;
        self.measured_deposits = measured;
        self
    }

    pub fn with_policy(mut self, policy: DepositionPolicy) -> Self {
        self.deposition_policy = policy;
        self
    }

    pub fn with_intervention(mut self, intervention: InterventionPolicy) -> Self {
        self.intervention = intervention;
        self
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    pub fn validate(&self) -> Result<()> {
        check_geometry(self.width, self.height, self.threshold)?;
        if self.measured_deposits == 0 {
            return Err(Error::Config("measured_deposits must be positive".into()));
        }
        if let DepositionPolicy::FixedSite { site } = self.deposition_policy {
            if site.row >= self.height || site.col >= self.width {
                return Err(Error::Config(format!(
                    "fixed site {site} outside {}x{} lattice",
                    self.width, self.height
                )));
            }
        }
        self.intervention.validate()
    }
}

/// Ten deposits per cell.
pub fn default_warmup(width: usize, height: usize) -> u64 {
    10 * (width as u64) * (height as u64)
}

/// Checks dimensions and threshold.
///
/// A toppling removes `threshold` grains and hands one to each in-grid
/// neighbor, so the threshold must cover the largest in-grid neighbor count
/// (no grain creation) and exceed the smallest (some cell always leaks,
/// which bounds every cascade). For lattices at least 3 wide and 3 tall this
/// is simply `threshold >= 4`.
pub fn check_geometry(width: usize, height: usize, threshold: u64) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Config(format!(
            "lattice dimensions must be positive, got {width}x{height}"
        )));
    }
    if threshold == 0 {
        return Err(Error::Config("threshold must be positive".into()));
    }
    let axis_max = |n: usize| match n {
        1 => 0u64,
        2 => 1,
        _ => 2,
    };
    let axis_min = |n: usize| if n == 1 { 0u64 } else { 1 };
    let max_degree = axis_max(width) + axis_max(height);
    let min_degree = axis_min(width) + axis_min(height);
    if threshold < max_degree || threshold <= min_degree {
        let needed = max_degree.max(min_degree + 1);
        return Err(Error::Config(format!(
            "threshold {threshold} too small for a {width}x{height} lattice (need at least {needed})"
        )));
    }
    Ok(())
}
