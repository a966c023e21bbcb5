//! Independent runs over many configs or seeds.
//!
//! Each run is sequential and deterministic; runs share nothing, so a batch
//! can be spread over threads and the results come back in input order
//! either way.

use super::config::LatticeConfig;
use super::run::{run_simulation, SimulationRun};
use crate::error::Result;

/// `runs` copies of `base` with seeds `base.seed, base.seed + 1, …` (wrapping).
pub fn seed_sweep(base: &LatticeConfig, runs: usize) -> Vec<LatticeConfig> {
    (0..runs as u64)
        .map(|i| base.clone().with_seed(base.seed.wrapping_add(i)))
        .collect()
}

/// Runs every config, in parallel when the `parallel` feature is on.
pub fn run_batch(configs: &[LatticeConfig]) -> Result<Vec<SimulationRun>> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(configs)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_sequential(configs)
    }
}

pub fn run_batch_sequential(configs: &[LatticeConfig]) -> Result<Vec<SimulationRun>> {
    configs.iter().map(run_simulation).collect()
}

#[cfg(feature = "parallel")]
pub fn run_batch_parallel(configs: &[LatticeConfig]) -> Result<Vec<SimulationRun>> {
    use rayon::prelude::*;
    configs.par_iter().map(run_simulation).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_offsets_seeds() {
        let base = LatticeConfig::new(4, 4).with_seed(u64::MAX);
        let seeds: Vec<u64> = seed_sweep(&base, 3).iter().map(|c| c.seed).collect();
        assert_eq!(seeds, vec![u64::MAX, 0, 1]);
    }

    #[test]
    fn batch_matches_individual_runs() {
        let base = LatticeConfig::new(8, 8)
            .with_seed(40)
            .with_deposits(200, 300);
        let configs = seed_sweep(&base, 6);
        let batch = run_batch(&configs).unwrap();
        let seq = run_batch_sequential(&configs).unwrap();
        assert_eq!(batch, seq);
        for (cfg, run) in configs.iter().zip(&batch) {
            assert_eq!(run.config.seed, cfg.seed);
        }
    }
}
