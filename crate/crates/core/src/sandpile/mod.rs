//! Bak–Tang–Wiesenfeld sandpile on a finite lattice with open edges.
//!
//! Each cell holds a grain count. A cell reaching `threshold` topples: it
//! loses `threshold` grains and each of its four von Neumann neighbors gains
//! one. Grains pushed past the edge (and any excess when `threshold > 4`)
//! leave the system. Deposits follow a [`DepositionPolicy`]; an optional
//! [`InterventionPolicy`] periodically strips grains from the most-loaded
//! cells without triggering topplings.

mod batch;
mod config;
mod distribution;
mod lattice;
mod run;

#[cfg(feature = "parallel")]
pub use batch::run_batch_parallel;
pub use batch::{run_batch, run_batch_sequential, seed_sweep};
pub use config::{
    check_geometry, default_warmup, DepositionPolicy, InterventionPolicy, LatticeConfig, Site,
    TieBreak, DEFAULT_THRESHOLD,
};
pub use distribution::{
    histogram, size_distribution, size_distribution_by, Binning, Histogram, HistogramBin,
    SizeMeasure,
};
pub use lattice::{AvalancheEvent, Lattice};
pub use run::{
    read_events_csv, run_simulation, RunHeader, RunTotals, Simulation, SimulationRun, StepOutcome,
    RUN_CSV_HEADER,
};
