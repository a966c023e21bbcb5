//! End-to-end analyses: class-size slope fits per burn category, period
//! contrasts, sandpile size-frequency fits, and their CSV output.

pub mod emit;
pub mod fixture;
mod periods;
mod reproduce;
mod simulation;
mod slopes;

pub use periods::{period_comparison, PairTest, PeriodComparison};
pub use reproduce::{
    reproduce_published, Check, Reproduction, FIT_P_TOLERANCE, PAIR_P_TOLERANCE, R2_TOLERANCE,
    SE_TOLERANCE, SLOPE_TOLERANCE,
};
pub use simulation::{
    analyze_simulation, analyze_sizes, compare_policies, fit_histogram, PolicyComparison,
    PolicySummary, SimulationFit, SimulationFitOptions, MIN_NONZERO_EVENTS,
};
pub use slopes::{
    build_log_points, fit_all_categories, fit_table, slopes_vs_burn, BurnRegression, LogLogPoints,
    SlopeRiskReport,
};
