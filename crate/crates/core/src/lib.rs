//! Sandpile avalanches and wildfire size-class statistics.
//!
//! * [`sandpile`]: lattice model, deposition/intervention policies, runs and
//!   size histograms.
//! * [`fire`]: yearly fire records and year groupings.
//! * [`stats`]: regression, t/F/chi-square tails and group tests.
//! * [`pipeline`]: analyses built from the above, plus CSV emitters.

pub mod error;
pub mod fire;
mod par;
pub mod pipeline;
pub mod sandpile;
pub mod stats;

pub use error::{Error, Result};
pub use pipeline::emit::{sha256_hex, TOOLKIT_VERSION};
