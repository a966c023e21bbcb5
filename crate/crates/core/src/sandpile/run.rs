use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::LatticeConfig;
use super::lattice::{AvalancheEvent, Lattice};
use crate::error::{Error, Result};

/// Column header of the per-event run CSV.
pub const RUN_CSV_HEADER: &str = "event_index,topplings,area,dissipated";

/// Result of a single deposit step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub event: AvalancheEvent,
    /// Grains removed by an intervention fired after this deposit.
    pub removed: u64,
    /// False while still in warmup.
    pub measured: bool,
}

/// Incremental driver for one run: choose site, deposit, relax, intervene.
///
/// The generator is ChaCha8 seeded with `config.seed` through
/// `SeedableRng::seed_from_u64`.
pub struct Simulation {
    config: LatticeConfig,
    lattice: Lattice,
    rng: ChaCha8Rng,
    deposits: u64,
}

impl Simulation {
    pub fn new(config: LatticeConfig) -> Result<Self> {
        config.validate()?;
        let lattice = Lattice::new(config.width, config.height, config.threshold)?;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(Simulation {
            config,
            lattice,
            rng,
            deposits: 0,
        })
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn deposits(&self) -> u64 {
        self.deposits
    }

    pub fn total_steps(&self) -> u64 {
        self.config.warmup_deposits + self.config.measured_deposits
    }

    pub fn is_finished(&self) -> bool {
        self.deposits >= self.total_steps()
    }

    pub fn step(&mut self) -> Result<StepOutcome> {
        let site = self.lattice.choose_site(
            &self.config.deposition_policy,
            self.config.tie_break,
            &mut self.rng,
        )?;
        let event = self.lattice.deposit(site)?;
        self.deposits += 1;
        let removed = if self.config.intervention.is_due(self.deposits) {
            self.lattice.apply_intervention(&self.config.intervention)
        } else {
            0
        };
        Ok(StepOutcome {
            event,
            removed,
            measured: self.deposits > self.config.warmup_deposits,
        })
    }

    /// Runs the remaining steps and collects the measured events.
    pub fn finish(mut self) -> Result<SimulationRun> {
        let mut events = Vec::with_capacity(self.config.measured_deposits as usize);
        while !self.is_finished() {
            let outcome = self.step()?;
            if outcome.measured {
                events.push(outcome.event);
            }
        }
        let totals = RunTotals::of(&self.lattice);
        Ok(SimulationRun {
            final_checksum: self.lattice.checksum(),
            config: self.config,
            events,
            totals,
        })
    }
}

/// Runs `config` from an empty lattice.
pub fn run_simulation(config: &LatticeConfig) -> Result<SimulationRun> {
    Simulation::new(config.clone())?.finish()
}

/// Grain bookkeeping at the end of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTotals {
    pub deposited: u64,
    pub on_lattice: u64,
    pub dissipated: u64,
    pub removed: u64,
}

impl RunTotals {
    pub fn of(lattice: &Lattice) -> Self {
        RunTotals {
            deposited: lattice.total_deposited(),
            on_lattice: lattice.grain_total(),
            dissipated: lattice.total_dissipated(),
            removed: lattice.total_removed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationRun {
    pub config: LatticeConfig,
    /// One event per measured deposit, in order.
    pub events: Vec<AvalancheEvent>,
    pub final_checksum: String,
    pub totals: RunTotals,
}

/// JSON run header: config, checksum and totals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub toolkit_version: Option<String>,
    pub config: LatticeConfig,
    pub checksum: String,
    pub totals: RunTotals,
    pub events: usize,
}

impl SimulationRun {
    /// Toppling counts of every measured event.
    pub fn sizes(&self) -> Vec<u64> {
        self.events.iter().map(|e| e.topplings).collect()
    }

    pub fn mean_size(&self) -> f64 {
        if self.events.is_empty() {
            return 0.0;
        }
        self.events.iter().map(|e| e.topplings as f64).sum::<f64>() / self.events.len() as f64
    }

    pub fn header(&self, toolkit_version: Option<&str>) -> RunHeader {
        RunHeader {
            toolkit_version: toolkit_version.map(str::to_owned),
            config: self.config.clone(),
            checksum: self.final_checksum.clone(),
            totals: self.totals,
            events: self.events.len(),
        }
    }

    /// Writes `event_index,topplings,area,dissipated` rows, preceded by
    /// `banner` as a `#` comment line when given.
    pub fn write_events_csv<W: Write>(
        &self,
        mut out: W,
        banner: Option<&str>,
    ) -> std::io::Result<()> {
        if let Some(b) = banner {
            writeln!(out, "# {b}")?;
        }
        writeln!(out, "{RUN_CSV_HEADER}")?;
        for (i, e) in self.events.iter().enumerate() {
            writeln!(out, "{},{},{},{}", i, e.topplings, e.area, e.dissipated)?;
        }
        out.flush()
    }
}

/// Reads the event CSV produced by [`SimulationRun::write_events_csv`].
/// `#` comment lines are skipped.
pub fn read_events_csv<R: Read>(input: R) -> Result<Vec<AvalancheEvent>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut records = reader.records();
    let header = match records.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(Error::Schema(format!("unreadable run CSV header: {e}"))),
        None => return Err(Error::Schema("empty run CSV".into())),
    };
    let found: Vec<&str> = header.iter().collect();
    if found.join(",") != RUN_CSV_HEADER {
        return Err(Error::Schema(format!(
            "run CSV header must be `{RUN_CSV_HEADER}`, found `{}`",
            found.join(",")
        )));
    }
    let columns = ["event_index", "topplings", "area", "dissipated"];
    let mut events = Vec::new();
    for (n, rec) in records.enumerate() {
        let row = n + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: "-".into(),
            message: e.to_string(),
        })?;
        if rec.len() != columns.len() {
            return Err(Error::Parse {
                row,
                column: "-".into(),
                message: format!("expected {} fields, found {}", columns.len(), rec.len()),
            });
        }
        let mut vals = [0u64; 4];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = rec[k].trim().parse().map_err(|_| Error::Parse {
                row,
                column: columns[k].into(),
                message: format!("not a non-negative integer: `{}`", &rec[k]),
            })?;
        }
        events.push(AvalancheEvent {
            topplings: vals[1],
            area: vals[2],
            dissipated: vals[3],
        });
    }
    Ok(events)
}
