use std::cmp::Reverse;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::{check_geometry, DepositionPolicy, InterventionPolicy, Site, TieBreak};
use crate::error::{Error, Result};

/// One relaxation cascade.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AvalancheEvent {
    /// Individual topplings, repeats of the same cell included.
    pub topplings: u64,
    /// Distinct cells that toppled at least once.
    pub area: u64,
    /// Grains that left the lattice during the cascade.
    pub dissipated: u64,
}

impl AvalancheEvent {
    pub fn is_empty(&self) -> bool {
        self.topplings == 0
    }
}

/// Grain counts on a finite lattice with open boundaries.
///
/// Bookkeeping holds between operations:
/// `total_deposited == grain_total() + total_dissipated + total_removed`.
#[derive(Clone, Debug)]
pub struct Lattice {
    width: usize,
    height: usize,
    threshold: u64,
    grains: Vec<u64>,
    total_deposited: u64,
    total_dissipated: u64,
    total_removed: u64,
    // scratch for relaxation
    stack: Vec<usize>,
    marks: Vec<u32>,
    epoch: u32,
}

impl Lattice {
    pub fn new(width: usize, height: usize, threshold: u64) -> Result<Self> {
        check_geometry(width, height, threshold)?;
        let cells = width * height;
        Ok(Lattice {
            width,
            height,
            threshold,
            grains: vec![0; cells],
            total_deposited: 0,
            total_dissipated: 0,
            total_removed: 0,
            stack: Vec::new(),
            marks: vec![0; cells],
            epoch: 0,
        })
    }

    /// Builds a lattice from row-major grain counts. The grains count as
    /// deposited; the configuration may be unstable until [`stabilize`] runs.
    ///
    /// [`stabilize`]: Lattice::stabilize
    pub fn from_grains(
        width: usize,
        height: usize,
        threshold: u64,
        grains: Vec<u64>,
    ) -> Result<Self> {
        let mut lattice = Lattice::new(width, height, threshold)?;
        if grains.len() != width * height {
            return Err(Error::Config(format!(
                "expected {} grain counts for a {width}x{height} lattice, got {}",
                width * height,
                grains.len()
            )));
        }
        lattice.total_deposited = grains.iter().sum();
        lattice.grains = grains;
        Ok(lattice)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn cell_count(&self) -> usize {
        self.grains.len()
    }

    /// Row-major grain counts.
    pub fn grains(&self) -> &[u64] {
        &self.grains
    }

    pub fn get(&self, site: Site) -> u64 {
        self.grains[self.index(site)]
    }

    pub fn total_deposited(&self) -> u64 {
        self.total_deposited
    }

    pub fn total_dissipated(&self) -> u64 {
        self.total_dissipated
    }

    /// Grains taken off by interventions.
    pub fn total_removed(&self) -> u64 {
        self.total_removed
    }

    pub fn grain_total(&self) -> u64 {
        self.grains.iter().sum()
    }

    pub fn is_stable(&self) -> bool {
        self.grains.iter().all(|&g| g < self.threshold)
    }

    /// `total_deposited == on-lattice + dissipated + removed`.
    pub fn is_conserved(&self) -> bool {
        self.total_deposited == self.grain_total() + self.total_dissipated + self.total_removed
    }

    pub fn contains(&self, site: Site) -> bool {
        site.row < self.height && site.col < self.width
    }

    fn index(&self, site: Site) -> usize {
        site.row * self.width + site.col
    }

    pub fn site_of(&self, index: usize) -> Site {
        Site {
            row: index / self.width,
            col: index % self.width,
        }
    }

    /// Adds one grain at `site` and relaxes the lattice.
    ///
    /// Only the target cell is checked for instability, so the lattice must
    /// be stable beforehand (always true inside a run).
    pub fn deposit(&mut self, site: Site) -> Result<AvalancheEvent> {
        if !self.contains(site) {
            return Err(Error::Config(format!(
                "site {site} outside {}x{} lattice",
                self.width, self.height
            )));
        }
        let i = self.index(site);
        self.grains[i] += 1;
        self.total_deposited += 1;
        self.stack.clear();
        if self.grains[i] >= self.threshold {
            self.stack.push(i);
        }
        Ok(self.relax())
    }

    /// Topples every unstable cell until all cells are below threshold.
    pub fn stabilize(&mut self) -> AvalancheEvent {
        self.stack.clear();
        let threshold = self.threshold;
        self.stack
            .extend((0..self.grains.len()).filter(|&i| self.grains[i] >= threshold));
        self.relax()
    }

    /// Stack-driven relaxation. Invariant: every cell at or above threshold
    /// sits on the stack exactly once. A popped cell sheds all its excess in
    /// one go (`k` topplings), which the abelian property permits.
    fn relax(&mut self) -> AvalancheEvent {
        let mut event = AvalancheEvent::default();
        if self.stack.is_empty() {
            return event;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.fill(0);
            self.epoch = 1;
        }
        let (w, h, th) = (self.width, self.height, self.threshold);

        while let Some(i) = self.stack.pop() {
            let g = self.grains[i];
            let k = g / th;
            if k == 0 {
                continue;
            }
            self.grains[i] = g - k * th;
            event.topplings += k;
            if self.marks[i] != self.epoch {
                self.marks[i] = self.epoch;
                event.area += 1;
            }

            let (r, c) = (i / w, i % w);
            let mut delivered = 0;
            let mut give = |j: usize, grains: &mut [u64], stack: &mut Vec<usize>| {
                let before = grains[j];
                grains[j] = before + k;
                if before < th && before + k >= th {
                    stack.push(j);
                }
                delivered += k;
            };
            if r > 0 {
                give(i - w, &mut self.grains, &mut self.stack);
            }
            if r + 1 < h {
                give(i + w, &mut self.grains, &mut self.stack);
            }
            if c > 0 {
                give(i - 1, &mut self.grains, &mut self.stack);
            }
            if c + 1 < w {
                give(i + 1, &mut self.grains, &mut self.stack);
            }
            event.dissipated += k * th - delivered;
        }
        self.total_dissipated += event.dissipated;
        event
    }

    /// Picks the deposit site for `policy`.
    pub fn choose_site<R: Rng + ?Sized>(
        &self,
        policy: &DepositionPolicy,
        tie_break: TieBreak,
        rng: &mut R,
    ) -> Result<Site> {
        match *policy {
            DepositionPolicy::UniformRandom => {
                Ok(self.site_of(rng.gen_range(0..self.grains.len())))
            }
            DepositionPolicy::FixedSite { site } => {
                if self.contains(site) {
                    Ok(site)
                } else {
                    Err(Error::Config(format!(
                        "fixed site {site} outside {}x{} lattice",
                        self.width, self.height
                    )))
                }
            }
            DepositionPolicy::MaxIntent => {
                let target = *self.grains.iter().max().expect("lattice is non-empty");
                Ok(self.pick_with_value(target, tie_break, rng))
            }
            DepositionPolicy::MinIntent => {
                let target = *self.grains.iter().min().expect("lattice is non-empty");
                Ok(self.pick_with_value(target, tie_break, rng))
            }
        }
    }

    fn pick_with_value<R: Rng + ?Sized>(
        &self,
        target: u64,
        tie_break: TieBreak,
        rng: &mut R,
    ) -> Site {
        let mut ties = self
            .grains
            .iter()
            .enumerate()
            .filter(|&(_, &g)| g == target)
            .map(|(i, _)| i);
        let index = match tie_break {
            TieBreak::LowestIndex => ties.next(),
            TieBreak::SeededRandom => {
                let count = self.grains.iter().filter(|&&g| g == target).count();
                ties.nth(rng.gen_range(0..count))
            }
        };
        self.site_of(index.expect("extreme value occurs on the lattice"))
    }

    /// Removes grains from the most-loaded cells without triggering any
    /// toppling. Returns the number of grains removed.
    ///
    /// Targets `ceil(top_fraction * cells)` cells ordered by load, lowest
    /// row-major index first among equals; each loses at most
    /// `grains_removed_per_cell`.
    pub fn apply_intervention(&mut self, policy: &InterventionPolicy) -> u64 {
        let (top_fraction, per_cell) = match *policy {
            InterventionPolicy::None => return 0,
            InterventionPolicy::PeriodicRemoval {
                top_fraction,
                grains_removed_per_cell,
                ..
            } => (top_fraction, grains_removed_per_cell),
        };
        let n = self.grains.len();
        let take = ((top_fraction * n as f64).ceil() as usize).clamp(1, n);

        let mut order: Vec<usize> = (0..n).collect();
        let key = |&i: &usize| (Reverse(self.grains[i]), i);
        if take < n {
            order.select_nth_unstable_by_key(take - 1, key);
        }

        let mut removed = 0;
        for &i in &order[..take] {
            let cut = self.grains[i].min(per_cell);
            self.grains[i] -= cut;
            removed += cut;
        }
        self.total_removed += removed;
        removed
    }

    /// SHA-256 over the dimensions, threshold and grain array (little endian),
    /// hex encoded.
    pub fn checksum(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.width as u64).to_le_bytes());
        hasher.update((self.height as u64).to_le_bytes());
        hasher.update(self.threshold.to_le_bytes());
        for g in &self.grains {
            hasher.update(g.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}
