//! Florida quintile class averages and the published fit results derived
//! from them.

use crate::fire::ClassAverageTable;

/// Mean yearly wildfire counts per class A–G for the five prescribed-burn
/// quintiles of the 1993–2019 Florida record.
pub const FLORIDA_QUINTILE_MEANS: [[f64; 7]; 5] = [
    [1145.17, 2572.67, 795.83, 109.50, 61.83, 23.17, 10.50],
    [680.00, 1621.60, 449.60, 46.80, 20.40, 7.20, 1.20],
    [986.60, 2381.20, 734.40, 97.20, 41.60, 13.80, 4.40],
    [764.80, 1964.40, 592.80, 73.80, 30.60, 10.20, 2.20],
    [534.00, 1392.50, 357.50, 36.83, 17.33, 5.33, 2.33],
];

/// Quintile sizes implied by the decimals of the means above.
pub const FLORIDA_QUINTILE_SIZES: [usize; 5] = [6, 5, 5, 5, 6];

pub const PUBLISHED_SLOPES: [f64; 5] = [-0.8060, -1.0139, -0.9152, -0.9687, -0.9448];
pub const PUBLISHED_SE: [f64; 5] = [0.0714, 0.1034, 0.0769, 0.0904, 0.0803];
pub const PUBLISHED_P: [f64; 5] = [0.00035, 0.00061, 0.00029, 0.00043, 0.00030];
pub const PUBLISHED_R2: [f64; 5] = [0.9696, 0.9601, 0.9726, 0.9663, 0.9719];

/// Pairwise one-sided p-values `(i, j, p)` for quintiles `i < j` (0-based).
pub const PUBLISHED_PAIR_P: [(usize, usize, f64); 10] = [
    (0, 1, 0.0683),
    (0, 2, 0.1641),
    (0, 3, 0.0978),
    (0, 4, 0.1163),
    (1, 2, 0.2329),
    (1, 3, 0.3754),
    (1, 4, 0.3061),
    (2, 3, 0.3321),
    (2, 4, 0.3984),
    (3, 4, 0.4241),
];

/// Slope-vs-burn fit over quintiles 1, 3, 4 and 5; needs per-quintile
/// median acreages that are not part of this fixture.
pub const PUBLISHED_BURN_SLOPE: f64 = -0.2206;
pub const PUBLISHED_BURN_P: f64 = 0.09;

pub fn florida_table() -> ClassAverageTable {
    ClassAverageTable {
        labels: (1..=5).map(|i| format!("Quintile {i}")).collect(),
        means: FLORIDA_QUINTILE_MEANS.to_vec(),
        sizes: FLORIDA_QUINTILE_SIZES.to_vec(),
    }
}
