//! Yearly wildfire records by federal size class, with prescribed-burn
//! acreage, and the groupings used to contrast burn intensity.

mod grouping;
mod records;

pub use grouping::{
    all_years, assign_periods, assign_quantiles, average_counts, quantile_sizes, CategoryGrouping,
    ClassAverageTable, GroupingMethod, Period,
};
pub use records::{parse_dataset, FireClass, FireDataset, YearRecord, DATASET_HEADER};
