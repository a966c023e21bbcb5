use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bit-exact header of the yearly fire-record CSV.
pub const DATASET_HEADER: &str =
    "year,class_a,class_b,class_c,class_d,class_e,class_f,class_g,total_burned_acres,prescribed_acres";

const COLUMNS: [&str; 10] = [
    "year",
    "class_a",
    "class_b",
    "class_c",
    "class_d",
    "class_e",
    "class_f",
    "class_g",
    "total_burned_acres",
    "prescribed_acres",
];

/// Federal wildfire size classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FireClass {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FireClass {
    pub const ALL: [FireClass; 7] = [
        FireClass::A,
        FireClass::B,
        FireClass::C,
        FireClass::D,
        FireClass::E,
        FireClass::F,
        FireClass::G,
    ];

    /// Classes that enter the log-log fits (everything but A).
    pub const FITTED: [FireClass; 6] = [
        FireClass::B,
        FireClass::C,
        FireClass::D,
        FireClass::E,
        FireClass::F,
        FireClass::G,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["A", "B", "C", "D", "E", "F", "G"][self.index()]
    }

    /// Acreage standing in for the class: the class maximum, with the
    /// open-ended class G pinned at 10,000 acres.
    pub fn representative_acres(self) -> f64 {
        match self {
            FireClass::A => 0.24,
            FireClass::B => 9.9,
            FireClass::C => 99.0,
            FireClass::D => 299.0,
            FireClass::E => 999.0,
            FireClass::F => 4999.0,
            FireClass::G => 10000.0,
        }
    }

    /// Class A is heavily underreported and never fitted.
    pub fn excluded_from_fits(self) -> bool {
        self == FireClass::A
    }
}

impl fmt::Display for FireClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One year of fire counts by class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearRecord {
    pub year: i32,
    /// Indexed by [`FireClass::index`].
    pub counts: [u64; 7],
    pub total_burned_acres: Option<f64>,
    pub prescribed_acres: Option<f64>,
}

impl YearRecord {
    pub fn count(&self, class: FireClass) -> u64 {
        self.counts[class.index()]
    }
}

/// Yearly records for one state or region, sorted by unique year.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FireDataset {
    pub state_label: String,
    records: Vec<YearRecord>,
}

impl FireDataset {
    /// Sorts by year; rejects duplicates and empty input.
    pub fn new(state_label: impl Into<String>, mut records: Vec<YearRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Schema("dataset has no records".into()));
        }
        records.sort_by_key(|r| r.year);
        if let Some(w) = records.windows(2).find(|w| w[0].year == w[1].year) {
            return Err(Error::Schema(format!("duplicate year {}", w[0].year)));
        }
        Ok(FireDataset {
            state_label: state_label.into(),
            records,
        })
    }

    pub fn records(&self) -> &[YearRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, year: i32) -> Option<&YearRecord> {
        self.records
            .binary_search_by_key(&year, |r| r.year)
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        self.records.iter().map(|r| r.year)
    }

    /// Writes the dataset in the CSV schema; absent acreages become empty cells.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{DATASET_HEADER}")?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            write!(out, "{}", r.year)?;
            for c in r.counts {
                write!(out, ",{c}")?;
            }
            writeln!(
                out,
                ",{},{}",
                opt(r.total_burned_acres),
                opt(r.prescribed_acres)
            )?;
        }
        out.flush()
    }
}

/// Parses the yearly CSV schema. Lines starting with `#` are ignored.
///
/// Errors name the file line and column of the first offending cell;
/// duplicate years are reported at the second occurrence.
pub fn parse_dataset<R: Read>(state_label: &str, input: R) -> Result<FireDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(input);
    let mut rows = reader.records();

    let header = match rows.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(Error::Schema(format!("unreadable header: {e}"))),
        None => return Err(Error::Schema("empty input, expected a header row".into())),
    };
    let found = header.iter().collect::<Vec<_>>().join(",");
    if found != DATASET_HEADER {
        return Err(Error::Schema(format!(
            "header must be `{DATASET_HEADER}`, found `{found}`"
        )));
    }

    let mut records: Vec<YearRecord> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for rec in rows {
        let rec = rec.map_err(|e| Error::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            column: "-".into(),
            message: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != COLUMNS.len() {
            return Err(Error::Parse {
                row,
                column: "-".into(),
                message: format!("expected {} fields, found {}", COLUMNS.len(), rec.len()),
            });
        }
        let err = |col: usize, message: String| Error::Parse {
            row,
            column: COLUMNS[col].into(),
            message,
        };

        let year_cell = rec[0].trim();
        let year: i32 = year_cell
            .parse()
            .map_err(|_| err(0, format!("malformed year `{year_cell}`")))?;
        if !seen.insert(year) {
            return Err(err(0, format!("duplicate year {year}")));
        }

        let mut counts = [0u64; 7];
        for (k, slot) in counts.iter_mut().enumerate() {
            let cell = rec[k + 1].trim();
            let v: i64 = cell
                .parse()
                .map_err(|_| err(k + 1, format!("malformed count `{cell}`")))?;
            if v < 0 {
                return Err(err(k + 1, format!("negative count {v}")));
            }
            *slot = v as u64;
        }

        let acres = |col: usize| -> Result<Option<f64>> {
            let cell = rec[col].trim();
            if cell.is_empty() {
                return Ok(None);
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| err(col, format!("malformed acreage `{cell}`")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(err(
                    col,
                    format!("acreage must be finite and non-negative, got {cell}"),
                ));
            }
            Ok(Some(v))
        };
        records.push(YearRecord {
            year,
            counts,
            total_burned_acres: acres(8)?,
            prescribed_acres: acres(9)?,
        });
    }
    FireDataset::new(state_label, records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv(rows: &[&str]) -> String {
        let mut s = String::from(DATASET_HEADER);
        s.push('\n');
        for r in rows {
            s.push_str(r);
            s.push('\n');
        }
        s
    }

    #[test]
    fn representative_acres() {
        let acres: Vec<f64> = FireClass::ALL
            .iter()
            .map(|c| c.representative_acres())
            .collect();
        assert_eq!(acres, vec![0.24, 9.9, 99.0, 299.0, 999.0, 4999.0, 10000.0]);
        assert!(FireClass::A.excluded_from_fits());
        assert!(FireClass::FITTED.iter().all(|c| !c.excluded_from_fits()));
    }

    #[test]
    fn single_row_without_prescribed() {
        let ds = parse_dataset(
            "FL",
            csv(&["1998,3711,8961,2805,427,238,86,36,499802,"]).as_bytes(),
        )
        .unwrap();
        assert_eq!(ds.len(), 1);
        let r = &ds.records()[0];
        assert_eq!(r.year, 1998);
        assert_eq!(r.counts, [3711, 8961, 2805, 427, 238, 86, 36]);
        assert_eq!(r.total_burned_acres, Some(499802.0));
        assert_eq!(r.prescribed_acres, None);
    }

    #[test]
    fn duplicate_year_is_rejected() {
        let text = csv(&["2001,1,1,1,1,1,1,1,,", "2001,2,2,2,2,2,2,2,,"]);
        match parse_dataset("x", text.as_bytes()) {
            Err(Error::Parse {
                row,
                column,
                message,
            }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "year");
                assert!(message.contains("duplicate year"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_cells_name_row_and_column() {
        let neg = csv(&["2001,1,1,1,1,1,1,1,,", "2002,1,1,-3,1,1,1,1,,"]);
        match parse_dataset("x", neg.as_bytes()) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!((row, column.as_str()), (3, "class_c"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let junk = csv(&["2001,1,1,1,1,1,1,1,12x,"]);
        match parse_dataset("x", junk.as_bytes()) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, "total_burned_acres"),
            other => panic!("unexpected {other:?}"),
        }
        let short = csv(&["2001,1,1,1"]);
        assert!(matches!(
            parse_dataset("x", short.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn header_must_match_exactly() {
        let text = "year,A,B,C,D,E,F,G,total,prescribed\n2001,1,1,1,1,1,1,1,,\n";
        assert!(matches!(
            parse_dataset("x", text.as_bytes()),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_dataset("x", "".as_bytes()),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_dataset("x", csv(&[]).as_bytes()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn rows_are_sorted_by_year() {
        let text = csv(&["2003,1,1,1,1,1,1,1,,5", "2001,2,2,2,2,2,2,2,,3.5"]);
        let ds = parse_dataset("x", text.as_bytes()).unwrap();
        assert_eq!(ds.years().collect::<Vec<_>>(), vec![2001, 2003]);
        assert_eq!(ds.get(2001).unwrap().prescribed_acres, Some(3.5));
        assert!(ds.get(2002).is_none());
    }

    #[test]
    fn write_then_parse_is_identity() {
        let text = csv(&[
            "1995,10,20,30,4,5,6,0,1234.5,0.1",
            "1996,0,0,0,0,0,0,0,,",
            "1997,7,8,9,1,2,3,4,99,1900000",
        ]);
        let ds = parse_dataset("x", text.as_bytes()).unwrap();
        let mut out = Vec::new();
        ds.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), text);
        assert_eq!(parse_dataset("x", out.as_slice()).unwrap(), ds);
    }
}
