use proptest::prelude::*;
use sandfire_core::fire::{
    assign_quantiles, average_counts, parse_dataset, quantile_sizes, FireClass, FireDataset,
    YearRecord,
};
use sandfire_core::Error;

fn records() -> impl Strategy<Value = Vec<YearRecord>> {
    prop::collection::vec(
        (
            prop::array::uniform7(0u64..5000),
            prop::option::of(0.0f64..1e6),
            0.0f64..2e6,
        ),
        5..30,
    )
    .prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (counts, burned, prescribed))| YearRecord {
                year: 1980 + i as i32,
                counts,
                total_burned_acres: burned,
                prescribed_acres: Some(prescribed),
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn csv_round_trip(recs in records()) {
        let ds = FireDataset::new("x", recs).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let back = parse_dataset("x", buf.as_slice()).unwrap();
        prop_assert_eq!(back.records(), ds.records());
    }

    #[test]
    fn grouping_ignores_row_order(recs in records(), rot in 0usize..30) {
        let ds = FireDataset::new("x", recs.clone()).unwrap();
        let mut shuffled = recs;
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let ds2 = FireDataset::new("x", shuffled).unwrap();
        let a = assign_quantiles(&ds, 5).unwrap();
        let b = assign_quantiles(&ds2, 5).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(average_counts(&ds, &a).unwrap(), average_counts(&ds2, &b).unwrap());
    }

    #[test]
    fn quantiles_are_ordered_and_sized(recs in records(), groups in 2usize..6) {
        let ds = FireDataset::new("x", recs).unwrap();
        prop_assume!(ds.len() >= groups);
        let g = assign_quantiles(&ds, groups).unwrap();
        prop_assert_eq!(g.sizes(), quantile_sizes(ds.len(), groups));
        let top = |c: usize| {
            g.years_in(c)
                .iter()
                .map(|&y| ds.get(y).unwrap().prescribed_acres.unwrap())
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let bottom = |c: usize| {
            g.years_in(c)
                .iter()
                .map(|&y| ds.get(y).unwrap().prescribed_acres.unwrap())
                .fold(f64::INFINITY, f64::min)
        };
        for c in 1..groups {
            prop_assert!(top(c - 1) <= bottom(c));
        }
    }

    #[test]
    fn averages_are_category_means(recs in records()) {
        let ds = FireDataset::new("x", recs).unwrap();
        let g = assign_quantiles(&ds, 2).unwrap();
        let t = average_counts(&ds, &g).unwrap();
        for c in 0..2 {
            for class in FireClass::ALL {
                let years = g.years_in(c);
                let sum: u64 = years.iter().map(|&y| ds.get(y).unwrap().count(class)).sum();
                let want = sum as f64 / years.len() as f64;
                prop_assert!((t.mean(c, class) - want).abs() <= 1e-12 * want.max(1.0));
            }
        }
    }
}

#[test]
fn missing_prescribed_names_years() {
    let recs = (0..6)
        .map(|i| YearRecord {
            year: 2000 + i,
            counts: [1; 7],
            total_burned_acres: None,
            prescribed_acres: (i % 2 == 0).then_some(10.0 * i as f64),
        })
        .collect();
    let ds = FireDataset::new("x", recs).unwrap();
    assert_eq!(
        assign_quantiles(&ds, 2),
        Err(Error::MissingPrescribed(vec![2001, 2003, 2005]))
    );
}
