//! Dynamic programming against the enumeration oracle, beyond the square boxes.

use num_bigint::BigUint;
use proptest::prelude::*;

use zonotope_core::exact::{
    brute_force_count, diameter_moments, occurrence_moments, zon_cumulative, zon_table, CoeffTable,
    DpOptions,
};
use zonotope_core::Error;

#[test]
fn occurrence_moments_match_every_class() {
    let opts = DpOptions::default();
    for bound in [vec![4u32, 6], vec![6, 3], vec![2, 3, 3], vec![1, 2, 3]] {
        let dim = bound.len();
        let brute = brute_force_count(dim, &bound).unwrap();
        assert!(!brute.occurrences.is_empty());
        for tally in &brute.occurrences {
            let dp = occurrence_moments(dim, &bound, &tally.class, &opts).unwrap();
            assert_eq!(
                Some(dp),
                brute.occurrence(&tally.class),
                "{bound:?} {:?}",
                tally.class
            );
        }
        assert_eq!(
            diameter_moments(dim, &bound, &opts).unwrap(),
            brute.diameter()
        );
    }
}

#[test]
fn cumulative_sums_the_box() {
    let opts = DpOptions::default();
    for (dim, n) in [(2usize, 4u32), (3, 2)] {
        let table = zon_table(dim, &vec![n; dim], &opts).unwrap();
        assert_eq!(zon_cumulative(dim, n, &opts).unwrap(), table.total());
        let total: BigUint = table.cells().iter().sum();
        assert_eq!(table.total(), total);
    }
}

#[test]
fn checkpoint_round_trip() {
    let table = zon_table(3, &[3, 2, 4], &DpOptions::default()).unwrap();
    let json = table.to_json();
    let back = CoeffTable::from_json(&json).unwrap();
    assert_eq!(back.bound(), table.bound());
    assert_eq!(back.cells(), table.cells());

    let mut tampered: serde_json::Value = serde_json::from_str(&json).unwrap();
    tampered["cells"].as_array_mut().unwrap().pop();
    let err = CoeffTable::from_json(&tampered.to_string()).unwrap_err();
    assert!(matches!(err, Error::Checkpoint(_)));
    let mut wrong = serde_json::from_str::<serde_json::Value>(&json).unwrap();
    wrong["version"] = 99.into();
    assert!(CoeffTable::from_json(&wrong.to_string()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_boxes_agree(a in 0u32..6, b in 0u32..6, c in 0u32..3) {
        let opts = DpOptions::default();
        let table = zon_table(3, &[a, b, c], &opts).unwrap();
        let brute = brute_force_count(3, &[a, b, c]).unwrap();
        prop_assert_eq!(table.get(&[a, b, c]).unwrap(), &brute.count);
    }
}
