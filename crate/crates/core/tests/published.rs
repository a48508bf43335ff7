use approx::assert_abs_diff_eq;
use qad_core::{consistency_constant, oqad, sqad, ConsistencyConstants, ConstantFamily, Sample};

fn published_constants() -> Vec<(usize, f64, f64)> {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/published_constants.csv"
    );
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn embedded_tables_match_typeset_rows() {
    let rows = published_constants();
    let small: Vec<_> = rows.iter().filter(|r| r.0 <= 100).collect();
    assert!(!small.is_empty());
    for &&(n, ks, ko) in &small {
        assert_eq!(
            consistency_constant(ConstantFamily::Sqad, n).unwrap(),
            ks,
            "n = {n}"
        );
        assert_eq!(
            consistency_constant(ConstantFamily::Oqad, n).unwrap(),
            ko,
            "n = {n}"
        );
    }
}

#[test]
fn extrapolation_tracks_large_rows() {
    for (n, ks, ko) in published_constants().into_iter().filter(|r| r.0 > 100) {
        assert_abs_diff_eq!(ConsistencyConstants::SQAD.predicted(n), ks, epsilon = 1e-3);
        assert_abs_diff_eq!(ConsistencyConstants::OQAD.predicted(n), ko, epsilon = 1e-3);
    }
    // Joins the table at n = 100.
    for c in [ConsistencyConstants::SQAD, ConsistencyConstants::OQAD] {
        assert_abs_diff_eq!(c.table[98], c.predicted(100), epsilon = 1e-3);
    }
    assert_abs_diff_eq!(
        ConsistencyConstants::OQAD.predicted(10_000),
        0.6748,
        epsilon = 5e-5
    );
}

#[test]
fn default_constants_in_estimates() {
    let x = Sample::new((1..=200).map(f64::from).collect()).unwrap();
    let s = sqad(&x, None).unwrap();
    assert_abs_diff_eq!(s.constant_applied, 1.003_834, epsilon = 1e-6);
    let two = Sample::new(vec![0.0, 1.0]).unwrap();
    assert_eq!(sqad(&two, None).unwrap().constant_applied, 1.7724);
    assert_eq!(oqad(&two, None).unwrap().constant_applied, 1.7729);
}
