use approx::assert_abs_diff_eq;
use qad_core::montecarlo::Moments;
use qad_core::rng::RngStream;
use qad_core::{
    qad, simulate_constants, simulate_location_efficiency, simulate_scale_efficiency, unbiased_sd,
    ReferenceDistribution, SimulationConfig, RHO_O, RHO_S,
};

const SEED: u64 = 20_240_601;

#[test]
fn unbiased_sd_is_unbiased() {
    let d = ReferenceDistribution::STANDARD_NORMAL;
    let mut rng = RngStream::new(SEED, 0);
    let m: Moments = (0..1_000_000)
        .map(|_| unbiased_sd(&d.sample(&mut rng, 10).unwrap()).unwrap())
        .collect();
    assert_abs_diff_eq!(m.mean(), 1.0, epsilon = 0.002);
}

#[test]
fn constants_match_published_rows() {
    let cfg = SimulationConfig::new(vec![2, 10, 100], 1_000_000, SEED, 4);
    let recs = simulate_constants(&cfg).unwrap();
    assert!(recs.iter().all(|r| r.reps_used == 1_000_000));
    assert_abs_diff_eq!(recs[0].k_sqad, 1.7724, epsilon = 0.005);
    assert_abs_diff_eq!(recs[1].k_oqad, 0.7535, epsilon = 0.003);
    assert_abs_diff_eq!(recs[2].k_sqad, 1.0077, epsilon = 0.002);
}

#[test]
fn constants_approach_asymptote() {
    // The QAD at n = 5000 has a relative spread near 1.4%, so 2·10⁴
    // repetitions put the standard error of K near 1e-4.
    let cfg = SimulationConfig::new(vec![5000], 20_000, SEED, 4);
    let r = &simulate_constants(&cfg).unwrap()[0];
    assert_abs_diff_eq!(r.k_sqad, 1.0, epsilon = 0.003);
    assert_abs_diff_eq!(r.k_oqad, 0.6747, epsilon = 0.003);
}

/// Standard error of `1 / mean(QAD)` from an independent run.
fn constant_standard_error(n: usize, p: f64, reps: u64) -> f64 {
    let d = ReferenceDistribution::STANDARD_NORMAL;
    let mut rng = RngStream::new(SEED ^ 0xabcdef, 0);
    let m: Moments = (0..20_000)
        .map(|_| qad(&d.sample(&mut rng, n).unwrap(), p, 1.0).unwrap().value)
        .collect();
    (m.variance() / reps as f64).sqrt() / (m.mean() * m.mean())
}

#[test]
fn worker_count_changes_bits_not_estimand() {
    let reps = 100_000;
    let one = simulate_constants(&SimulationConfig::new(vec![10], reps, SEED, 1)).unwrap();
    let four = simulate_constants(&SimulationConfig::new(vec![10], reps, SEED, 4)).unwrap();
    assert_ne!(one, four);
    // Two independent estimates: the difference has √2 times the single SE.
    let se_s = constant_standard_error(10, RHO_S, reps) * 2f64.sqrt();
    let se_o = constant_standard_error(10, RHO_O, reps) * 2f64.sqrt();
    assert!((one[0].k_sqad - four[0].k_sqad).abs() < 3.0 * se_s);
    assert!((one[0].k_oqad - four[0].k_oqad).abs() < 3.0 * se_o);
}

#[test]
fn identical_config_is_bit_identical() {
    let cfg = SimulationConfig::new(vec![3, 17], 20_000, 99, 3);
    assert_eq!(
        simulate_constants(&cfg).unwrap(),
        simulate_constants(&cfg).unwrap()
    );
    assert_eq!(
        simulate_scale_efficiency(&cfg).unwrap(),
        simulate_scale_efficiency(&cfg).unwrap()
    );
    assert_eq!(
        simulate_location_efficiency(&cfg).unwrap(),
        simulate_location_efficiency(&cfg).unwrap()
    );
}

#[test]
fn efficiency_records_are_labelled() {
    let cfg = SimulationConfig::new(vec![10], 10_000, SEED, 2);
    let scale = &simulate_scale_efficiency(&cfg).unwrap()[0];
    assert_eq!(scale.baseline_label, "sd");
    let labels: Vec<&str> = scale.values.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, ["mad", "sqad", "oqad"]);
    assert!(scale.values.iter().all(|&(_, v)| v > 0.0 && v <= 1.05));
    let loc = &simulate_location_efficiency(&cfg).unwrap()[0];
    assert_eq!(loc.baseline_label, "mean");
    assert!(loc.get("sthdme").is_some());
    assert!(loc.values.iter().all(|&(_, v)| v > 0.0 && v <= 1.05));
}
