use deconwave::estimator::{
    self, estimate_coeffs, hard_threshold, select_j, truncate_kernel, EstimatorConfig,
};
use deconwave::experiment::{self, ExperimentSpec, JMode};
use deconwave::grid::{self, RowSpectrum, SampledField};
use deconwave::signals::{make_kernel, make_test_function, KernelShape, TestSignal};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(rows: usize, cols: usize, seed: u64) -> SampledField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SampledField::new(Array2::from_shape_fn((rows, cols), |_| {
        rng.random_range(-1.0..1.0)
    }))
    .unwrap()
}

fn kernel_spec(rows: usize, cols: usize) -> RowSpectrum {
    grid::dft_rows(&make_kernel(rows, cols, KernelShape::OneSided).unwrap())
}

fn noisy_config(sigma1: f64, sigma2: f64) -> EstimatorConfig {
    EstimatorConfig {
        sigma1,
        sigma2,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coefficient_estimates_are_linear_in_the_data(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (rows, cols) = (16, 64);
        let cfg = noisy_config(0.01, 0.001);
        let invk = truncate_kernel(&kernel_spec(rows, cols), &cfg);
        let y1 = grid::dft_rows(&random_field(rows, cols, seed));
        let y2 = grid::dft_rows(&random_field(rows, cols, seed ^ 0x5a5a));
        let mix = RowSpectrum::new(y1.coeffs() * a + y2.coeffs() * b).unwrap();
        let c1 = estimate_coeffs(&y1, &invk, 5, 3, &cfg).unwrap();
        let c2 = estimate_coeffs(&y2, &invk, 5, 3, &cfg).unwrap();
        let cm = estimate_coeffs(&mix, &invk, 5, 3, &cfg).unwrap();
        let scale = c1.energy().sqrt().max(c2.energy().sqrt()).max(1.0) * (a.abs() + b.abs() + 1.0);
        for (bm, (b1, b2)) in cm.blocks().iter().zip(c1.blocks().iter().zip(c2.blocks())) {
            let expect = b1 * Complex64::from(a) + b2 * Complex64::from(b);
            for (x, y) in bm.iter().zip(expect.iter()) {
                prop_assert!((x - y).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn thresholding_is_idempotent_and_monotone(seed in any::<u64>(), lo in 0.0f64..0.5, extra in 0.0f64..0.5) {
        let (rows, cols) = (16, 64);
        let cfg = noisy_config(0.0, 0.0);
        let invk = truncate_kernel(&kernel_spec(rows, cols), &cfg);
        let y = grid::dft_rows(&random_field(rows, cols, seed));
        let raw = estimate_coeffs(&y, &invk, 5, 3, &cfg).unwrap();
        let n = raw.scales().len();
        let small = hard_threshold(&raw, &vec![lo; n]).unwrap();
        let large = hard_threshold(&raw, &vec![lo + extra; n]).unwrap();
        prop_assert_eq!(hard_threshold(&small, &vec![lo; n]).unwrap(), small.clone());
        for (s, l) in small.blocks().iter().zip(large.blocks()) {
            for (a, b) in s.iter().zip(l.iter()) {
                // the larger threshold keeps a subset, unchanged
                prop_assert!(*b == Complex64::new(0.0, 0.0) || a == b);
            }
        }
        prop_assert!(large.energy() <= small.energy() + 1e-12);
    }

    #[test]
    fn chosen_level_does_not_grow_with_noise(s_lo in 1e-5f64..1e-2, factor in 1.0f64..100.0) {
        let (rows, cols) = (32, 256);
        let g = kernel_spec(rows, cols);
        let pick = |s: f64| {
            let cfg = noisy_config(s, s * 0.1);
            select_j(&g, &truncate_kernel(&g, &cfg), &cfg).unwrap().level
        };
        prop_assert!(pick(s_lo * factor) <= pick(s_lo));
    }

    #[test]
    fn zero_inputs_give_a_finite_zero_estimate(seed in any::<u64>()) {
        let (rows, cols) = (16, 64);
        let cfg = noisy_config(0.01, 0.001);
        let zero = RowSpectrum::zeros(rows, cols).unwrap();
        let y = grid::dft_rows(&random_field(rows, cols, seed));
        let g = kernel_spec(rows, cols);

        let est = estimator::estimate(&zero, &g, &cfg).unwrap();
        prop_assert!(est.field.values().iter().all(|v| *v == 0.0));

        let est = estimator::estimate(&y, &zero, &cfg).unwrap();
        prop_assert!(est.field.values().iter().all(|v| *v == 0.0));
        prop_assert!(est.diagnostics.fully_truncated_kernel());
    }
}

#[test]
fn noise_matches_the_requested_variance() {
    let (rows, cols) = (256, 256);
    let zero = SampledField::zeros(rows, cols).unwrap();
    let ones = SampledField::from_fn(rows, cols, |_, _| 1.0).unwrap();
    for (seed, sigma1, sigma2) in [(1, 0.3, 0.05), (2, 1.0, 2.0)] {
        let obs = experiment::generate_observation(&zero, &ones, sigma1, sigma2, seed).unwrap();
        let y = grid::idft_rows(&obs.y);
        let g = grid::idft_rows(&obs.g);
        let n = (rows * cols) as f64;
        let var_y = y.values().iter().map(|v| v * v).sum::<f64>() / n;
        let var_g = g.values().iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() / n;
        assert!(
            (var_y / sigma1.powi(2) - 1.0).abs() < 0.05,
            "y variance {var_y}"
        );
        assert!(
            (var_g / sigma2.powi(2) - 1.0).abs() < 0.05,
            "g variance {var_g}"
        );
    }
}

fn small_spec() -> ExperimentSpec {
    ExperimentSpec {
        rows: 32,
        cols: 128,
        n_rep: 6,
        seed: 42,
        j_mode: JMode::Auto,
        ..Default::default()
    }
}

#[test]
fn benchmarks_reproduce_from_the_seed() {
    let cfg = EstimatorConfig::default();
    let a = experiment::run_benchmark(&small_spec(), &cfg).unwrap();
    let b = experiment::run_benchmark(&small_spec(), &cfg).unwrap();
    assert_eq!(a.per_rep, b.per_rep);
    assert_eq!(a.mean_mise.to_bits(), b.mean_mise.to_bits());
    let other = experiment::run_benchmark(
        &ExperimentSpec {
            seed: 43,
            ..small_spec()
        },
        &cfg,
    )
    .unwrap();
    assert_ne!(a.per_rep, other.per_rep);
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = EstimatorConfig::default();
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let a = one.install(|| experiment::run_benchmark(&small_spec(), &cfg).unwrap());
    let b = experiment::run_benchmark(&small_spec(), &cfg).unwrap();
    assert_eq!(a.per_rep, b.per_rep);
}

#[test]
fn noiseless_search_favours_the_finest_level() {
    let spec = ExperimentSpec {
        snr1_db: f64::INFINITY,
        snr2_db: f64::INFINITY,
        n_rep: 1,
        j_mode: JMode::OracleSearch,
        ..small_spec()
    };
    let cfg = EstimatorConfig::default();
    let j_set = experiment::default_j_set(&spec, &cfg);
    let search = experiment::oracle_j_search(&spec, &cfg, &j_set).unwrap();
    let finest = search.curve.last().unwrap();
    assert_eq!(finest.j, *j_set.last().unwrap());
    assert!(finest.mean_mise <= search.curve[0].mean_mise);
    assert!(finest.mean_mise <= search.best.mean_mise + 1e-12);
}

#[test]
fn unit_norm_test_functions() {
    for f_t in [
        TestSignal::HeaviSine,
        TestSignal::Doppler,
        TestSignal::Bumps,
        TestSignal::Blip,
    ] {
        let f = make_test_function(f_t, TestSignal::Quadratic, 32, 128).unwrap();
        assert!((grid::l2_norm_sq(&f) - 1.0).abs() < 1e-12, "{f_t}");
    }
}
