//! One noisy observation, estimated blind and with the true kernel, plus the
//! diagnostics the estimator reports.
//!
//! cargo run --release --example blind_estimate

use deconwave::estimator::{estimate, estimate_known_kernel, EstimatorConfig};
use deconwave::experiment::{generate_observation, sigma_from_snr};
use deconwave::grid;
use deconwave::signals::{make_kernel, make_test_function, KernelShape, TestSignal};

fn main() -> deconwave::Result<()> {
    let (rows, cols) = (128, 512);
    let f = make_test_function(TestSignal::HeaviSine, TestSignal::Quadratic, rows, cols)?;
    let g = make_kernel(rows, cols, KernelShape::OneSided)?;
    let fg = grid::dft_rows(&f).hadamard(&grid::dft_rows(&g))?;

    let sigma1 = sigma_from_snr(20.0, fg.energy())?;
    let sigma2 = sigma_from_snr(30.0, grid::l2_norm_sq(&g))?;
    let obs = generate_observation(&f, &g, sigma1, sigma2, 7)?;
    println!("sigma1 = {sigma1:.3e}, sigma2 = {sigma2:.3e}");

    let cfg = EstimatorConfig {
        sigma1,
        sigma2,
        ..Default::default()
    };
    let blind = estimate(&obs.y, &obs.g, &cfg)?;
    let d = &blind.diagnostics;
    println!(
        "blind: J = {}, J' = {}, kernel survivors {:.1}%, mise {:.4}",
        d.fine_t,
        d.fine_u,
        100.0 * d.kernel_survival_fraction,
        grid::mise_one(&blind.field, &f)?
    );
    for lvl in &d.levels {
        println!(
            "  t level {:?}: lambda {:.3e}, kept {}/{}",
            lvl.scale, lvl.lambda, lvl.survivors, lvl.coefficients
        );
    }

    // Without kernel noise only the data term sets the threshold, and at γ₁ = 1 it
    // sits too close to the noise level of the finest bands.
    for gamma1 in [1.0, 2.0] {
        let known = estimate_known_kernel(
            &obs.y,
            &grid::dft_rows(&g),
            &EstimatorConfig {
                gamma1,
                ..cfg.clone()
            },
        )?;
        println!(
            "known kernel, gamma1 = {gamma1}: J = {}, mise {:.4}",
            known.diagnostics.fine_t,
            grid::mise_one(&known.field, &f)?
        );
    }
    Ok(())
}
