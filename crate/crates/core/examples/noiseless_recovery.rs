//! With no noise the estimator returns the exact wavelet coefficients of f on the
//! kept levels; what remains is the projection error of those levels.
//!
//! cargo run --example noiseless_recovery

use deconwave::estimator::{estimate, EstimatorConfig};
use deconwave::grid;
use deconwave::signals::{make_kernel, make_test_function, KernelShape, TestSignal};
use deconwave::system::{analyze_field, reconstruct};

fn main() -> deconwave::Result<()> {
    let (rows, cols) = (64, 256);
    let g = grid::dft_rows(&make_kernel(rows, cols, KernelShape::OneSided)?);
    let cfg = EstimatorConfig::default();
    println!(
        "{:>10}  J  J'  coeff error  mise vs f  mise vs projection",
        "f_t"
    );
    for f_t in [
        TestSignal::HeaviSine,
        TestSignal::Doppler,
        TestSignal::Bumps,
        TestSignal::Blip,
    ] {
        let f = make_test_function(f_t, TestSignal::Quadratic, rows, cols)?;
        let y = grid::dft_rows(&f).hadamard(&g)?;
        let est = estimate(&y, &g, &cfg)?;
        let truth = analyze_field(&f, *est.coeffs.levels())?;
        let projection = reconstruct(&truth)?;
        println!(
            "{:>10}  {}  {}   {:.1e}      {:.2e}   {:.1e}",
            f_t.name(),
            est.diagnostics.fine_t,
            est.diagnostics.fine_u,
            est.coeffs.max_abs_diff(&truth).unwrap_or(f64::NAN),
            grid::mise_one(&est.field, &f)?,
            grid::mise_one(&est.field, &projection)?
        );
    }
    Ok(())
}
