//! Row DFT, the periodic D12 transform and the 2-D tensor system, each round-tripped.
//!
//! cargo run --example transforms

use deconwave::daubechies::{dwt_periodic, idwt_periodic};
use deconwave::grid::{self, SampledField};
use deconwave::system::{analyze_field, reconstruct, Levels};

fn main() -> deconwave::Result<()> {
    let (rows, cols) = (64, 256);
    let field = SampledField::from_fn(rows, cols, |t, u| {
        (6.0 * t).sin() * (1.0 + u * u) + (t - 0.5).abs()
    })?;

    let spec = grid::dft_rows(&field);
    let back = grid::idft_rows(&spec);
    let err = grid::mise_one(&back, &field)?;
    // Parseval with the 1/N convention: (1/M) Σ_l Σ_m |c_m|² equals the mean square
    println!(
        "dft: roundtrip mse {err:.2e}, energy {:.6} vs {:.6}",
        spec.energy(),
        grid::l2_norm_sq(&field)
    );

    let column: Vec<f64> = (0..rows).map(|l| field.values()[[l, 17]]).collect();
    let c = dwt_periodic(&column, 3)?;
    let energy_in: f64 = column.iter().map(|v| v * v).sum();
    let energy_out: f64 = c.to_flat().iter().map(|v| v * v).sum();
    let restored = idwt_periodic(&c);
    let max_err = column
        .iter()
        .zip(&restored)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!(
        "d12: {} detail levels, energy {energy_in:.6} vs {energy_out:.6}, max error {max_err:.2e}",
        c.details.len()
    );

    let levels = Levels {
        coarse_t: 3,
        coarse_u: 3,
        fine_t: 7,
        fine_u: 6,
        rows,
        cols,
    };
    let coeffs = analyze_field(&field, levels)?;
    let rebuilt = reconstruct(&coeffs)?;
    println!(
        "tensor: {} coefficients, energy {:.6}, roundtrip mse {:.2e}",
        coeffs.len(),
        coeffs.energy(),
        grid::mise_one(&rebuilt, &field)?
    );
    Ok(())
}
