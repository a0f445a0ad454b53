//! The periodized Meyer system: which frequencies each level uses, and the
//! partition of unity behind its orthonormality.
//!
//! cargo run --example meyer_basis

use std::f64::consts::PI;

use deconwave::meyer::{band_indices, phi_hat, psi_hat, scaling_band, PsiTable};
use num_complex::Complex64;

fn main() -> deconwave::Result<()> {
    let n = 512;
    let coarse = scaling_band(3, n)?;
    println!(
        "scaling level 3: |m| <= {} ({} frequencies)",
        coarse.max_freq(),
        coarse.len()
    );
    for level in 3..8 {
        let band = band_indices(level, n)?;
        let lo = band.indices.iter().filter(|m| **m > 0).min().unwrap();
        println!(
            "wavelet level {level}: {lo} <= |m| <= {} ({} frequencies)",
            band.max_freq(),
            band.len()
        );
    }
    match band_indices(8, n) {
        Ok(_) => println!("level 8 fits"),
        Err(e) => println!("level 8: {e}"),
    }

    // |φ̂(ξ)|² + Σ_j |ψ̂(2^{-j} ξ)|² = 1 for every ξ
    let worst = (1..2000)
        .map(|i| {
            let xi = i as f64 * 0.013;
            let sum: f64 = phi_hat(xi).powi(2)
                + (0..12)
                    .map(|j| psi_hat(xi / (1 << j) as f64).norm_sqr())
                    .sum::<f64>();
            (sum - 1.0).abs()
        })
        .fold(0.0, f64::max);
    println!(
        "partition of unity: max deviation {worst:.2e} (sampled up to xi = {:.1}π)",
        2000.0 * 0.013 / PI
    );

    // Synthesis is the adjoint of analysis, and both are isometries on the band
    let table = PsiTable::wavelet(5, n)?;
    let a: Vec<Complex64> = (0..32)
        .map(|k| Complex64::new((k as f64).cos(), 0.0))
        .collect();
    let c = table.synthesize(&a);
    let a2 = table.analyze(&c);
    let e_a: f64 = a.iter().map(|v| v.norm_sqr()).sum();
    let e_c: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    let err = a
        .iter()
        .zip(&a2)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    println!(
        "level 5: coefficient energy {e_a:.6}, band energy {e_c:.6}, roundtrip error {err:.2e}"
    );
    Ok(())
}
