//! Periodized Meyer wavelets handled entirely through their Fourier coefficients.
//!
//! For a level `j` the periodized wavelet `ψ_{j,k}(t) = Σ_n 2^{j/2} ψ(2^j(t+n) - k)`
//! has Fourier coefficients
//!
//! ```text
//! ψ_{j,k,m} = 2^{-j/2} e^{-2πimk/2^j} ψ̂(2πm/2^j)
//! ```
//!
//! so every level lives on a finite band of integer frequencies and the shifts
//! `k = 0..2^j` can be analysed with a single FFT of length `2^j` after folding the
//! band modulo `2^j`. The same machinery handles the scaling functions `φ_{j,k}`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Degree-3 Meyer auxiliary polynomial `x⁴(35 - 84x + 70x² - 20x³)`, clamped to `[0, 1]`.
pub fn nu3(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// Fourier transform of the Meyer mother wavelet.
///
/// Supported on `2π/3 < |ξ| < 8π/3`; the phase factor `e^{iξ/2}` centres the
/// wavelet at `t = 1/2` and makes it real-valued.
pub fn psi_hat(xi: f64) -> Complex64 {
    let a = xi.abs();
    let mag = if a <= 2.0 * PI / 3.0 || a >= 8.0 * PI / 3.0 {
        return Complex64::new(0.0, 0.0);
    } else if a <= 4.0 * PI / 3.0 {
        (PI / 2.0 * nu3(3.0 * a / (2.0 * PI) - 1.0)).sin()
    } else {
        (PI / 2.0 * nu3(3.0 * a / (4.0 * PI) - 1.0)).cos()
    };
    Complex64::from_polar(mag, xi / 2.0)
}

/// Fourier transform of the Meyer scaling function (real and even).
pub fn phi_hat(xi: f64) -> f64 {
    let a = xi.abs();
    if a <= 2.0 * PI / 3.0 {
        1.0
    } else if a < 4.0 * PI / 3.0 {
        (PI / 2.0 * nu3(3.0 * a / (2.0 * PI) - 1.0)).cos()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Scaling,
    Wavelet,
}

/// The integer frequencies on which a level is supported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeyerBand {
    pub level: u32,
    pub kind: BandKind,
    /// Sorted ascending, symmetric under negation.
    pub indices: Vec<i64>,
}

impl MeyerBand {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn shifts(&self) -> usize {
        1 << self.level
    }

    pub fn max_freq(&self) -> i64 {
        self.indices.last().copied().unwrap_or(0)
    }
}

fn fit_grid(level: u32, kind: BandKind, indices: Vec<i64>, n: usize) -> Result<MeyerBand> {
    let max_freq = indices.last().copied().unwrap_or(0);
    let nyquist = n as i64 / 2;
    if max_freq >= nyquist {
        return Err(Error::LevelTooFine {
            level,
            max_freq,
            nyquist,
        });
    }
    Ok(MeyerBand {
        level,
        kind,
        indices,
    })
}

/// Wavelet band `W_j = {m : 2^j < 3|m| < 2^{j+2}}`, `2^{j+1}` integers in total.
pub fn band_indices(level: u32, n: usize) -> Result<MeyerBand> {
    let lo = 1i64 << level;
    let hi = 1i64 << (level + 2);
    let side: Vec<i64> = (1..)
        .take_while(|m| 3 * m < hi)
        .filter(|m| 3 * m > lo)
        .collect();
    let mut indices: Vec<i64> = side.iter().rev().map(|m| -m).collect();
    indices.extend(side);
    fit_grid(level, BandKind::Wavelet, indices, n)
}

/// Scaling band at level `j`: `{m : 3|m| < 2^{j+1}}`.
pub fn scaling_band(level: u32, n: usize) -> Result<MeyerBand> {
    let hi = 1i64 << (level + 1);
    let r = (hi - 1) / 3;
    fit_grid(level, BandKind::Scaling, (-r..=r).collect(), n)
}

/// `ψ_{j,k,m}`, zero off the band.
pub fn psi_coeff(level: u32, shift: usize, freq: i64) -> Complex64 {
    let l = (1u64 << level) as f64;
    let base = psi_hat(2.0 * PI * freq as f64 / l);
    base * Complex64::from_polar(l.powf(-0.5), -2.0 * PI * (freq as f64) * (shift as f64) / l)
}

/// `φ_{j,k,m}` for the periodized scaling functions.
pub fn phi_coeff(level: u32, shift: usize, freq: i64) -> Complex64 {
    let l = (1u64 << level) as f64;
    let base = phi_hat(2.0 * PI * freq as f64 / l);
    Complex64::from_polar(
        base * l.powf(-0.5),
        -2.0 * PI * (freq as f64) * (shift as f64) / l,
    )
}

/// Precomputed `ψ̂(2πm/2^j)` (or `φ̂`) on one band together with the FFT plans
/// for fast analysis and synthesis across shifts.
#[derive(Clone)]
pub struct PsiTable {
    band: MeyerBand,
    hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PsiTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PsiTable")
            .field("band", &self.band)
            .finish()
    }
}

impl PsiTable {
    pub fn new(band: MeyerBand) -> Self {
        let l = band.shifts();
        let hat = band
            .indices
            .iter()
            .map(|&m| {
                let xi = 2.0 * PI * m as f64 / l as f64;
                match band.kind {
                    BandKind::Wavelet => psi_hat(xi),
                    BandKind::Scaling => Complex64::new(phi_hat(xi), 0.0),
                }
            })
            .collect();
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(l),
            inverse: planner.plan_fft_inverse(l),
            band,
            hat,
        }
    }

    pub fn wavelet(level: u32, n: usize) -> Result<Self> {
        Ok(Self::new(band_indices(level, n)?))
    }

    pub fn scaling(level: u32, n: usize) -> Result<Self> {
        Ok(Self::new(scaling_band(level, n)?))
    }

    pub fn band(&self) -> &MeyerBand {
        &self.band
    }

    pub fn level(&self) -> u32 {
        self.band.level
    }

    /// `ψ̂(2πm/2^j)` for every band index, aligned with `band().indices`.
    pub fn hat(&self) -> &[Complex64] {
        &self.hat
    }

    /// Basis coefficient for shift `k` at the `idx`-th band frequency.
    pub fn coeff(&self, shift: usize, idx: usize) -> Complex64 {
        let l = self.band.shifts() as f64;
        let m = self.band.indices[idx] as f64;
        self.hat[idx] * Complex64::from_polar(l.powf(-0.5), -2.0 * PI * m * shift as f64 / l)
    }

    /// `a_k = Σ_m c_m conj(ψ_{j,k,m})` for `k = 0..2^j`, with `c` aligned to the band.
    pub fn analyze(&self, c: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            c.len(),
            self.band.len(),
            "coefficient vector must cover the band"
        );
        let l = self.band.shifts();
        let mut bins = vec![Complex64::new(0.0, 0.0); l];
        for ((&m, &h), &cm) in self.band.indices.iter().zip(&self.hat).zip(c) {
            bins[m.rem_euclid(l as i64) as usize] += cm * h.conj();
        }
        self.inverse.process(&mut bins);
        let scale = (l as f64).powf(-0.5);
        bins.iter_mut().for_each(|b| *b *= scale);
        bins
    }

    /// `c_m = Σ_k a_k ψ_{j,k,m}`, the adjoint of [`PsiTable::analyze`].
    pub fn synthesize(&self, a: &[Complex64]) -> Vec<Complex64> {
        let l = self.band.shifts();
        assert_eq!(a.len(), l, "one coefficient per shift");
        let mut spectrum = a.to_vec();
        self.forward.process(&mut spectrum);
        let scale = (l as f64).powf(-0.5);
        self.band
            .indices
            .iter()
            .zip(&self.hat)
            .map(|(&m, &h)| h * spectrum[m.rem_euclid(l as i64) as usize] * scale)
            .collect()
    }
}

const UNBOUNDED: usize = 1 << 62;

/// Analysis across shifts at wavelet level `j` (band sized for the smallest grid
/// that holds it).
pub fn analyze_t(c: &[Complex64], level: u32) -> Vec<Complex64> {
    PsiTable::new(band_indices(level, UNBOUNDED).expect("unbounded grid")).analyze(c)
}

/// Synthesis across shifts at wavelet level `j`.
pub fn synthesize_t(a: &[Complex64], level: u32) -> Vec<Complex64> {
    PsiTable::new(band_indices(level, UNBOUNDED).expect("unbounded grid")).synthesize(a)
}
