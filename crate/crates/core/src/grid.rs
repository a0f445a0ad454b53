//! Sampled fields on the unit square and their per-row Fourier spectra.
//!
//! A field stores `values[l, i] = h(t_i, u_l)` with `u_l = l/M` down the rows and
//! `t_i = i/N` along the columns. The row transform carries the `1/N` factor so
//! that `coeffs[l, m]` approximates the functional Fourier coefficient
//! `h_m(u_l) = ∫ h(t, u_l) e^{-2πimt} dt`.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d >= 8 && d.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::Dimension(d))
    }
}

pub(crate) fn log2(d: usize) -> u32 {
    d.trailing_zeros()
}

/// Real M×N grid of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    values: Array2<f64>,
}

impl SampledField {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let (m, n) = values.dim();
        check_dim(m)?;
        check_dim(n)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("field contains non-finite values".into()));
        }
        Ok(Self { values })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(Array2::zeros((rows, cols)))
    }

    /// Evaluates `f(t, u)` at every grid point.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = Array2::from_shape_fn((rows, cols), |(l, i)| {
            f(i as f64 / cols as f64, l as f64 / rows as f64)
        });
        Self::new(values)
    }

    /// Number of profiles `M`.
    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples per profile `N`.
    pub fn cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn scaled(&self, factor: f64) -> SampledField {
        SampledField {
            values: &self.values * factor,
        }
    }
}

/// Per-row Fourier coefficients. Columns are stored in FFT order, so the
/// signed frequency `m ∈ {-N/2, …, N/2-1}` lives at column `m mod N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpectrum {
    coeffs: Array2<Complex64>,
}

impl RowSpectrum {
    pub fn new(coeffs: Array2<Complex64>) -> Result<Self> {
        let (m, n) = coeffs.dim();
        check_dim(m)?;
        check_dim(n)?;
        Ok(Self { coeffs })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(Array2::zeros((rows, cols)))
    }

    pub fn rows(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.coeffs.dim()
    }

    pub fn column_of(&self, freq: i64) -> usize {
        freq.rem_euclid(self.cols() as i64) as usize
    }

    pub fn freq_of(&self, column: usize) -> i64 {
        let n = self.cols();
        if column < n / 2 {
            column as i64
        } else {
            column as i64 - n as i64
        }
    }

    pub fn get(&self, row: usize, freq: i64) -> Complex64 {
        self.coeffs[[row, self.column_of(freq)]]
    }

    pub fn set(&mut self, row: usize, freq: i64, value: Complex64) {
        let c = self.column_of(freq);
        self.coeffs[[row, c]] = value;
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    /// Entrywise product, the spectrum of the per-row circular convolution.
    pub fn hadamard(&self, other: &RowSpectrum) -> Result<RowSpectrum> {
        same_dims(self.dim(), other.dim())?;
        Ok(RowSpectrum {
            coeffs: &self.coeffs * &other.coeffs,
        })
    }

    /// `(1/M) Σ_l Σ_m |coeffs[l, m]|²`, the L² norm of the synthesized field.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.rows() as f64
    }
}

pub(crate) fn same_dims(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Mismatch { left: a, right: b })
    }
}

/// Forward per-row DFT with the `1/N` normalization.
pub fn dft_rows(field: &SampledField) -> RowSpectrum {
    let (m, n) = field.dim();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut coeffs = field.values.mapv(|v| Complex64::new(v, 0.0));
    let scale = 1.0 / n as f64;
    for mut row in coeffs.rows_mut() {
        let buf = row.as_slice_mut().expect("standard layout");
        fft.process(buf);
        buf.iter_mut().for_each(|c| *c *= scale);
    }
    debug_assert_eq!(coeffs.nrows(), m);
    RowSpectrum { coeffs }
}

/// Synthesis `values[l, i] = Re Σ_m coeffs[l, m] e^{2πimt_i}`.
pub fn idft_rows(spectrum: &RowSpectrum) -> SampledField {
    let n = spectrum.cols();
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(n);
    let mut work = spectrum.coeffs.clone();
    for mut row in work.rows_mut() {
        fft.process(row.as_slice_mut().expect("standard layout"));
    }
    SampledField {
        values: work.mapv(|c| c.re),
    }
}

/// Discrete `L²([0,1]²)` norm squared: `(1/MN) Σ values²`.
pub fn l2_norm_sq(field: &SampledField) -> f64 {
    let (m, n) = field.dim();
    field.values.iter().map(|v| v * v).sum::<f64>() / (m * n) as f64
}

/// One repetition's integrated squared error `‖estimate - truth‖²`.
pub fn mise_one(estimate: &SampledField, truth: &SampledField) -> Result<f64> {
    same_dims(estimate.dim(), truth.dim())?;
    let (m, n) = truth.dim();
    let mut acc = 0.0;
    Zip::from(&estimate.values)
        .and(&truth.values)
        .for_each(|a, b| acc += (a - b) * (a - b));
    Ok(acc / (m * n) as f64)
}
