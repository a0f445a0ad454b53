//! Monte-Carlo simulation of the discrete observation model and MISE benchmarking.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{EstimatorConfig, Fit};
use crate::grid::{self, RowSpectrum, SampledField};
use crate::signals::{make_kernel, make_test_function, KernelShape, TestSignal};

/// `σ = √(energy · 10^{-snr/10})`. An infinite SNR gives a noiseless model.
pub fn sigma_from_snr(snr_db: f64, energy: f64) -> Result<f64> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(Error::Domain(format!(
            "signal energy must be positive, got {energy}"
        )));
    }
    if snr_db.is_nan() {
        return Err(Error::Domain("SNR is NaN".into()));
    }
    Ok((energy * 10f64.powf(-snr_db / 10.0)).sqrt())
}

/// Spectrum of `N` i.i.d. standard normal samples per row under the `1/N` DFT:
/// Hermitian, with real DC and Nyquist terms of variance `1/N` and complex terms
/// whose parts each have variance `1/(2N)`.
fn noise_spectrum(rows: usize, cols: usize, sigma: f64, rng: &mut ChaCha8Rng) -> RowSpectrum {
    let mut out = RowSpectrum::zeros(rows, cols).expect("validated grid");
    let half = cols / 2;
    let real_sd = sigma / (cols as f64).sqrt();
    let part_sd = sigma / (2.0 * cols as f64).sqrt();
    let mut draw = |sd: f64| -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        z * sd
    };
    let c = out.coeffs_mut();
    for l in 0..rows {
        c[[l, 0]] = Complex64::new(draw(real_sd), 0.0);
        c[[l, half]] = Complex64::new(draw(real_sd), 0.0);
        for m in 1..half {
            let z = Complex64::new(draw(part_sd), draw(part_sd));
            c[[l, m]] = z;
            c[[l, cols - m]] = z.conj();
        }
    }
    out
}

/// Noisy spectra `y = f g + σ₁ z⁽¹⁾` and `g^δ = g + σ₂ z⁽²⁾`.
#[derive(Debug, Clone)]
pub struct Observation {
    pub y: RowSpectrum,
    pub g: RowSpectrum,
}

/// Draws an observation from precomputed clean spectra.
pub fn observe_spectra(
    f_spec: &RowSpectrum,
    g_spec: &RowSpectrum,
    sigma1: f64,
    sigma2: f64,
    seed: u64,
) -> Result<Observation> {
    let mut y = f_spec.hadamard(g_spec)?;
    let mut g = g_spec.clone();
    let (rows, cols) = y.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z1 = noise_spectrum(rows, cols, sigma1, &mut rng);
    let z2 = noise_spectrum(rows, cols, sigma2, &mut rng);
    if sigma1 > 0.0 {
        *y.coeffs_mut() += z1.coeffs();
    }
    if sigma2 > 0.0 {
        *g.coeffs_mut() += z2.coeffs();
    }
    Ok(Observation { y, g })
}

pub fn generate_observation(
    f: &SampledField,
    g: &SampledField,
    sigma1: f64,
    sigma2: f64,
    seed: u64,
) -> Result<Observation> {
    grid::same_dims(f.dim(), g.dim())?;
    observe_spectra(&grid::dft_rows(f), &grid::dft_rows(g), sigma1, sigma2, seed)
}

/// How the finest `t` level is chosen in a benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JMode {
    /// Data-driven choice per repetition.
    #[default]
    Auto,
    /// The level minimizing mean MISE over `m₀ ..= log₂N - 1`.
    OracleSearch,
    Fixed(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub f_t: TestSignal,
    pub f_u: TestSignal,
    pub rows: usize,
    pub cols: usize,
    pub snr1_db: f64,
    pub snr2_db: f64,
    pub n_rep: usize,
    pub seed: u64,
    pub j_mode: JMode,
    pub kernel: KernelShape,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            f_t: TestSignal::HeaviSine,
            f_u: TestSignal::Quadratic,
            rows: 128,
            cols: 512,
            snr1_db: 20.0,
            snr2_db: 30.0,
            n_rep: 100,
            seed: 1,
            j_mode: JMode::OracleSearch,
            kernel: KernelShape::OneSided,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        grid::check_dim(self.rows)?;
        grid::check_dim(self.cols)?;
        if self.n_rep == 0 {
            return Err(Error::Config("n_rep must be at least 1".into()));
        }
        if self.snr1_db.is_nan() || self.snr2_db.is_nan() {
            return Err(Error::Config("SNR values must be numbers".into()));
        }
        if self.f_t == TestSignal::Quadratic {
            return Err(Error::Config("quadratic is a u-profile only".into()));
        }
        if self.f_u == TestSignal::HeaviSine || self.f_u == TestSignal::Doppler {
            return Err(Error::Config(format!("{} is a t-profile only", self.f_u)));
        }
        Ok(())
    }

    /// Largest level usable on this grid, `log₂N - 1`.
    pub fn max_level(&self) -> u32 {
        grid::log2(self.cols) - 1
    }
}

/// Clean inputs of a benchmark cell with noise scales calibrated from the SNRs.
#[derive(Debug, Clone)]
pub struct Cell {
    pub spec: ExperimentSpec,
    pub truth: SampledField,
    pub f_spec: RowSpectrum,
    pub g_spec: RowSpectrum,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl Cell {
    pub fn new(spec: &ExperimentSpec) -> Result<Self> {
        spec.validate()?;
        let truth = make_test_function(spec.f_t, spec.f_u, spec.rows, spec.cols)?;
        let kernel = make_kernel(spec.rows, spec.cols, spec.kernel)?;
        let f_spec = grid::dft_rows(&truth);
        let g_spec = grid::dft_rows(&kernel);
        let blurred = f_spec.hadamard(&g_spec)?.energy();
        let sigma1 = sigma_from_snr(spec.snr1_db, blurred)?;
        let sigma2 = sigma_from_snr(spec.snr2_db, grid::l2_norm_sq(&kernel))?;
        Ok(Self {
            spec: spec.clone(),
            truth,
            f_spec,
            g_spec,
            sigma1,
            sigma2,
        })
    }

    pub fn observe(&self, rep: usize) -> Result<Observation> {
        let seed = self.spec.seed.wrapping_add(rep as u64);
        observe_spectra(&self.f_spec, &self.g_spec, self.sigma1, self.sigma2, seed)
    }

    /// Estimator settings for this cell: `cfg` with the calibrated noise scales.
    pub fn estimator_config(&self, cfg: &EstimatorConfig) -> EstimatorConfig {
        EstimatorConfig {
            sigma1: self.sigma1,
            sigma2: self.sigma2,
            ..cfg.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepResult {
    pub mise: f64,
    pub fine_t: u32,
    pub fine_u: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MiseReport {
    pub spec: ExperimentSpec,
    pub estimator: EstimatorConfig,
    pub sigma1: f64,
    pub sigma2: f64,
    pub mean_mise: f64,
    pub sd_mise: f64,
    /// Fixed or oracle level, or the most frequent data-driven choice.
    pub chosen_j: u32,
    pub chosen_jprime: u32,
    pub per_rep: Vec<RepResult>,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn mode(values: impl Iterator<Item = u32>) -> u32 {
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_insert(0usize) += 1;
    }
    // ties resolve to the smallest level
    counts
        .into_iter()
        .fold(
            (0, 0),
            |best, (v, c)| if c > best.1 { (v, c) } else { best },
        )
        .0
}

fn report(
    cell: &Cell,
    cfg: EstimatorConfig,
    per_rep: Vec<RepResult>,
    chosen_j: Option<u32>,
) -> MiseReport {
    let mises: Vec<f64> = per_rep.iter().map(|r| r.mise).collect();
    let (mean_mise, sd_mise) = mean_sd(&mises);
    MiseReport {
        spec: cell.spec.clone(),
        estimator: cfg,
        sigma1: cell.sigma1,
        sigma2: cell.sigma2,
        mean_mise,
        sd_mise,
        chosen_j: chosen_j.unwrap_or_else(|| mode(per_rep.iter().map(|r| r.fine_t))),
        chosen_jprime: mode(per_rep.iter().map(|r| r.fine_u)),
        per_rep,
    }
}

fn run_fixed_or_auto(cell: &Cell, cfg: &EstimatorConfig, fixed: Option<u32>) -> Result<MiseReport> {
    let cfg = EstimatorConfig {
        j_override: fixed.or(cfg.j_override),
        ..cell.estimator_config(cfg)
    };
    let per_rep = (0..cell.spec.n_rep)
        .into_par_iter()
        .map(|rep| {
            let obs = cell.observe(rep)?;
            let fit = Fit::blind(&obs.y, &obs.g, &cfg)?;
            let coeffs = fit.thresholded(fit.fine_t())?;
            let est = crate::system::reconstruct(&coeffs)?;
            Ok(RepResult {
                mise: grid::mise_one(&est, &cell.truth)?,
                fine_t: fit.fine_t(),
                fine_u: coeffs.levels().fine_u,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report(cell, cfg, per_rep, fixed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelMise {
    pub j: u32,
    pub mean_mise: f64,
    pub sd_mise: f64,
}

/// Mean MISE for every candidate `J`, sharing the noise draws across levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JSearch {
    pub best_j: u32,
    pub curve: Vec<LevelMise>,
    pub best: MiseReport,
}

pub fn oracle_j_search(
    spec: &ExperimentSpec,
    cfg: &EstimatorConfig,
    j_set: &[u32],
) -> Result<JSearch> {
    if j_set.is_empty() {
        return Err(Error::Config("empty set of candidate levels".into()));
    }
    let cell = Cell::new(spec)?;
    let top = *j_set.iter().max().expect("nonempty");
    if let Some(&bad) = j_set
        .iter()
        .find(|&&j| j < cfg.coarse_t || j > spec.max_level())
    {
        return Err(Error::Config(format!(
            "candidate level {bad} outside {}..={}",
            cfg.coarse_t,
            spec.max_level()
        )));
    }
    let cfg = EstimatorConfig {
        j_override: Some(top),
        ..cell.estimator_config(cfg)
    };
    // per_level[rep][i] for j_set[i]
    let per_level = (0..spec.n_rep)
        .into_par_iter()
        .map(|rep| {
            let obs = cell.observe(rep)?;
            let fit = Fit::blind(&obs.y, &obs.g, &cfg)?;
            j_set
                .iter()
                .map(|&j| {
                    let coeffs = fit.thresholded(j)?;
                    let est = crate::system::reconstruct(&coeffs)?;
                    Ok(RepResult {
                        mise: grid::mise_one(&est, &cell.truth)?,
                        fine_t: j,
                        fine_u: coeffs.levels().fine_u,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut curve = Vec::with_capacity(j_set.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, &j) in j_set.iter().enumerate() {
        let mises: Vec<f64> = per_level.iter().map(|r| r[i].mise).collect();
        let (mean, sd) = mean_sd(&mises);
        curve.push(LevelMise {
            j,
            mean_mise: mean,
            sd_mise: sd,
        });
        if best.is_none_or(|(_, m)| mean < m) {
            best = Some((i, mean));
        }
    }
    let (bi, _) = best.expect("nonempty");
    let per_rep = per_level.iter().map(|r| r[bi].clone()).collect();
    let best_cfg = EstimatorConfig {
        j_override: Some(j_set[bi]),
        ..cfg
    };
    Ok(JSearch {
        best_j: j_set[bi],
        curve,
        best: report(&cell, best_cfg, per_rep, Some(j_set[bi])),
    })
}

/// Candidate levels `m₀ ..= log₂N - 1`.
pub fn default_j_set(spec: &ExperimentSpec, cfg: &EstimatorConfig) -> Vec<u32> {
    (cfg.coarse_t..=spec.max_level()).collect()
}

pub fn run_benchmark(spec: &ExperimentSpec, cfg: &EstimatorConfig) -> Result<MiseReport> {
    match spec.j_mode {
        JMode::Auto => run_fixed_or_auto(&Cell::new(spec)?, cfg, None),
        JMode::Fixed(j) => run_fixed_or_auto(&Cell::new(spec)?, cfg, Some(j)),
        JMode::OracleSearch => Ok(oracle_j_search(spec, cfg, &default_j_set(spec, cfg))?.best),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snr_conversion() {
        assert!((sigma_from_snr(0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((sigma_from_snr(10.0, 1.0).unwrap().powi(2) - 0.1).abs() < 1e-15);
        assert!((sigma_from_snr(30.0, 4.0).unwrap().powi(2) - 0.004).abs() < 1e-15);
        assert_eq!(sigma_from_snr(f64::INFINITY, 1.0).unwrap(), 0.0);
        assert!(sigma_from_snr(10.0, 0.0).is_err());
    }

    #[test]
    fn noiseless_observation_is_exact_product() {
        let f = make_test_function(TestSignal::Doppler, TestSignal::Blip, 8, 32).unwrap();
        let g = make_kernel(8, 32, KernelShape::Periodic).unwrap();
        let obs = generate_observation(&f, &g, 0.0, 0.0, 3).unwrap();
        let expect = grid::dft_rows(&f).hadamard(&grid::dft_rows(&g)).unwrap();
        assert_eq!(obs.y, expect);
        assert_eq!(obs.g, grid::dft_rows(&g));
    }

    #[test]
    fn noise_is_seeded_and_real() {
        let f = SampledField::zeros(8, 32).unwrap();
        let a = generate_observation(&f, &f, 1.0, 1.0, 5).unwrap();
        let b = generate_observation(&f, &f, 1.0, 1.0, 5).unwrap();
        let c = generate_observation(&f, &f, 1.0, 1.0, 6).unwrap();
        assert_eq!(a.y, b.y);
        assert_ne!(a.y, c.y);
        assert_ne!(a.y, a.g);
        for l in 0..8 {
            for m in 1..16 {
                assert_eq!(a.y.get(l, -m), a.y.get(l, m).conj());
            }
        }
    }

    #[test]
    fn mode_and_moments() {
        assert_eq!(mode([4, 5, 5, 4, 3].into_iter()), 4);
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
        assert_eq!(mean_sd(&[0.5]), (0.5, 0.0));
    }

    #[test]
    fn spec_validation() {
        assert!(ExperimentSpec::default().validate().is_ok());
        let zero = ExperimentSpec {
            n_rep: 0,
            ..Default::default()
        };
        assert!(zero.validate().is_err());
        let swapped = ExperimentSpec {
            f_t: TestSignal::Quadratic,
            ..Default::default()
        };
        assert!(swapped.validate().is_err());
    }
}
