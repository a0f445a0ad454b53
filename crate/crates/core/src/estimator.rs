//! Adaptive hard-thresholding estimator for blind functional deconvolution.
//!
//! Pipeline: truncate the noisy kernel spectrum, divide the data spectrum by the
//! surviving kernel coefficients, analyse the ratio on the Meyer × Daubechies
//! system, threshold every level with a data-driven `λ_j`, and synthesize.

use log::warn;
use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, RowSpectrum, SampledField};
use crate::meyer::{band_indices, scaling_band, MeyerBand};
use crate::system::{self, Levels, Scale, WaveletCoeffs2D};

/// How the kernel truncation is applied across profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationRule {
    /// Each `(l, m)` entry is kept or dropped on its own magnitude.
    #[default]
    Pointwise,
    /// A frequency survives only if it clears the threshold on every profile.
    UniformOverRows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EstimatorConfig {
    pub kappa: f64,
    pub rho: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    /// `m₀`
    pub coarse_t: u32,
    /// `m₀′`
    pub coarse_u: u32,
    pub j_override: Option<u32>,
    pub jp_override: Option<u32>,
    pub truncation: TruncationRule,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            kappa: 12.0,
            rho: 0.4,
            gamma1: 1.0,
            gamma2: 1.0,
            sigma1: 0.0,
            sigma2: 0.0,
            coarse_t: 3,
            coarse_u: 3,
            j_override: None,
            jp_override: None,
            truncation: TruncationRule::Pointwise,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.rho > 0.0 && self.rho < 0.5) {
            return bad(format!("rho must lie in (0, 1/2), got {}", self.rho));
        }
        if !(self.kappa > 0.0 && self.rho * self.kappa > 2.0) {
            return bad(format!(
                "rho * kappa must exceed 2, got {}",
                self.rho * self.kappa
            ));
        }
        if (self.rho * self.kappa).powi(2) < 20.0 {
            return bad(format!(
                "rho^2 * kappa^2 must be at least 20, got {}",
                (self.rho * self.kappa).powi(2)
            ));
        }
        if !(self.gamma1 > 0.0 && self.gamma2 > 0.0) {
            return bad("gamma1 and gamma2 must be positive".into());
        }
        if !(self.sigma1 >= 0.0
            && self.sigma2 >= 0.0
            && self.sigma1.is_finite()
            && self.sigma2.is_finite())
        {
            return bad("noise scales must be finite and non-negative".into());
        }
        if self.coarse_t < 1 || self.coarse_u < 1 {
            return bad(format!(
                "coarse levels need m0 >= 1 and m0' >= 1, got {} and {}",
                self.coarse_t, self.coarse_u
            ));
        }
        Ok(())
    }

    /// `max{σ₁², σ₂²} / MN`, the squared noise level of the continuous model.
    pub fn noise_level_sq(&self, rows: usize, cols: usize) -> f64 {
        self.sigma1.powi(2).max(self.sigma2.powi(2)) / (rows * cols) as f64
    }

    /// Kernel truncation level `κ σ₂ √(ln(MN)/MN)`.
    pub fn truncation_level(&self, rows: usize, cols: usize) -> f64 {
        let mn = (rows * cols) as f64;
        self.kappa * self.sigma2 * (mn.ln() / mn).sqrt()
    }
}

/// Truncated reciprocal of the noisy kernel spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct InvKernelSpectrum {
    pub inv: Array2<Complex64>,
    pub mask: Array2<bool>,
    pub tau: f64,
}

impl InvKernelSpectrum {
    pub fn survivors(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn truncated(&self) -> usize {
        self.mask.len() - self.survivors()
    }

    fn from_mask(g_spec: &RowSpectrum, mask: Array2<bool>, tau: f64) -> Self {
        let mut inv = Array2::zeros(g_spec.dim());
        Zip::from(&mut inv)
            .and(g_spec.coeffs())
            .and(&mask)
            .for_each(|r, &g, &keep| {
                if keep {
                    *r = g.inv();
                }
            });
        Self { inv, mask, tau }
    }
}

/// Keeps `1/g^δ_m(u_l)` where `|g^δ_m(u_l)|` exceeds `κσ₂√(ln(MN)/MN)` and zeroes
/// the rest. With `σ₂ = 0` only exact zeros are dropped.
pub fn truncate_kernel(g_spec: &RowSpectrum, cfg: &EstimatorConfig) -> InvKernelSpectrum {
    let (rows, cols) = g_spec.dim();
    let tau = cfg.truncation_level(rows, cols);
    let mut mask = g_spec.coeffs().mapv(|g| g.norm() > tau);
    if cfg.truncation == TruncationRule::UniformOverRows {
        for mut column in mask.columns_mut() {
            if column.iter().any(|&b| !b) {
                column.fill(false);
            }
        }
    }
    InvKernelSpectrum::from_mask(g_spec, mask, tau)
}

/// Band of a `t` scale on an `N`-point grid.
pub fn t_band(scale: Scale, coarse_t: u32, cols: usize) -> Result<MeyerBand> {
    match scale {
        Scale::Coarse => scaling_band(coarse_t, cols),
        Scale::Detail(j) => band_indices(j, cols),
    }
}

/// `S_j = (1/M) Σ_l Σ_{m ∈ band, surviving} |g^δ_m(u_l)|²`.
pub fn band_energy(invk: &InvKernelSpectrum, g_spec: &RowSpectrum, band: &MeyerBand) -> f64 {
    let rows = g_spec.rows();
    let mut acc = 0.0;
    for &freq in &band.indices {
        let col = g_spec.column_of(freq);
        for l in 0..rows {
            if invk.mask[[l, col]] {
                acc += g_spec.coeffs()[[l, col]].norm_sqr();
            }
        }
    }
    acc / rows as f64
}

/// `λ_j = 2^{j/2} S_j^{-1/2} max{γ₁√(σ₁² ln(MN)/MN), γ₂√(σ₂² ln²(MN)/MN)}`.
///
/// `sample_count` is `MN`. A dead level (`S_j = 0`) gets an infinite threshold.
pub fn threshold_lambda(
    level: u32,
    band_energy: f64,
    cfg: &EstimatorConfig,
    sample_count: f64,
) -> f64 {
    if band_energy <= 0.0 {
        return f64::INFINITY;
    }
    let ln = sample_count.ln();
    let data = cfg.gamma1 * (cfg.sigma1 * cfg.sigma1 * ln / sample_count).sqrt();
    let kernel = cfg.gamma2 * (cfg.sigma2 * cfg.sigma2 * ln * ln / sample_count).sqrt();
    2f64.powf(level as f64 / 2.0) * band_energy.powf(-0.5) * data.max(kernel)
}

/// Outcome of the data-driven choice of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JSelection {
    pub level: u32,
    /// False when no level satisfied the criterion and the estimate is coarse-only.
    pub admissible: bool,
}

fn level_admissible(band_energy: f64, level: u32, noise_sq: f64) -> bool {
    if noise_sq == 0.0 {
        return true;
    }
    band_energy > 0.0 && 1.0 / band_energy <= 2f64.powi(-2 * level as i32) / noise_sq
}

/// Largest `j` with `S_j^{-1} ≤ 2^{-2j} (max{σ₁², σ₂²}/MN)^{-1}`, capped at `log₂N - 1`.
///
/// Levels are assessed up to `log₂N - 2`, the finest band that fits the grid; when
/// that level passes, the cap `log₂N - 1` is returned.
pub fn select_j(
    g_spec: &RowSpectrum,
    invk: &InvKernelSpectrum,
    cfg: &EstimatorConfig,
) -> Result<JSelection> {
    let (rows, cols) = g_spec.dim();
    let cap = grid::log2(cols) - 1;
    let noise_sq = cfg.noise_level_sq(rows, cols);
    let mut best = None;
    for j in cfg.coarse_t..cap {
        let band = band_indices(j, cols)?;
        if level_admissible(band_energy(invk, g_spec, &band), j, noise_sq) {
            best = Some(j);
        }
    }
    Ok(match best {
        Some(j) if j + 1 == cap => JSelection {
            level: cap,
            admissible: true,
        },
        Some(j) => JSelection {
            level: j,
            admissible: true,
        },
        None => {
            warn!("no resolution level satisfies the J criterion; using a coarse-only estimate");
            JSelection {
                level: cfg.coarse_t,
                admissible: false,
            }
        }
    })
}

/// `min(⌊log₂ (max{σ₁², σ₂²}/MN)^{-1}⌋, log₂M - 1)`, never below `m₀′`.
pub fn select_jprime(cfg: &EstimatorConfig, rows: usize, cols: usize) -> u32 {
    let cap = grid::log2(rows) - 1;
    let noise_sq = cfg.noise_level_sq(rows, cols);
    let level = if noise_sq == 0.0 {
        cap
    } else {
        let raw = (-noise_sq.log2()).floor();
        if raw >= cap as f64 {
            cap
        } else {
            raw.max(0.0) as u32
        }
    };
    level.max(cfg.coarse_u)
}

fn check_fine_levels(rows: usize, cols: usize, j: u32, jp: u32) -> Result<()> {
    let (jmax, jpmax) = (grid::log2(cols) - 1, grid::log2(rows) - 1);
    if j > jmax || jp > jpmax {
        return Err(Error::Config(format!(
            "finest levels J = {j}, J' = {jp} exceed the grid bounds {jmax}, {jpmax}"
        )));
    }
    Ok(())
}

/// Truncated coefficient estimates
/// `β̂ = (1/M) Σ_l Σ_{m∈W_j} y_m(u_l)/ĝ^δ_m(u_l) · η_{j′,k′}(u_l) · conj(ψ_{j,k,m})`.
pub fn estimate_coeffs(
    y_spec: &RowSpectrum,
    invk: &InvKernelSpectrum,
    fine_t: u32,
    fine_u: u32,
    cfg: &EstimatorConfig,
) -> Result<WaveletCoeffs2D> {
    let (rows, cols) = y_spec.dim();
    grid::same_dims((rows, cols), invk.inv.dim())?;
    check_fine_levels(rows, cols, fine_t, fine_u)?;
    let ratio = RowSpectrum::new(y_spec.coeffs() * &invk.inv)?;
    let levels = Levels {
        coarse_t: cfg.coarse_t,
        coarse_u: cfg.coarse_u,
        fine_t,
        fine_u,
        rows,
        cols,
    };
    system::analyze_spectrum(&ratio, levels)
}

/// Zeroes every coefficient with `|β̂| ≤ λ` for its `t` block. The block of pure
/// scaling coefficients (coarse in both directions) is never thresholded.
///
/// `lambdas[b]` applies to block `b` of [`WaveletCoeffs2D::scales`].
pub fn hard_threshold(coeffs: &WaveletCoeffs2D, lambdas: &[f64]) -> Result<WaveletCoeffs2D> {
    let scales = coeffs.scales();
    if lambdas.len() < scales.len() {
        return Err(Error::Config(format!(
            "{} thresholds supplied for {} levels",
            lambdas.len(),
            scales.len()
        )));
    }
    let levels = *coeffs.levels();
    let coarse_u = 1usize << levels.coarse_u;
    let mut out = coeffs.clone();
    for (b, &lambda) in lambdas.iter().enumerate().take(scales.len()) {
        let block = out.block_mut(b);
        for ((_, p), v) in block.indexed_iter_mut() {
            if b == 0 && p < coarse_u {
                continue;
            }
            if v.norm() <= lambda {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(out)
}

/// Per-level record in the estimator diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub scale: Scale,
    pub level: u32,
    pub band_energy: f64,
    pub lambda: f64,
    pub coefficients: usize,
    pub survivors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub fine_t: u32,
    pub fine_u: u32,
    pub j_admissible: bool,
    pub kernel_tau: f64,
    pub kernel_survivors: usize,
    pub kernel_truncated: usize,
    pub kernel_survival_fraction: f64,
    pub levels: Vec<LevelReport>,
    pub imag_energy: f64,
}

impl Diagnostics {
    pub fn fully_truncated_kernel(&self) -> bool {
        self.kernel_survivors == 0
    }
}

/// Estimator state with everything computed up to the finest admissible `J`.
///
/// Coefficients and thresholds of a level do not depend on `J`, so coarser
/// estimates are obtained by dropping levels; this is what the oracle search over
/// `J` relies on.
#[derive(Debug, Clone)]
pub struct Fit {
    pub invk: InvKernelSpectrum,
    pub raw: WaveletCoeffs2D,
    pub lambdas: Vec<f64>,
    pub band_energies: Vec<f64>,
    pub selection: JSelection,
}

impl Fit {
    fn prepare(
        y_spec: &RowSpectrum,
        g_spec: &RowSpectrum,
        invk: InvKernelSpectrum,
        cfg: &EstimatorConfig,
        lambda_cfg: &EstimatorConfig,
        fine_t_max: Option<u32>,
    ) -> Result<Self> {
        cfg.validate()?;
        let (rows, cols) = y_spec.dim();
        grid::same_dims((rows, cols), g_spec.dim())?;
        let selection = match cfg.j_override {
            Some(level) => JSelection {
                level,
                admissible: true,
            },
            None => select_j(g_spec, &invk, cfg)?,
        };
        let fine_t = fine_t_max.unwrap_or(selection.level).max(selection.level);
        let fine_u = cfg
            .jp_override
            .unwrap_or_else(|| select_jprime(cfg, rows, cols));
        let raw = estimate_coeffs(y_spec, &invk, fine_t, fine_u, cfg)?;
        let mn = (rows * cols) as f64;
        let mut lambdas = Vec::new();
        let mut band_energies = Vec::new();
        for scale in raw.scales() {
            let band = t_band(scale, cfg.coarse_t, cols)?;
            let s = band_energy(&invk, g_spec, &band);
            lambdas.push(threshold_lambda(band.level, s, lambda_cfg, mn));
            band_energies.push(s);
        }
        Ok(Self {
            invk,
            raw,
            lambdas,
            band_energies,
            selection,
        })
    }

    /// Fits with the blind (noisy-kernel) procedure.
    pub fn blind(
        y_spec: &RowSpectrum,
        g_spec: &RowSpectrum,
        cfg: &EstimatorConfig,
    ) -> Result<Self> {
        let invk = truncate_kernel(g_spec, cfg);
        Self::prepare(y_spec, g_spec, invk, cfg, cfg, None)
    }

    /// Blind fit with coefficients available up to `fine_t_max` regardless of the
    /// selected `J`.
    pub fn blind_up_to(
        y_spec: &RowSpectrum,
        g_spec: &RowSpectrum,
        cfg: &EstimatorConfig,
        fine_t_max: u32,
    ) -> Result<Self> {
        let invk = truncate_kernel(g_spec, cfg);
        Self::prepare(y_spec, g_spec, invk, cfg, cfg, Some(fine_t_max))
    }

    /// Fits treating `g_spec` as the exact kernel: every nonzero coefficient is
    /// inverted and thresholds carry only the data-noise term.
    pub fn known_kernel(
        y_spec: &RowSpectrum,
        g_spec: &RowSpectrum,
        cfg: &EstimatorConfig,
    ) -> Result<Self> {
        let mask = g_spec.coeffs().mapv(|g| g.re != 0.0 || g.im != 0.0);
        let invk = InvKernelSpectrum::from_mask(g_spec, mask, 0.0);
        let data_only = EstimatorConfig {
            sigma2: 0.0,
            ..cfg.clone()
        };
        Self::prepare(y_spec, g_spec, invk, &data_only, &data_only, None)
    }

    pub fn fine_t(&self) -> u32 {
        self.selection.level
    }

    /// Thresholded coefficients with detail levels `j < fine_t`.
    pub fn thresholded(&self, fine_t: u32) -> Result<WaveletCoeffs2D> {
        hard_threshold(&self.raw.truncated(fine_t)?, &self.lambdas)
    }

    pub fn reconstruct_at(&self, fine_t: u32) -> Result<SampledField> {
        system::reconstruct(&self.thresholded(fine_t)?)
    }

    pub fn diagnostics(&self, kept: &WaveletCoeffs2D) -> Diagnostics {
        let levels = *kept.levels();
        let raw = self
            .raw
            .truncated(levels.fine_t)
            .expect("fit covers kept levels");
        let reports = kept
            .scales()
            .into_iter()
            .enumerate()
            .map(|(b, scale)| LevelReport {
                scale,
                level: levels.t_level(scale),
                band_energy: self.band_energies[b],
                lambda: self.lambdas[b],
                coefficients: raw.block(b).len(),
                survivors: kept.block(b).iter().filter(|v| v.norm() > 0.0).count(),
            })
            .collect();
        let survivors = self.invk.survivors();
        Diagnostics {
            fine_t: levels.fine_t,
            fine_u: levels.fine_u,
            j_admissible: self.selection.admissible,
            kernel_tau: self.invk.tau,
            kernel_survivors: survivors,
            kernel_truncated: self.invk.truncated(),
            kernel_survival_fraction: survivors as f64 / self.invk.mask.len() as f64,
            levels: reports,
            imag_energy: raw.imag_energy(),
        }
    }
}

/// Result of one estimation.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub field: SampledField,
    pub coeffs: WaveletCoeffs2D,
    pub diagnostics: Diagnostics,
}

fn finish(fit: Fit) -> Result<Estimate> {
    let coeffs = fit.thresholded(fit.fine_t())?;
    let field = system::reconstruct(&coeffs)?;
    let diagnostics = fit.diagnostics(&coeffs);
    if diagnostics.fully_truncated_kernel() {
        warn!("kernel spectrum fully truncated; the estimate is identically zero");
    }
    Ok(Estimate {
        field,
        coeffs,
        diagnostics,
    })
}

/// End-to-end blind estimate from the observed data and kernel spectra.
pub fn estimate(
    y_spec: &RowSpectrum,
    g_spec: &RowSpectrum,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    finish(Fit::blind(y_spec, g_spec, cfg)?)
}

/// Deconvolution with a kernel known exactly.
pub fn estimate_known_kernel(
    y_spec: &RowSpectrum,
    g_spec: &RowSpectrum,
    cfg: &EstimatorConfig,
) -> Result<Estimate> {
    finish(Fit::known_kernel(y_spec, g_spec, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_spectrum(rows: usize, cols: usize, value: Complex64) -> RowSpectrum {
        RowSpectrum::new(Array2::from_elem((rows, cols), value)).unwrap()
    }

    #[test]
    fn config_constraints() {
        assert!(EstimatorConfig::default().validate().is_ok());
        let c = |rho, kappa| EstimatorConfig {
            rho,
            kappa,
            ..Default::default()
        };
        assert!(c(0.5, 12.0).validate().is_err());
        assert!(c(0.4, 5.0).validate().is_err()); // ρκ = 2
        assert!(c(0.4, 10.0).validate().is_err()); // ρ²κ² = 16 < 20
        assert!(c(0.4, 11.2).validate().is_ok());
    }

    #[test]
    fn truncation_branches() {
        let cfg = EstimatorConfig::default();
        let mut g = constant_spectrum(8, 8, Complex64::new(2.0, 0.0));
        g.set(1, 3, Complex64::new(0.0, 0.0));
        let invk = truncate_kernel(&g, &cfg);
        assert_eq!(invk.tau, 0.0);
        assert_eq!(invk.inv[[0, 0]], Complex64::new(0.5, 0.0));
        assert!(invk.mask[[0, 0]]);
        assert_eq!(invk.inv[[1, 3]], Complex64::new(0.0, 0.0));
        assert!(!invk.mask[[1, 3]]);
        assert_eq!(invk.truncated(), 1);
    }

    #[test]
    fn truncation_boundary_is_excluded() {
        let (rows, cols) = (8, 16);
        let mn = (rows * cols) as f64;
        let cfg = EstimatorConfig {
            kappa: 4.0 / 0.4 * 1.2,
            sigma2: 0.1 / (12.0 * (mn.ln() / mn).sqrt()),
            ..Default::default()
        };
        let tau = cfg.truncation_level(rows, cols);
        assert!((tau - 0.1).abs() < 1e-12);
        let mut g = constant_spectrum(rows, cols, Complex64::new(tau, 0.0));
        g.set(2, 1, Complex64::new(0.100001, 0.0));
        let invk = truncate_kernel(&g, &cfg);
        assert_eq!(invk.survivors(), 1);
        assert!((invk.inv[[2, 1]].re - 1.0 / 0.100001).abs() < 1e-9);
        assert!(invk.inv.iter().all(|v| v.norm() <= 1.0 / invk.tau + 1e-12));
    }

    #[test]
    fn uniform_rule_drops_whole_columns() {
        let cfg = EstimatorConfig {
            truncation: TruncationRule::UniformOverRows,
            ..Default::default()
        };
        let mut g = constant_spectrum(8, 8, Complex64::new(1.0, 0.0));
        g.set(4, 2, Complex64::new(0.0, 0.0));
        let invk = truncate_kernel(&g, &cfg);
        assert_eq!(invk.truncated(), 8);
        assert!((0..8).all(|l| !invk.mask[[l, 2]]));
    }

    #[test]
    fn band_energy_cases() {
        let g = constant_spectrum(8, 64, Complex64::new(0.3, 0.4));
        let invk = truncate_kernel(&g, &EstimatorConfig::default());
        let band = band_indices(3, 64).unwrap();
        assert!((band_energy(&invk, &g, &band) - 16.0 * 0.25).abs() < 1e-12);
        let zero = constant_spectrum(8, 64, Complex64::new(0.0, 0.0));
        let dead = truncate_kernel(&zero, &EstimatorConfig::default());
        assert_eq!(band_energy(&dead, &zero, &band), 0.0);
    }

    #[test]
    fn lambda_formula() {
        let cfg = EstimatorConfig {
            sigma1: 1.0,
            ..Default::default()
        };
        let e = std::f64::consts::E;
        assert!((threshold_lambda(0, 1.0, &cfg, e) - (1.0 / e).sqrt()).abs() < 1e-15);
        let doubled = EstimatorConfig {
            gamma1: 2.0,
            gamma2: 2.0,
            ..cfg.clone()
        };
        assert!(
            (threshold_lambda(3, 0.7, &doubled, 1e4) - 2.0 * threshold_lambda(3, 0.7, &cfg, 1e4))
                .abs()
                < 1e-15
        );
        assert_eq!(threshold_lambda(3, 0.0, &cfg, 1e4), f64::INFINITY);
        // σ₂ ln(MN) > σ₁ selects the kernel branch
        let kernel = EstimatorConfig {
            sigma1: 1.0,
            sigma2: 0.5,
            ..Default::default()
        };
        let mn: f64 = 1e4;
        let expect = (0.25 * mn.ln().powi(2) / mn).sqrt();
        assert!((threshold_lambda(0, 1.0, &kernel, mn) - expect).abs() < 1e-15);
    }

    #[test]
    fn jprime_selection() {
        let quiet = EstimatorConfig::default();
        assert_eq!(select_jprime(&quiet, 128, 512), 6);
        // σ₁²/MN = 2^-10 on a 256×1024 grid: raw level 10, cap 7
        let mn = 256.0 * 1024.0;
        let cfg = EstimatorConfig {
            sigma1: (mn / 1024.0f64).sqrt(),
            ..Default::default()
        };
        assert_eq!(select_jprime(&cfg, 256, 1024), 7);
        let loud = EstimatorConfig {
            sigma1: (mn / 32.0f64).sqrt(),
            ..Default::default()
        };
        assert_eq!(select_jprime(&loud, 256, 1024), 5);
    }

    #[test]
    fn j_selection_noiseless_hits_cap() {
        let g = constant_spectrum(8, 256, Complex64::new(0.1, 0.0));
        let cfg = EstimatorConfig::default();
        let invk = truncate_kernel(&g, &cfg);
        assert_eq!(
            select_j(&g, &invk, &cfg).unwrap(),
            JSelection {
                level: 7,
                admissible: true
            }
        );
    }

    #[test]
    fn j_selection_equal_noise_uses_common_value() {
        let g = constant_spectrum(8, 1024, Complex64::new(0.01, 0.0));
        let a = EstimatorConfig {
            sigma1: 2.0,
            sigma2: 2.0,
            kappa: 12.0,
            ..Default::default()
        };
        let b = EstimatorConfig {
            sigma2: 0.0,
            ..a.clone()
        };
        let ia = truncate_kernel(&g, &a);
        let ib = truncate_kernel(&g, &b);
        assert_eq!(
            select_j(&g, &ia, &a).unwrap(),
            select_j(&g, &ib, &b).unwrap()
        );
    }

    #[test]
    fn dead_kernel_is_coarse_only() {
        let g = constant_spectrum(8, 64, Complex64::new(0.0, 0.0));
        let cfg = EstimatorConfig {
            sigma1: 1.0,
            ..Default::default()
        };
        let invk = truncate_kernel(&g, &cfg);
        let sel = select_j(&g, &invk, &cfg).unwrap();
        assert_eq!(
            sel,
            JSelection {
                level: 3,
                admissible: false
            }
        );
    }

    #[test]
    fn thresholding_rules() {
        let levels = Levels {
            coarse_t: 3,
            coarse_u: 2,
            fine_t: 4,
            fine_u: 3,
            rows: 8,
            cols: 32,
        };
        let mut c = WaveletCoeffs2D::zeros(levels).unwrap();
        c.set(
            Scale::Detail(3),
            0,
            Scale::Detail(2),
            0,
            Complex64::new(0.5, 0.0),
        )
        .unwrap();
        c.set(
            Scale::Detail(3),
            1,
            Scale::Detail(2),
            1,
            Complex64::new(1.5, 0.0),
        )
        .unwrap();
        c.set(Scale::Coarse, 2, Scale::Coarse, 1, Complex64::new(0.1, 0.0))
            .unwrap();
        c.set(
            Scale::Coarse,
            2,
            Scale::Detail(2),
            1,
            Complex64::new(0.1, 0.0),
        )
        .unwrap();

        assert_eq!(hard_threshold(&c, &[0.0, 0.0]).unwrap(), c);
        let t = hard_threshold(&c, &[1.0, 1.0]).unwrap();
        assert_eq!(
            t.get(Scale::Detail(3), 0, Scale::Detail(2), 0),
            Some(Complex64::new(0.0, 0.0))
        );
        assert_eq!(
            t.get(Scale::Detail(3), 1, Scale::Detail(2), 1),
            Some(Complex64::new(1.5, 0.0))
        );
        assert_eq!(hard_threshold(&t, &[1.0, 1.0]).unwrap(), t);

        let inf = hard_threshold(&c, &[f64::INFINITY; 2]).unwrap();
        assert!((inf.energy() - 0.01).abs() < 1e-15);
        assert_eq!(
            inf.get(Scale::Coarse, 2, Scale::Coarse, 1),
            Some(Complex64::new(0.1, 0.0))
        );
        assert!(hard_threshold(&c, &[1.0]).is_err());
    }
}
