//! The tensor system `ψ_{j,k}(t) η_{j′,k′}(u)` and its coefficient container.
//!
//! Along `t` the system consists of the periodized Meyer scaling functions at level
//! `m₀` followed by wavelet levels `m₀, …, J-1`; along `u` the Daubechies scaling
//! functions at level `m₀′` followed by wavelet levels `m₀′, …, J′-1`. Coefficients
//! are the continuous inner products `⟨⟨h, ψ_{j,k}⟩, η_{j′,k′}⟩`, so on the discrete
//! grid the system is orthonormal for the norm `(1/MN) Σ values²`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::daubechies::{DaubFilter, UWaveletCoeffs};
use crate::error::{Error, Result};
use crate::grid::{self, RowSpectrum, SampledField};
use crate::meyer::PsiTable;

/// Scale index along one axis: the coarse scaling space or a detail level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Scale {
    Coarse,
    Detail(u32),
}

/// Levels and grid of a tensor system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Levels {
    /// `m₀`: coarse level of the Meyer system along `t`.
    pub coarse_t: u32,
    /// `m₀′`: coarse level of the Daubechies system along `u`.
    pub coarse_u: u32,
    /// `J`: detail levels `m₀ ≤ j < J` are kept.
    pub fine_t: u32,
    /// `J′`: detail levels `m₀′ ≤ j′ < J′` are kept.
    pub fine_u: u32,
    pub rows: usize,
    pub cols: usize,
}

impl Levels {
    /// Checks `m₀ ≤ J ≤ log₂N - 1` and `m₀′ ≤ J′ ≤ log₂M`.
    pub fn validate(&self) -> Result<()> {
        grid::check_dim(self.rows)?;
        grid::check_dim(self.cols)?;
        let log_n = grid::log2(self.cols);
        let log_m = grid::log2(self.rows);
        if self.coarse_t < 1 || self.fine_t < self.coarse_t || self.fine_t + 1 > log_n {
            return Err(Error::Config(format!(
                "t levels need 1 <= m0 ({}) <= J ({}) <= log2(N) - 1 ({})",
                self.coarse_t,
                self.fine_t,
                log_n - 1
            )));
        }
        if self.coarse_u < 1 || self.fine_u < self.coarse_u || self.fine_u > log_m {
            return Err(Error::Config(format!(
                "u levels need 1 <= m0' ({}) <= J' ({}) <= log2(M) ({})",
                self.coarse_u, self.fine_u, log_m
            )));
        }
        Ok(())
    }

    /// Number of `u` coefficients kept, `2^{J′}`.
    pub fn u_len(&self) -> usize {
        1 << self.fine_u
    }

    /// `t` blocks in order: coarse, then details `m₀..J`.
    pub fn t_scales(&self) -> Vec<Scale> {
        std::iter::once(Scale::Coarse)
            .chain((self.coarse_t..self.fine_t).map(Scale::Detail))
            .collect()
    }

    pub fn t_level(&self, scale: Scale) -> u32 {
        match scale {
            Scale::Coarse => self.coarse_t,
            Scale::Detail(j) => j,
        }
    }

    /// Maps a flat `u` position to its scale and shift.
    pub fn u_index(&self, p: usize) -> (Scale, usize) {
        let start = 1usize << self.coarse_u;
        if p < start {
            (Scale::Coarse, p)
        } else {
            let lvl = usize::BITS - 1 - p.leading_zeros();
            (Scale::Detail(lvl), p - (1 << lvl))
        }
    }

    pub fn u_position(&self, scale: Scale, shift: usize) -> usize {
        match scale {
            Scale::Coarse => shift,
            Scale::Detail(j) => (1 << j) + shift,
        }
    }

    pub(crate) fn tables(&self) -> Result<Vec<PsiTable>> {
        self.t_scales()
            .into_iter()
            .map(|s| match s {
                Scale::Coarse => PsiTable::scaling(self.coarse_t, self.cols),
                Scale::Detail(j) => PsiTable::wavelet(j, self.cols),
            })
            .collect()
    }
}

/// Coefficients `β_{j,k;j′,k′}` over the index set `Ω(J, J′)` plus the coarse blocks.
///
/// Block `b` holds one `t` scale; its rows are the `2^level` shifts `k` and its
/// columns the `2^{J′}` flat `u` positions.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs2D {
    levels: Levels,
    blocks: Vec<Array2<Complex64>>,
}

impl WaveletCoeffs2D {
    pub fn zeros(levels: Levels) -> Result<Self> {
        levels.validate()?;
        let blocks = levels
            .t_scales()
            .into_iter()
            .map(|s| Array2::zeros((1 << levels.t_level(s), levels.u_len())))
            .collect();
        Ok(Self { levels, blocks })
    }

    pub fn levels(&self) -> &Levels {
        &self.levels
    }

    pub fn scales(&self) -> Vec<Scale> {
        self.levels.t_scales()
    }

    /// Block for `t` scale at position `b` of [`WaveletCoeffs2D::scales`].
    pub fn block(&self, b: usize) -> &Array2<Complex64> {
        &self.blocks[b]
    }

    pub fn block_mut(&mut self, b: usize) -> &mut Array2<Complex64> {
        &mut self.blocks[b]
    }

    pub fn blocks(&self) -> &[Array2<Complex64>] {
        &self.blocks
    }

    fn block_of(&self, t: Scale) -> Option<usize> {
        match t {
            Scale::Coarse => Some(0),
            Scale::Detail(j) if j >= self.levels.coarse_t && j < self.levels.fine_t => {
                Some((j - self.levels.coarse_t + 1) as usize)
            }
            _ => None,
        }
    }

    fn u_pos_checked(&self, u: Scale, kp: usize) -> Option<usize> {
        let ok = match u {
            Scale::Coarse => kp < 1 << self.levels.coarse_u,
            Scale::Detail(j) => j >= self.levels.coarse_u && j < self.levels.fine_u && kp < 1 << j,
        };
        ok.then(|| self.levels.u_position(u, kp))
    }

    /// `β_{(t,k);(u,k′)}`, or `None` outside the index set.
    pub fn get(&self, t: Scale, k: usize, u: Scale, kp: usize) -> Option<Complex64> {
        let b = self.block_of(t)?;
        let p = self.u_pos_checked(u, kp)?;
        self.blocks[b].get((k, p)).copied()
    }

    pub fn set(&mut self, t: Scale, k: usize, u: Scale, kp: usize, value: Complex64) -> Result<()> {
        let b = self
            .block_of(t)
            .ok_or_else(|| Error::Config(format!("t scale {t:?} outside the system")))?;
        let p = self
            .u_pos_checked(u, kp)
            .ok_or_else(|| Error::Config(format!("u index {u:?}/{kp} outside the system")))?;
        let slot = self.blocks[b]
            .get_mut((k, p))
            .ok_or_else(|| Error::Config(format!("shift {k} outside level")))?;
        *slot = value;
        Ok(())
    }

    /// Visits every coefficient with its full index.
    pub fn for_each(&self, mut f: impl FnMut(Scale, usize, Scale, usize, Complex64)) {
        for (scale, block) in self.scales().into_iter().zip(&self.blocks) {
            for ((k, p), &v) in block.indexed_iter() {
                let (u, kp) = self.levels.u_index(p);
                f(scale, k, u, kp, v);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ |β|²`.
    pub fn energy(&self) -> f64 {
        self.blocks.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ (Im β)²`, zero up to rounding for spectra of real fields.
    pub fn imag_energy(&self) -> f64 {
        self.blocks.iter().flatten().map(|c| c.im * c.im).sum()
    }

    /// Drops detail levels `j ≥ fine_t`.
    pub fn truncated(&self, fine_t: u32) -> Result<Self> {
        let mut levels = self.levels;
        if fine_t > levels.fine_t || fine_t < levels.coarse_t {
            return Err(Error::Config(format!(
                "cannot truncate J = {} to {fine_t}",
                levels.fine_t
            )));
        }
        levels.fine_t = fine_t;
        let keep = (fine_t - levels.coarse_t + 1) as usize;
        Ok(Self {
            levels,
            blocks: self.blocks[..keep].to_vec(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.levels != other.levels {
            return None;
        }
        Some(
            self.blocks
                .iter()
                .flatten()
                .zip(other.blocks.iter().flatten())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }
}

/// Forward analysis of a row spectrum onto the tensor system.
///
/// For every frequency in the union of `t` bands the column `h_m(u_·)` is
/// transformed along `u` and scaled to continuous normalization; each band is
/// then analysed across shifts.
pub fn analyze_spectrum(spec: &RowSpectrum, levels: Levels) -> Result<WaveletCoeffs2D> {
    levels.validate()?;
    grid::same_dims(spec.dim(), (levels.rows, levels.cols))?;
    let tables = levels.tables()?;
    let reach = tables
        .iter()
        .map(|t| t.band().max_freq())
        .max()
        .unwrap_or(0);
    let filter = DaubFilter::d12();
    let m = levels.rows;
    let p_len = levels.u_len();
    let scale = (m as f64).powf(-0.5);

    // u-coefficients for every frequency in -reach..=reach, indexed by m + reach
    let width = (2 * reach + 1) as usize;
    let mut u_coeffs = Array2::<Complex64>::zeros((p_len, width));
    let mut column = vec![Complex64::new(0.0, 0.0); m];
    for (slot, freq) in (-reach..=reach).enumerate() {
        let col = spec.column_of(freq);
        for (l, v) in column.iter_mut().enumerate() {
            *v = spec.coeffs()[[l, col]];
        }
        let flat = filter.dwt(&column, levels.coarse_u)?.to_flat();
        for p in 0..p_len {
            u_coeffs[[p, slot]] = flat[p] * scale;
        }
    }

    let mut out = WaveletCoeffs2D::zeros(levels)?;
    for (b, table) in tables.iter().enumerate() {
        let slots: Vec<usize> = table
            .band()
            .indices
            .iter()
            .map(|&f| (f + reach) as usize)
            .collect();
        let block = out.block_mut(b);
        let mut c = vec![Complex64::new(0.0, 0.0); slots.len()];
        for p in 0..p_len {
            for (ci, &s) in c.iter_mut().zip(&slots) {
                *ci = u_coeffs[[p, s]];
            }
            for (k, a) in table.analyze(&c).into_iter().enumerate() {
                block[[k, p]] = a;
            }
        }
    }
    Ok(out)
}

/// Forward analysis of a sampled field: `dft_rows` followed by [`analyze_spectrum`].
pub fn analyze_field(field: &SampledField, levels: Levels) -> Result<WaveletCoeffs2D> {
    analyze_spectrum(&grid::dft_rows(field), levels)
}

/// Synthesis back to a row spectrum (adjoint of [`analyze_spectrum`]).
pub fn synthesize_spectrum(coeffs: &WaveletCoeffs2D) -> Result<RowSpectrum> {
    let levels = *coeffs.levels();
    let tables = levels.tables()?;
    let reach = tables
        .iter()
        .map(|t| t.band().max_freq())
        .max()
        .unwrap_or(0);
    let width = (2 * reach + 1) as usize;
    let m = levels.rows;
    let p_len = levels.u_len();

    let mut u_coeffs = Array2::<Complex64>::zeros((width, m));
    for (b, table) in tables.iter().enumerate() {
        let block = coeffs.block(b);
        let mut a = vec![Complex64::new(0.0, 0.0); block.nrows()];
        for p in 0..p_len {
            if block.column(p).iter().all(|v| v.re == 0.0 && v.im == 0.0) {
                continue;
            }
            for (k, ak) in a.iter_mut().enumerate() {
                *ak = block[[k, p]];
            }
            for (&f, c) in table.band().indices.iter().zip(table.synthesize(&a)) {
                u_coeffs[[(f + reach) as usize, p]] += c;
            }
        }
    }

    let filter = DaubFilter::d12();
    let scale = (m as f64).sqrt();
    let mut spec = RowSpectrum::zeros(levels.rows, levels.cols)?;
    for (slot, freq) in (-reach..=reach).enumerate() {
        let flat = u_coeffs.row(slot);
        if flat.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            continue;
        }
        let scaled: Vec<Complex64> = flat.iter().map(|&v| v * scale).collect();
        let column = filter.idwt(&UWaveletCoeffs::from_flat(&scaled, levels.coarse_u)?);
        let col = spec.column_of(freq);
        let target = spec.coeffs_mut();
        for (l, v) in column.into_iter().enumerate() {
            target[[l, col]] = v;
        }
    }
    Ok(spec)
}

/// Synthesis `Σ β ψ_{j,k}(t) η_{j′,k′}(u)` on the grid; the real part is returned.
pub fn reconstruct(coeffs: &WaveletCoeffs2D) -> Result<SampledField> {
    Ok(grid::idft_rows(&synthesize_spectrum(coeffs)?))
}
