//! Periodized orthonormal Daubechies transform along the `u` direction.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the real filter bank can act on. Complex samples are filtered
/// componentwise because the taps are real.
pub trait Sample: Copy + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Sample for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Sample for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

// Extremal-phase Daubechies filter with six vanishing moments.
const D12: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];

// Least-asymmetric variant, same length and moments.
const SYM12: [f64; 12] = [
    -0.007800708325034148,
    0.0017677118642428036,
    0.04472490177066578,
    -0.021060292512300564,
    -0.07263752278646252,
    0.3379294217276218,
    0.787641141030194,
    0.4910559419267466,
    -0.048311742585633,
    -0.11799011114819057,
    0.0034907120842174702,
    0.015404109327027373,
];

/// Orthonormal quadrature-mirror filter pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DaubFilter {
    low: Vec<f64>,
    high: Vec<f64>,
    vanishing_moments: usize,
}

impl DaubFilter {
    fn from_low(low: &[f64]) -> Self {
        let len = low.len();
        let high = (0..len)
            .map(|n| {
                if n % 2 == 0 {
                    low[len - 1 - n]
                } else {
                    -low[len - 1 - n]
                }
            })
            .collect();
        Self {
            low: low.to_vec(),
            high,
            vanishing_moments: len / 2,
        }
    }

    /// 12-tap extremal-phase Daubechies filter.
    pub fn d12() -> Self {
        Self::from_low(&D12)
    }

    /// 12-tap symmlet.
    pub fn symmlet12() -> Self {
        Self::from_low(&SYM12)
    }

    pub fn taps(&self) -> &[f64] {
        &self.low
    }

    pub fn high_pass(&self) -> &[f64] {
        &self.high
    }

    pub fn vanishing_moments(&self) -> usize {
        self.vanishing_moments
    }

    fn split<T: Sample>(&self, x: &[T], approx: &mut Vec<T>, detail: &mut Vec<T>) {
        let len = x.len();
        let half = len / 2;
        approx.clear();
        detail.clear();
        for k in 0..half {
            let mut a = T::zero();
            let mut d = T::zero();
            for (n, (&h, &g)) in self.low.iter().zip(&self.high).enumerate() {
                let v = x[(2 * k + n) % len];
                a = a + v * h;
                d = d + v * g;
            }
            approx.push(a);
            detail.push(d);
        }
    }

    fn merge<T: Sample>(&self, approx: &[T], detail: &[T], out: &mut Vec<T>) {
        let len = approx.len() * 2;
        out.clear();
        out.resize(len, T::zero());
        for (k, (&a, &d)) in approx.iter().zip(detail).enumerate() {
            for (n, (&h, &g)) in self.low.iter().zip(&self.high).enumerate() {
                let i = (2 * k + n) % len;
                out[i] = out[i] + a * h + d * g;
            }
        }
    }

    /// Full periodic pyramid down to `2^coarse_level` approximation coefficients.
    pub fn dwt<T: Sample>(&self, x: &[T], coarse_level: u32) -> Result<UWaveletCoeffs<T>> {
        let len = x.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(len));
        }
        let depth = len.trailing_zeros();
        if coarse_level > depth {
            return Err(Error::Config(format!(
                "coarse level {coarse_level} exceeds log2 of signal length {len}"
            )));
        }
        let mut current = x.to_vec();
        let mut approx = Vec::with_capacity(len / 2);
        let mut details = Vec::with_capacity((depth - coarse_level) as usize);
        for _ in coarse_level..depth {
            let mut detail = Vec::with_capacity(current.len() / 2);
            self.split(&current, &mut approx, &mut detail);
            details.push(detail);
            std::mem::swap(&mut current, &mut approx);
        }
        details.reverse();
        Ok(UWaveletCoeffs {
            coarse_level,
            approx: current,
            details,
        })
    }

    pub fn idwt<T: Sample>(&self, c: &UWaveletCoeffs<T>) -> Vec<T> {
        let mut current = c.approx.clone();
        let mut out = Vec::new();
        for detail in &c.details {
            self.merge(&current, detail, &mut out);
            std::mem::swap(&mut current, &mut out);
        }
        current
    }
}

/// Pyramid coefficients: `approx` holds `2^m₀′` scaling coefficients and
/// `details[i]` the `2^{m₀′+i}` wavelet coefficients of level `m₀′ + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct UWaveletCoeffs<T> {
    pub coarse_level: u32,
    pub approx: Vec<T>,
    pub details: Vec<Vec<T>>,
}

impl<T: Sample> UWaveletCoeffs<T> {
    /// Signal length the coefficients describe.
    pub fn len(&self) -> usize {
        self.approx.len() + self.details.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat layout `[approx | detail m₀′ | detail m₀′+1 | …]`. Position `p ≥ 2^m₀′`
    /// belongs to level `⌊log₂ p⌋`, shift `p - 2^level`.
    pub fn to_flat(&self) -> Vec<T> {
        let mut out = self.approx.clone();
        for d in &self.details {
            out.extend_from_slice(d);
        }
        out
    }

    pub fn from_flat(flat: &[T], coarse_level: u32) -> Result<Self> {
        let len = flat.len();
        if !len.is_power_of_two() || (1usize << coarse_level) > len {
            return Err(Error::Dimension(len));
        }
        let start = 1usize << coarse_level;
        let details = (coarse_level..len.trailing_zeros())
            .map(|lvl| flat[1 << lvl..2 << lvl].to_vec())
            .collect();
        Ok(Self {
            coarse_level,
            approx: flat[..start].to_vec(),
            details,
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            coarse_level: self.coarse_level,
            approx: self.approx.iter().map(|&v| f(v)).collect(),
            details: self
                .details
                .iter()
                .map(|d| d.iter().map(|&v| f(v)).collect())
                .collect(),
        }
    }
}

pub fn dwt_periodic<T: Sample>(x: &[T], coarse_level: u32) -> Result<UWaveletCoeffs<T>> {
    DaubFilter::d12().dwt(x, coarse_level)
}

pub fn idwt_periodic<T: Sample>(c: &UWaveletCoeffs<T>) -> Vec<T> {
    DaubFilter::d12().idwt(c)
}

/// Rescales orthonormal discrete coefficients by `M^{-1/2}` so they approximate
/// the Riemann sums `(1/M) Σ_l h(u_l) η_{j′,k′}(u_l)`.
pub fn continuous_scale<T: Sample>(c: &UWaveletCoeffs<T>, grid: usize) -> UWaveletCoeffs<T> {
    let s = (grid as f64).powf(-0.5);
    c.map(|v| v * s)
}
