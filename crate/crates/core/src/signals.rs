//! Standard test signals and the simulation kernel.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{self, SampledField};

/// One-dimensional test profiles. The first four are the Donoho–Johnstone
/// signals used along `t`; `Quadratic`, `Bumps` and `Blip` serve along `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestSignal {
    HeaviSine,
    Doppler,
    Bumps,
    Blip,
    Quadratic,
}

const BUMP_POS: [f64; 11] = [
    0.1, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81,
];
const BUMP_HEIGHT: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WIDTH: [f64; 11] = [
    0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005,
];

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl TestSignal {
    pub const ALL: [TestSignal; 5] = [
        TestSignal::HeaviSine,
        TestSignal::Doppler,
        TestSignal::Bumps,
        TestSignal::Blip,
        TestSignal::Quadratic,
    ];

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Self::HeaviSine => 4.0 * (4.0 * PI * x).sin() - sgn(x - 0.3) - sgn(0.72 - x),
            Self::Doppler => (x * (1.0 - x)).sqrt() * (2.0 * PI * 1.05 / (x + 0.05)).sin(),
            Self::Bumps => BUMP_POS
                .iter()
                .zip(BUMP_HEIGHT)
                .zip(BUMP_WIDTH)
                .map(|((&p, h), w)| h * (1.0 + ((x - p) / w).abs()).powi(-4))
                .sum(),
            Self::Blip => {
                if x <= 0.8 {
                    0.32 + 0.6 * x + 0.3 * (-100.0 * (x - 0.3).powi(2)).exp()
                } else {
                    -0.28 + 0.6 * x + 0.3 * (-100.0 * (x - 1.3).powi(2)).exp()
                }
            }
            Self::Quadratic => (x - 0.5).powi(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::HeaviSine => "heavisine",
            Self::Doppler => "doppler",
            Self::Bumps => "bumps",
            Self::Blip => "blip",
            Self::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for TestSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for TestSignal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|sig| sig.name() == lower)
            .ok_or_else(|| Error::UnknownSignal(s.to_string()))
    }
}

/// `f(t, u) = f_t(t) f_u(u)` on the grid, rescaled to unit discrete norm.
pub fn make_test_function(
    f_t: TestSignal,
    f_u: TestSignal,
    rows: usize,
    cols: usize,
) -> Result<SampledField> {
    let raw = SampledField::from_fn(rows, cols, |t, u| f_t.eval(t) * f_u.eval(u))?;
    let norm = grid::l2_norm_sq(&raw).sqrt();
    if norm == 0.0 {
        return Err(Error::Domain(format!("{f_t} x {f_u} vanishes on the grid")));
    }
    Ok(raw.scaled(1.0 / norm))
}

/// How `|t|` in the kernel formula is read on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelShape {
    /// Circular distance `min(t, 1-t)`, so the kernel is continuous on the circle.
    Periodic,
    /// Plain `t` on `[0, 1)`, with a jump where the period wraps.
    #[default]
    OneSided,
}

impl FromStr for KernelShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(Self::Periodic),
            "one-sided" | "onesided" => Ok(Self::OneSided),
            _ => Err(Error::Config(format!("unknown kernel shape '{s}'"))),
        }
    }
}

/// `g(t, u) = 0.5 exp(-|t| (1 + (u - 0.5)²))`.
pub fn make_kernel(rows: usize, cols: usize, shape: KernelShape) -> Result<SampledField> {
    SampledField::from_fn(rows, cols, |t, u| {
        let dist = match shape {
            KernelShape::Periodic => t.min(1.0 - t),
            KernelShape::OneSided => t,
        };
        0.5 * (-dist * (1.0 + (u - 0.5).powi(2))).exp()
    })
}
