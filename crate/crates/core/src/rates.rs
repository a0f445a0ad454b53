//! Minimax convergence-rate exponents over anisotropic Besov balls.
//!
//! The estimator's risk decays like `(max{ε², δ²})^d` up to a factor
//! `ln(1/δ)^{d₁}`; this module evaluates `d` and `d₁` from the smoothness of the
//! target and the ill-posedness of the kernel.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance used to decide that a parameter sits exactly on a regime boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateParams {
    pub s1: f64,
    pub s2: f64,
    pub p: f64,
    pub q: f64,
    pub nu: f64,
}

impl RateParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.s1, self.s2, self.p, self.q, self.nu];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("rate parameters must be finite".into()));
        }
        if !(self.p >= 1.0 && self.q >= 1.0) {
            return Err(Error::Domain(format!(
                "Besov indices need p, q >= 1, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.nu <= 0.0 {
            return Err(Error::Domain(format!(
                "nu must be positive, got {}",
                self.nu
            )));
        }
        let floor = (1.0 / self.p).max(0.5);
        if self.s1.min(self.s2) < floor {
            return Err(Error::Domain(format!(
                "smoothness needs min(s1, s2) >= max(1/p, 1/2) = {floor}, got s1 = {}, s2 = {}",
                self.s1, self.s2
            )));
        }
        Ok(())
    }

    /// `s₁′ = s₁ + 1/2 - 1/min(p, 2)`.
    pub fn s1_prime(&self) -> f64 {
        self.s1 + 0.5 - 1.0 / self.p.min(2.0)
    }

    /// `(2ν+1)(1/p - 1/2)`, the sparse-regime boundary for `s₁`.
    pub fn sparse_boundary(&self) -> f64 {
        (2.0 * self.nu + 1.0) * (1.0 / self.p - 0.5)
    }

    /// `s₂(2ν+1)`, the boundary between `u`-limited and `t`-limited regimes.
    pub fn dense_boundary(&self) -> f64 {
        self.s2 * (2.0 * self.nu + 1.0)
    }
}

/// Which regime determines the rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateRegime {
    /// `s₂(2ν+1) ≤ s₁`: smoothness in `u` is the bottleneck.
    ProfileLimited,
    /// `(2ν+1)(1/p - 1/2) < s₁ < s₂(2ν+1)`: dense regime along `t`.
    Dense,
    /// `s₁ ≤ (2ν+1)(1/p - 1/2)`: sparse regime along `t`.
    Sparse,
}

impl RateRegime {
    pub fn branch(self) -> u8 {
        match self {
            Self::ProfileLimited => 1,
            Self::Dense => 2,
            Self::Sparse => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::ProfileLimited => "profile-limited",
            Self::Dense => "dense",
            Self::Sparse => "sparse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rate {
    pub regime: RateRegime,
    pub d: f64,
    /// Power of the logarithmic factor, the number of boundaries the parameters sit on.
    pub d1: u8,
}

pub fn rate_exponent(rp: &RateParams) -> Result<Rate> {
    rp.validate()?;
    let (s1, s2, nu) = (rp.s1, rp.s2, rp.nu);
    let (regime, d) = if rp.dense_boundary() <= s1 {
        (RateRegime::ProfileLimited, 2.0 * s2 / (2.0 * s2 + 1.0))
    } else if rp.sparse_boundary() < s1 {
        (RateRegime::Dense, 2.0 * s1 / (2.0 * s1 + 2.0 * nu + 1.0))
    } else {
        let sp = rp.s1_prime();
        (RateRegime::Sparse, 2.0 * sp / (2.0 * sp + 2.0 * nu))
    };
    let on = |boundary: f64| ((s1 - boundary).abs() <= BOUNDARY_TOL) as u8;
    Ok(Rate {
        regime,
        d,
        d1: on(rp.sparse_boundary()) + on(rp.dense_boundary()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(s1: f64, s2: f64, p: f64, nu: f64) -> RateParams {
        RateParams {
            s1,
            s2,
            p,
            q: 2.0,
            nu,
        }
    }

    #[test]
    fn documented_cases() {
        let r = rate_exponent(&rp(3.0, 1.0, 2.0, 1.0)).unwrap();
        assert_eq!(r.regime, RateRegime::ProfileLimited);
        assert!((r.d - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.d1, 1);

        let r = rate_exponent(&rp(1.0, 1.0, 2.0, 1.0)).unwrap();
        assert_eq!(r.regime, RateRegime::Dense);
        assert!((r.d - 0.4).abs() < 1e-15);
        assert_eq!(r.d1, 0);
    }

    #[test]
    fn sparse_branch() {
        // p = 1: boundary (2ν+1)/2; ν = 2 gives 2.5 > s₁ = 2
        let r = rate_exponent(&rp(2.0, 3.0, 1.0, 2.0)).unwrap();
        assert_eq!(r.regime, RateRegime::Sparse);
        let sp = 2.0 + 0.5 - 1.0;
        assert!((r.d - 2.0 * sp / (2.0 * sp + 4.0)).abs() < 1e-15);
        let on = rate_exponent(&rp(2.5, 3.0, 1.0, 2.0)).unwrap();
        assert_eq!((on.regime, on.d1), (RateRegime::Sparse, 1));
    }

    #[test]
    fn invalid_parameters() {
        assert!(rate_exponent(&rp(1.0, 1.0, 0.5, 1.0)).is_err());
        assert!(rate_exponent(&rp(0.4, 1.0, 2.0, 1.0)).is_err());
        assert!(rate_exponent(&rp(1.0, 1.0, 2.0, 0.0)).is_err());
        assert!(rate_exponent(&RateParams {
            q: f64::INFINITY,
            ..rp(1.0, 1.0, 2.0, 1.0)
        })
        .is_err());
    }
}
