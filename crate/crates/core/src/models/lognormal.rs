//! Log-normal envelope: `ln r ~ N(μ_l, σ_l²)`.
//!
//! The tail is not a power law; the approximation
//! `ε̃ = ¼ exp(−(½ ln P_R − aσ_l − μ_l)²/(2σ_l²))` is used with a fitted
//! shift `a`.

use super::{check_eps, check_level, check_r, require, CdfEstimate, Fading, LocalSlope, PowerLawTail};
use crate::error::Result;
use crate::specfun::erfc;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_10, PI, SQRT_2};

/// Shift of the Gaussian-exponent approximation, in units of `σ_l`.
pub const LN_SHIFT: f64 = 0.223;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogNormal {
    #[serde(rename = "sigma_dB")]
    pub sigma_db: f64,
    #[serde(rename = "mu_dB")]
    pub mu_db: f64,
}

impl LogNormal {
    pub fn new(sigma_db: f64, mu_db: f64) -> Self {
        Self { sigma_db, mu_db }
    }

    /// Parameters giving mean power `A` for the given spread.
    pub fn with_mean_power(sigma_db: f64, a: f64) -> Self {
        let s = sigma_db * LN_10 / 20.0;
        let mu_l = 0.5 * a.ln() - s * s;
        Self::new(sigma_db, mu_l * 20.0 / LN_10)
    }

    pub fn sigma_l(&self) -> f64 {
        self.sigma_db * LN_10 / 20.0
    }

    pub fn mu_l(&self) -> f64 {
        self.mu_db * LN_10 / 20.0
    }

    fn center(&self) -> f64 {
        LN_SHIFT * self.sigma_l() + self.mu_l()
    }
}

impl Fading for LogNormal {
    const NAME: &'static str = "LogNormal";

    fn validate(&self) -> Result<()> {
        require(Self::NAME, self.sigma_db > 0.0 && self.sigma_db.is_finite(), || {
            format!("sigma_dB must be finite and > 0, got {}", self.sigma_db)
        })?;
        require(Self::NAME, self.mu_db.is_finite(), || format!("mu_dB must be finite, got {}", self.mu_db))
    }

    fn mean_power(&self) -> f64 {
        let s = self.sigma_l();
        (2.0 * s * s + 2.0 * self.mu_l()).exp()
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if r == 0.0 {
            return Ok(0.0);
        }
        let s = self.sigma_l();
        let z = (r.ln() - self.mu_l()) / s;
        Ok((-0.5 * z * z).exp() / (r * s * (2.0 * PI).sqrt()))
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        if p_r == 0.0 {
            return Ok(CdfEstimate::closed(0.0));
        }
        let x = (self.mu_l() - 0.5 * p_r.ln()) / (self.sigma_l() * SQRT_2);
        Ok(CdfEstimate::closed(0.5 * erfc(x)))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        None
    }

    fn tail_approx(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        if p_r == 0.0 {
            return Ok(0.0);
        }
        let s = self.sigma_l();
        let d = 0.5 * p_r.ln() - self.center();
        Ok(0.25 * (-d * d / (2.0 * s * s)).exp())
    }

    fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        check_level(Self::NAME, p_r)?;
        let s = self.sigma_l();
        Ok(LocalSlope::analytic((self.center() - 0.5 * p_r.ln()) / (2.0 * s * s)))
    }

    /// Root of the quadratic in `ln P_R` on the decreasing side of the
    /// approximation, `½ ln P_R = aσ_l + μ_l − √2 σ_l √(ln(1/(4ε)))`.
    fn invert_tail(&self, eps: f64) -> Result<f64> {
        check_eps(Self::NAME, eps, 0.25)?;
        let half_ln = self.center() - SQRT_2 * self.sigma_l() * (-(4.0 * eps).ln()).sqrt();
        Ok((2.0 * half_ln).exp())
    }
}
