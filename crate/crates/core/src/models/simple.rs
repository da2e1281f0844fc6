//! Rayleigh, Weibull and Nakagami-m fading.

use super::{
    check_eta, check_level, check_r, require, CdfEstimate, Fading, PowerLawTail,
};
use crate::error::Result;
use crate::specfun::{gamma, ln_gamma, reg_lower_gamma};
use serde::{Deserialize, Serialize};

/// Diffuse-only fading: exponential power, Rayleigh envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rayleigh {
    #[serde(rename = "A")]
    pub a: f64,
}

impl Rayleigh {
    pub fn new(a: f64) -> Self {
        Self { a }
    }
}

pub(crate) fn check_mean(model: &'static str, a: f64) -> Result<()> {
    require(model, a > 0.0 && a.is_finite(), || format!("mean power A must be finite and > 0, got {a}"))
}

impl Fading for Rayleigh {
    const NAME: &'static str = "Rayleigh";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        Ok((std::f64::consts::LN_2 + r.ln() - self.a.ln() - r * r / self.a).exp())
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        Ok(CdfEstimate::closed(-(-p_r / self.a).exp_m1()))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        Some(PowerLawTail::new(1.0, 1.0, self.a))
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        Ok(0.5 * p_r / self.a)
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        Ok(2.0 * eta / (1.0 + eta) * self.a)
    }
}

/// Weibull fading with shape `β_w` applied to the power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weibull {
    pub beta_w: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Weibull {
    pub fn new(beta_w: f64, a: f64) -> Self {
        Self { beta_w, a }
    }

    fn g(&self) -> f64 {
        gamma(1.0 + 1.0 / self.beta_w)
    }

    /// `s = (Γ(1+1/β) P/A)^β`, so that `F = 1 − e^{−s}`.
    fn s(&self, p_r: f64) -> f64 {
        (self.g() * p_r / self.a).powf(self.beta_w)
    }
}

impl Fading for Weibull {
    const NAME: &'static str = "Weibull";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)?;
        require(Self::NAME, self.beta_w >= 0.5 && self.beta_w.is_finite(), || {
            format!("shape beta_w must be >= 1/2, got {}", self.beta_w)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if r == 0.0 {
            return Ok(if self.beta_w < 0.5 + 1e-15 { 2.0 * self.beta_w * (self.g() / self.a).sqrt() } else { 0.0 });
        }
        // Log form so that huge r gives 0 rather than ∞·0.
        let ln_s = self.beta_w * (self.g().ln() + 2.0 * r.ln() - self.a.ln());
        Ok(((2.0 * self.beta_w).ln() + ln_s - r.ln() - ln_s.exp()).exp())
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        Ok(CdfEstimate::closed(-(-self.s(p_r)).exp_m1()))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        Some(PowerLawTail::new(self.g().powf(self.beta_w), self.beta_w, self.a))
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        let s = self.s(p_r);
        Ok(s / (1.0 + s))
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let t = eta / (1.0 + eta);
        Ok(self.a * (t / (1.0 - t)).powf(1.0 / self.beta_w) / self.g())
    }
}

/// Nakagami-m fading: Gamma-distributed power with shape `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Nakagami {
    pub m: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Nakagami {
    pub fn new(m: f64, a: f64) -> Self {
        Self { m, a }
    }
}

impl Fading for Nakagami {
    const NAME: &'static str = "Nakagami";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)?;
        require(Self::NAME, self.m >= 0.5 && self.m.is_finite(), || {
            format!("shape m must be >= 1/2, got {}", self.m)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if r == 0.0 {
            return Ok(if self.m == 0.5 { 2.0 * (0.5 / (std::f64::consts::PI * self.a)).sqrt() } else { 0.0 });
        }
        let m = self.m;
        let x = r * r / self.a;
        let ln = std::f64::consts::LN_2 + m * m.ln() - ln_gamma(m) + (2.0 * m - 1.0) * r.ln() - m * self.a.ln() - m * x;
        Ok(ln.exp())
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        Ok(CdfEstimate::closed(reg_lower_gamma(self.m, self.m * p_r / self.a)?))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        let m = self.m;
        Some(PowerLawTail::new((m * m.ln() - ln_gamma(m + 1.0)).exp(), m, self.a))
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        Ok(-(-self.m * p_r / self.a).exp_m1())
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let t = eta / (1.0 + eta);
        Ok(-(-t).ln_1p() / self.m * self.a)
    }
}
