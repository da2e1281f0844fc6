//! Cascaded (double) Rayleigh: the product of two Rayleigh envelopes whose
//! powers have correlation `Γ`.

use super::simple::check_mean;
use super::{check_eps, check_level, check_r, invalid, require, CdfEstimate, Fading, LocalSlope, PowerLawTail};
use crate::error::Result;
use crate::specfun::{
    bessel_i, bessel_i0_m1, bessel_i_scaled, bessel_k, bessel_k_scaled, bessel_xk1_m1, lambert_w, WBranch,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadedRayleigh {
    pub gamma_corr: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl CascadedRayleigh {
    pub fn new(gamma_corr: f64, a: f64) -> Self {
        Self { gamma_corr, a }
    }

    fn singular(&self) -> bool {
        self.gamma_corr == 1.0
    }

    /// `σ₁σ₂`, from `A = 4σ₁²σ₂²(1+Γ)`.
    fn sigma_product(&self) -> f64 {
        (self.a / (4.0 * (1.0 + self.gamma_corr))).sqrt()
    }

    /// Normalized envelope `r_Γ = r / (σ₁σ₂(1−Γ))`.
    fn r_gamma(&self, r: f64) -> f64 {
        r / (self.sigma_product() * (1.0 - self.gamma_corr))
    }

    /// Level at which the tail approximation stops being meaningful,
    /// `P_R/A = ¼(1−Γ)²/(1+Γ)`.
    pub fn knee(&self) -> f64 {
        let g = self.gamma_corr;
        0.25 * (1.0 - g) * (1.0 - g) / (1.0 + g) * self.a
    }

    /// Argument `p(1+Γ)/(1−Γ)²` of the logarithm in the tail.
    fn log_arg(&self, p_r: f64) -> f64 {
        let g = self.gamma_corr;
        p_r / self.a * (1.0 + g) / ((1.0 - g) * (1.0 - g))
    }

    /// Mean power of each link in the singular case `Γ = 1`.
    fn link_power(&self) -> f64 {
        (0.5 * self.a).sqrt()
    }
}

impl Fading for CascadedRayleigh {
    const NAME: &'static str = "CascadedRayleigh";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)?;
        require(Self::NAME, (0.0..=1.0).contains(&self.gamma_corr), || {
            format!("gamma_corr must lie in [0, 1], got {}", self.gamma_corr)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if self.singular() {
            let pb = self.link_power();
            return Ok((-r / pb).exp() / pb);
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        let s = self.sigma_product();
        let g = self.gamma_corr.sqrt();
        let y = self.r_gamma(r);
        if (1.0 - g) * y > 800.0 {
            return Ok(0.0);
        }
        // I₀(gy)K₀(y) = Ĩ₀(gy) K̃₀(y) e^{(g−1)y}
        let ik = bessel_i_scaled(0.0, g * y)? * bessel_k_scaled(0, y)? * ((g - 1.0) * y).exp();
        Ok(y / s * ik)
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        if p_r == 0.0 {
            return Ok(CdfEstimate::closed(0.0));
        }
        if self.singular() {
            return Ok(CdfEstimate::closed(-(-p_r.sqrt() / self.link_power()).exp_m1()));
        }
        let g = self.gamma_corr.sqrt();
        let y = self.r_gamma(p_r.sqrt());
        let gy = g * y;
        if (1.0 - g) * y > 800.0 {
            return Ok(CdfEstimate::closed(1.0));
        }
        let v = if y < 2.0 {
            // 1 − I₀ − I₀(yK₁ − 1) − gy I₁K₀ without the leading cancellation.
            let i0 = bessel_i(0.0, gy)?;
            let i1k0 = if gy == 0.0 { 0.0 } else { gy * bessel_i(1.0, gy)? * bessel_k(0, y)? };
            -(bessel_i0_m1(gy) + i0 * bessel_xk1_m1(y)? + i1k0)
        } else {
            let scale = ((g - 1.0) * y).exp();
            let i0 = bessel_i_scaled(0.0, gy)?;
            let i1 = bessel_i_scaled(1.0, gy)?;
            1.0 - y * scale * (g * i1 * bessel_k_scaled(0, y)? + i0 * bessel_k_scaled(1, y)?)
        };
        Ok(CdfEstimate::closed(v))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        None
    }

    fn tail_approx(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        if self.singular() {
            return Ok((2.0 * p_r / self.a).sqrt());
        }
        if p_r == 0.0 {
            return Ok(0.0);
        }
        let g = self.gamma_corr;
        let l = self.log_arg(p_r).ln();
        if l >= 0.0 {
            return Err(invalid(Self::NAME, format!("level {p_r} is above the range of the tail approximation")));
        }
        Ok(-p_r / self.a * (1.0 + g) / (1.0 - g) * l)
    }

    fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        check_level(Self::NAME, p_r)?;
        if self.singular() {
            return Ok(LocalSlope::analytic(0.5));
        }
        Ok(LocalSlope::analytic(1.0 + 1.0 / self.log_arg(p_r).ln()))
    }

    /// Lower-branch Lambert-W solution. The cap is `ε < (1−Γ)/e`, which is
    /// the edge of the `W₋₁` domain and reduces to `1/e` at `Γ = 0`.
    fn invert_tail(&self, eps: f64) -> Result<f64> {
        let g = self.gamma_corr;
        if self.singular() {
            check_eps(Self::NAME, eps, 1.0)?;
            return Ok(0.5 * eps * eps * self.a);
        }
        check_eps(Self::NAME, eps, (1.0 - g) / std::f64::consts::E)?;
        let w = lambert_w(-eps / (1.0 - g), WBranch::Lower)?;
        Ok(-self.a * eps * (1.0 - g) / ((1.0 + g) * w))
    }
}
