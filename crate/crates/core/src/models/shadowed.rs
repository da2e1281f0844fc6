//! Suzuki fading: Rayleigh with a log-normally distributed mean power.

use super::{check_level, check_r, require, CdfEstimate, Fading, PowerLawTail};
use crate::error::Result;
use crate::quad::{integrate_with_breaks, QuadOptions};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_10, PI};

/// Shadow mean power `Ω` with `½ ln Ω ~ N(μ_l, σ_l²)`; dB parameters are
/// envelope (20 log₁₀) units. The Rayleigh part has unit mean power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suzuki {
    #[serde(rename = "sigma_dB")]
    pub sigma_db: f64,
    #[serde(rename = "mu_dB")]
    pub mu_db: f64,
}

// Standard-normal range covered by the shadowing integral.
const Z_MAX: f64 = 40.0;

impl Suzuki {
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

    /// `E_z[h(ln Ω(z))]` over the standard normal `z`, `ln Ω = 2μ_l + 2σ_l z`.
    fn shadow_average<H: Fn(f64) -> f64>(&self, h: H, centers: &[f64]) -> Result<(f64, f64)> {
        let (mu, s) = (self.mu_l(), self.sigma_l());
        let mut points: Vec<f64> = (-20..=20).map(|k| 2.0 * k as f64).collect();
        for &c in centers {
            for d in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let z = c + d;
                if z.abs() < Z_MAX {
                    points.push(z);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let norm = 1.0 / (2.0 * PI).sqrt();
        let r = integrate_with_breaks(
            |z: f64| norm * (-0.5 * z * z).exp() * h(2.0 * mu + 2.0 * s * z),
            &points,
            QuadOptions::with_tol(0.0, 1e-12),
        )?;
        Ok((r.value, r.error))
    }

    /// Upper bound `p e^{4σ_l²}` of the outage at relative level `p`.
    pub fn upper_bound(&self, p_r: f64) -> f64 {
        let s = self.sigma_l();
        p_r / self.mean_power() * (4.0 * s * s).exp()
    }

    /// Lower bound `p e^{4σ_l²} − p² e^{12σ_l²}`.
    pub fn lower_bound(&self, p_r: f64) -> f64 {
        let s2 = self.sigma_l().powi(2);
        let p = p_r / self.mean_power();
        p * (4.0 * s2).exp() - p * p * (12.0 * s2).exp()
    }
}

impl Fading for Suzuki {
    const NAME: &'static str = "Suzuki";

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
        let p = r * r;
        if p.is_infinite() {
            return Ok(0.0);
        }
        // Conditional Rayleigh envelope density peaks where Ω ≈ r².
        let (mu, s) = (self.mu_l(), self.sigma_l());
        let center = (p.ln() - 2.0 * mu) / (2.0 * s);
        let (v, _) = self.shadow_average(|ln_omega| 2.0 * r * (-ln_omega - p * (-ln_omega).exp()).exp(), &[center])?;
        Ok(v)
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        if p_r == 0.0 {
            return Ok(CdfEstimate::closed(0.0));
        }
        let (mu, s) = (self.mu_l(), self.sigma_l());
        // Transition of the conditional CDF and the peak of the small-p
        // integrand φ(z) e^{−2σ_l z}.
        let knee = (p_r.ln() - 2.0 * mu) / (2.0 * s);
        let (v, err) = self.shadow_average(|ln_omega| -(-p_r * (-ln_omega).exp()).exp_m1(), &[knee, -2.0 * s])?;
        Ok(CdfEstimate::quadrature(v, err))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        let s = self.sigma_l();
        Some(PowerLawTail::new((4.0 * s * s).exp(), 1.0, self.mean_power()))
    }
}
