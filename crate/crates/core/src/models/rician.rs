//! Rician fading and the two-wave diffuse-power (TWDP) generalization.

use super::simple::check_mean;
use super::{
    check_eta, check_level, check_r, require, CdfEstimate, CdfMethod, Fading, PowerLawTail,
};
use crate::error::{Error, Result};
use crate::specfun::{bessel_i_scaled, marcum_q_complement};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One specular wave plus diffuse power, k-factor `k₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rician {
    pub k1: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Rician {
    pub fn new(k1: f64, a: f64) -> Self {
        Self { k1, a }
    }
}

/// `F(P)` for a Rician channel with k-factor `k` and diffuse power `2σ²`.
fn rice_cdf(k: f64, two_sigma2: f64, p_r: f64) -> Result<f64> {
    marcum_q_complement(1.0, (2.0 * k).sqrt(), (2.0 * p_r / two_sigma2).sqrt())
}

/// Envelope density for specular power `k·2σ²` and diffuse power `2σ²`.
fn rice_pdf(k: f64, two_sigma2: f64, r: f64) -> Result<f64> {
    let sigma2 = 0.5 * two_sigma2;
    let v = (k * two_sigma2).sqrt();
    let z = r * v / sigma2;
    // I₀(z) e^{−(r²+v²)/(2σ²)} = Ĩ₀(z) e^{−(r−v)²/(2σ²)}
    let e = (r - v) * (r - v) / two_sigma2;
    if e > 800.0 {
        return Ok(0.0);
    }
    Ok(r / sigma2 * bessel_i_scaled(0.0, z)? * (-e).exp())
}

impl Fading for Rician {
    const NAME: &'static str = "Rician";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)?;
        require(Self::NAME, self.k1 >= 0.0 && self.k1.is_finite(), || {
            format!("k1 must be finite and >= 0, got {}", self.k1)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        rice_pdf(self.k1, self.a / (self.k1 + 1.0), r)
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let v = rice_cdf(self.k1, self.a / (self.k1 + 1.0), p_r)?;
        Ok(CdfEstimate {
            method: CdfMethod::Series,
            ..CdfEstimate::closed(v)
        })
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        Some(PowerLawTail::new((self.k1 + 1.0) * (-self.k1).exp(), 1.0, self.a))
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        let k = self.k1;
        Ok((0.5 * k).exp() * ((k + 1.0) * p_r / self.a).exp_m1())
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let t = eta / (1.0 + eta);
        let k = self.k1;
        Ok(self.a * ((-0.5 * k).exp() * t).ln_1p() / (k + 1.0))
    }
}

/// Two specular waves plus diffuse power: k-factor `k₂` of the total
/// specular power and peak-to-average ratio `Δ` of the two waves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Twdp {
    pub k2: f64,
    pub delta: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl Twdp {
    pub fn new(k2: f64, delta: f64, a: f64) -> Self {
        Self { k2, delta, a }
    }

    pub fn diffuse_power(&self) -> f64 {
        self.a / (self.k2 + 1.0)
    }

    /// Amplitudes `(ρ₁, ρ₂)` of the two specular waves.
    pub fn amplitudes(&self) -> (f64, f64) {
        let s = self.k2 * self.diffuse_power();
        let d = self.delta * s;
        let plus = (s + d).sqrt();
        let minus = (s - d).max(0.0).sqrt();
        (0.5 * (plus + minus), 0.5 * (plus - minus))
    }

    /// `(1/π) ∫_0^π g(k₂(1 + Δ cos ψ)) dψ` by the trapezoid rule, which
    /// converges geometrically for smooth periodic integrands. The node set
    /// is doubled until two successive estimates agree.
    fn phase_average<F: Fn(f64) -> Result<f64>>(&self, g: F) -> Result<(f64, f64)> {
        let k_at = |psi: f64| self.k2 * (1.0 + self.delta * psi.cos());
        if self.delta == 0.0 || self.k2 == 0.0 {
            return Ok((g(self.k2)?, 0.0));
        }
        let mut n = 16usize;
        let mut sum = 0.5 * (g(k_at(0.0))? + g(k_at(PI))?);
        for i in 1..n {
            sum += g(k_at(PI * i as f64 / n as f64))?;
        }
        let mut estimate = sum / n as f64;
        while n < 1 << 16 {
            for i in 0..n {
                sum += g(k_at(PI * (2 * i + 1) as f64 / (2 * n) as f64))?;
            }
            n *= 2;
            let next = sum / n as f64;
            let diff = (next - estimate).abs();
            estimate = next;
            if diff <= 1e-13 * estimate.abs() || diff < 1e-300 {
                return Ok((estimate, diff));
            }
        }
        Err(Error::Quadrature {
            partial: estimate,
            error_estimate: f64::NAN,
        })
    }
}

impl Fading for Twdp {
    const NAME: &'static str = "TWDP";

    fn validate(&self) -> Result<()> {
        check_mean(Self::NAME, self.a)?;
        require(Self::NAME, self.k2 >= 0.0 && self.k2.is_finite(), || {
            format!("k2 must be finite and >= 0, got {}", self.k2)
        })?;
        require(Self::NAME, (0.0..=1.0).contains(&self.delta), || {
            format!("delta must lie in [0, 1], got {}", self.delta)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        let d = self.diffuse_power();
        self.phase_average(|k| rice_pdf(k, d, r)).map(|(v, _)| v)
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let d = self.diffuse_power();
        let (v, err) = self.phase_average(|k| rice_cdf(k, d, p_r))?;
        Ok(CdfEstimate::quadrature(v, err))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        let k = self.k2;
        let x = k * self.delta;
        // e^{−k} I₀(kΔ) = e^{−k(1−Δ)} Ĩ₀(kΔ)
        let i0 = bessel_i_scaled(0.0, x).ok()?;
        Some(PowerLawTail::new((k + 1.0) * (-k * (1.0 - self.delta)).exp() * i0, 1.0, self.a))
    }
}
