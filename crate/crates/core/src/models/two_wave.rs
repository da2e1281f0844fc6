//! Two specular waves with independent uniform phases, no diffuse part.
//!
//! `P = A(1 + Δ cos θ)`, so the power is supported on `[A(1−Δ), A(1+Δ)]`.
//! With the shifted level `p* = (p − (1−Δ))/Δ ∈ [0, 2]` the CDF is
//! `(2/π) asin(√(p*/2))`.

use super::{
    check_eta, check_level, check_r, delta_ratio, require, CdfEstimate, Fading, LocalSlope,
    PowerLawTail,
};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoWave {
    pub rho1: f64,
    pub rho2: f64,
}

impl TwoWave {
    pub fn new(rho1: f64, rho2: f64) -> Self {
        Self { rho1, rho2 }
    }

    pub fn delta(&self) -> f64 {
        delta_ratio(self.rho1, self.rho2).unwrap_or(0.0)
    }

    /// Shifted relative level `p*`, clamped to `[0, 2]`.
    pub fn p_star(&self, p_r: f64) -> f64 {
        let delta = self.delta();
        let p = p_r / self.mean_power();
        ((p - (1.0 - delta)) / delta).clamp(0.0, 2.0)
    }

    /// Lower support edge `A(1 − Δ)`.
    pub fn support_floor(&self) -> f64 {
        let r = (self.rho1 - self.rho2).abs();
        r * r
    }

    fn phi_star(p_star: f64) -> f64 {
        // Bound in units of the mean power.
        if p_star >= 2.0 {
            return f64::INFINITY;
        }
        4.0 / 3.0 * (0.5f64).sqrt() * (1.0 + p_star) * p_star / (2.0 - p_star).powf(1.5)
    }
}

impl Fading for TwoWave {
    const NAME: &'static str = "TwoWave";

    fn validate(&self) -> Result<()> {
        require(Self::NAME, self.rho1 > 0.0 && self.rho1.is_finite(), || {
            format!("rho1 must be finite and > 0, got {}", self.rho1)
        })?;
        require(Self::NAME, self.rho2 > 0.0 && self.rho2.is_finite(), || {
            format!("rho2 must be finite and > 0, got {}", self.rho2)
        })
    }

    fn mean_power(&self) -> f64 {
        self.rho1 * self.rho1 + self.rho2 * self.rho2
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        let lo = (self.rho1 - self.rho2).abs();
        let hi = self.rho1 + self.rho2;
        if r <= lo || r >= hi {
            return Ok(0.0);
        }
        // 4ρ₁²ρ₂² − (r² − ρ₁² − ρ₂²)² factored to avoid cancellation.
        let disc = (r * r - lo * lo) * (hi * hi - r * r);
        Ok(2.0 * r / (PI * disc.sqrt()))
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let ps = self.p_star(p_r);
        Ok(CdfEstimate::closed(2.0 / PI * (0.5 * ps).sqrt().asin()))
    }

    /// The balanced (`Δ → 1`) row; for `Δ < 1` it is reported with its
    /// support floor and applies to the shifted level.
    fn power_law(&self) -> Option<PowerLawTail> {
        let mut law = PowerLawTail::new(SQRT_2 / PI, 0.5, self.mean_power());
        law.valid_above = self.support_floor();
        Some(law)
    }

    fn tail_approx(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        Ok(SQRT_2 / PI * self.p_star(p_r).sqrt())
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        Ok(Self::phi_star(self.p_star(p_r)))
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let target = eta / (1.0 + eta);
        let (mut lo, mut hi) = (0.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if Self::phi_star(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-16 * hi {
                break;
            }
        }
        let delta = self.delta();
        Ok(self.mean_power() * ((1.0 - delta) + delta * 0.5 * (lo + hi)))
    }

    fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        check_level(Self::NAME, p_r)?;
        let floor = self.support_floor();
        if p_r <= floor {
            return Ok(LocalSlope::analytic(f64::INFINITY));
        }
        if floor == 0.0 {
            return Ok(LocalSlope::power_law(0.5));
        }
        Ok(LocalSlope::analytic(0.5 * p_r / (p_r - floor)))
    }

    fn invert_tail(&self, eps: f64) -> Result<f64> {
        super::check_eps(Self::NAME, eps, 1.0)?;
        let ps = (eps * PI / SQRT_2).powi(2);
        require(Self::NAME, ps <= 2.0, || format!("outage {eps} exceeds the range of the tail approximation"))?;
        let delta = self.delta();
        Ok(self.mean_power() * ((1.0 - delta) + delta * ps))
    }
}
