//! Three specular waves with independent uniform phases.
//!
//! Amplitudes are ordered `ρ₁ ≥ ρ₂ ≥ ρ₃` internally. The sign of
//! `Δ_ρ = ρ₁ − ρ₂ − ρ₃` decides the tail: for `Δ_ρ < 0` the envelope can
//! reach zero and the outage is linear in `P_R`; for `Δ_ρ > 0` it is
//! bounded away from zero.

use super::{check_level, check_r, numerical_slope, require, CdfEstimate, Fading, LocalSlope, PowerLawTail, SlopeSource};
use crate::error::Result;
use crate::quad::{integrate_with_breaks, QuadOptions};
use crate::specfun::elliptic_k;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeWave {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeWaveCase {
    /// `ρ₁ < ρ₂ + ρ₃`: full cancellation possible, slope 1.
    NegativeDelta,
    /// `ρ₁ = ρ₂ + ρ₃`.
    Balanced,
    /// `ρ₁ > ρ₂ + ρ₃`: the envelope never drops below `Δ_ρ`.
    PositiveDelta,
}

// Relative tolerance for classifying Δ_ρ as zero.
const BALANCE_TOL: f64 = 1e-12;

impl ThreeWave {
    pub fn new(rho1: f64, rho2: f64, rho3: f64) -> Self {
        Self { rho1, rho2, rho3 }
    }

    /// Amplitudes in descending order.
    pub fn sorted(&self) -> [f64; 3] {
        let mut r = [self.rho1, self.rho2, self.rho3];
        r.sort_by(|a, b| b.total_cmp(a));
        r
    }

    pub fn delta_rho(&self) -> f64 {
        let [a, b, c] = self.sorted();
        a - b - c
    }

    pub fn case(&self) -> ThreeWaveCase {
        let d = self.delta_rho();
        if d.abs() <= BALANCE_TOL * self.sorted()[0] {
            ThreeWaveCase::Balanced
        } else if d < 0.0 {
            ThreeWaveCase::NegativeDelta
        } else {
            ThreeWaveCase::PositiveDelta
        }
    }

    pub fn r_min(&self) -> f64 {
        self.delta_rho().max(0.0)
    }

    pub fn r_max(&self) -> f64 {
        self.rho1 + self.rho2 + self.rho3
    }

    /// `Δ_r² = (1/16)[(r+ρ₁)² − (ρ₂−ρ₃)²][(ρ₂+ρ₃)² − (r−ρ₁)²]`.
    pub fn delta_r_sq(&self, r: f64) -> f64 {
        let [a, b, c] = self.sorted();
        // Factored into linear terms to keep the zeros exact.
        let f1 = (r + a - b + c) * (r + a + b - c);
        let f2 = (b + c - r + a) * (b + c + r - a);
        f1 * f2 / 16.0
    }

    fn product(&self) -> f64 {
        self.rho1 * self.rho2 * self.rho3
    }

    /// Points inside the support where the density switches branch and has
    /// a logarithmic peak.
    fn switch_points(&self) -> Vec<f64> {
        let q = self.product();
        let h = |r: f64| self.delta_r_sq(r) - q * r;
        let (lo, hi) = (self.r_min(), self.r_max());
        let n = 4096;
        let mut out = Vec::new();
        let mut prev_r = lo;
        let mut prev = h(lo);
        for i in 1..=n {
            let r = lo + (hi - lo) * i as f64 / n as f64;
            let v = h(r);
            if prev == 0.0 && i > 1 {
                out.push(prev_r);
            } else if prev * v < 0.0 {
                let (mut a, mut b, mut fa) = (prev_r, r, prev);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    let fm = h(m);
                    if fm * fa <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                out.push(0.5 * (a + b));
            }
            prev_r = r;
            prev = v;
        }
        out
    }

    fn density(&self, r: f64) -> f64 {
        if r <= self.r_min() || r >= self.r_max() {
            return 0.0;
        }
        let q = self.product() * r;
        let d2 = self.delta_r_sq(r).max(0.0);
        // The log peak at m = 1 is integrable; nodes never sit on it exactly.
        let k = |m: f64| elliptic_k(m.min(1.0 - f64::EPSILON)).unwrap_or(f64::NAN);
        if d2 <= q {
            r.sqrt() / (PI * PI * self.product().sqrt()) * k(d2 / q)
        } else {
            r / (PI * PI * d2.sqrt()) * k(q / d2)
        }
    }

    fn integrate_density(&self, upper: f64) -> Result<(f64, f64)> {
        let lo = self.r_min();
        let upper = upper.min(self.r_max());
        if upper <= lo {
            return Ok((0.0, 0.0));
        }
        let mut points = vec![lo];
        points.extend(self.switch_points().into_iter().filter(|&p| p > lo && p < upper));
        points.push(upper);
        let r = integrate_with_breaks(|x| self.density(x), &points, QuadOptions::with_tol(0.0, 1e-11))?;
        Ok((r.value, r.error))
    }
}

impl Fading for ThreeWave {
    const NAME: &'static str = "ThreeWave";

    fn validate(&self) -> Result<()> {
        for (name, v) in [("rho1", self.rho1), ("rho2", self.rho2), ("rho3", self.rho3)] {
            require(Self::NAME, v > 0.0 && v.is_finite(), || format!("{name} must be finite and > 0, got {v}"))?;
        }
        Ok(())
    }

    fn mean_power(&self) -> f64 {
        self.rho1 * self.rho1 + self.rho2 * self.rho2 + self.rho3 * self.rho3
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        Ok(self.density(r))
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        if p_r.sqrt() >= self.r_max() {
            return Ok(CdfEstimate::closed(1.0));
        }
        let (v, err) = self.integrate_density(p_r.sqrt())?;
        Ok(CdfEstimate::quadrature(v, err))
    }

    /// `ε̃ = P_R/(4πΔ₀)` with `Δ₀` the value of `Δ_r` at `r = 0`; only for
    /// [`ThreeWaveCase::NegativeDelta`].
    fn power_law(&self) -> Option<PowerLawTail> {
        if self.case() != ThreeWaveCase::NegativeDelta {
            return None;
        }
        let d0 = self.delta_r_sq(0.0).sqrt();
        Some(PowerLawTail::new(self.mean_power() / (4.0 * PI * d0), 1.0, self.mean_power()))
    }

    fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        check_level(Self::NAME, p_r)?;
        match self.case() {
            ThreeWaveCase::NegativeDelta => Ok(LocalSlope::power_law(1.0)),
            ThreeWaveCase::Balanced => Ok(LocalSlope {
                value: 0.75,
                source: SlopeSource::Asserted,
            }),
            ThreeWaveCase::PositiveDelta => Ok(LocalSlope {
                value: numerical_slope(|p| self.cdf_detailed(p).map(|c| c.value), p_r)?,
                source: SlopeSource::Numerical,
            }),
        }
    }
}
