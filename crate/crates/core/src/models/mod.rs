//! Fading-channel model catalog.
//!
//! All powers are absolute (same units as the mean power `A`); relative
//! levels are written `p = P_R / A`. Every model implements [`Fading`], and
//! [`ChannelModel`] is the serializable tagged union that dispatches to them.

mod cascaded;
mod kappa_mu;
mod lognormal;
mod rician;
mod shadowed;
mod simple;
mod three_wave;
mod two_wave;

pub use cascaded::CascadedRayleigh;
pub use kappa_mu::{kappamu_exact_tail_series, KappaMu, KappaMuAlpha, KappaMuM, SeriesTail};
pub use lognormal::{LogNormal, LN_SHIFT};
pub use rician::{Rician, Twdp};
pub use shadowed::Suzuki;
pub use simple::{Nakagami, Rayleigh, Weibull};
pub use three_wave::{ThreeWave, ThreeWaveCase};
pub use two_wave::TwoWave;

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

/// Relative magnitude below which a quadrature result is reported as being
/// at the double-precision floor rather than as an exact value.
pub const PRECISION_FLOOR: f64 = 1e-13;

/// `2^R − 1`: the smallest received power that supports rate `R` bits per
/// channel use.
pub fn outage_threshold(rate: f64) -> Result<f64> {
    if !(rate >= 0.0) {
        return Err(domain("outage_threshold", format!("rate must be >= 0, got {rate}")));
    }
    Ok((rate * std::f64::consts::LN_2).exp_m1())
}

/// Peak-to-average ratio of two specular powers, `2ρ₁ρ₂/(ρ₁² + ρ₂²)`.
pub fn delta_ratio(rho1: f64, rho2: f64) -> Result<f64> {
    if !(rho1 > 0.0 && rho2 > 0.0) || !rho1.is_finite() || !rho2.is_finite() {
        return Err(domain("delta_ratio", format!("amplitudes must be finite and > 0, got ({rho1}, {rho2})")));
    }
    // Scale out the larger amplitude to avoid overflow in the squares.
    let (hi, lo) = if rho1 >= rho2 { (rho1, rho2) } else { (rho2, rho1) };
    let r = lo / hi;
    Ok(2.0 * r / (1.0 + r * r))
}

/// `ε̃(P_R) = α (P_R/A)^β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawTail {
    pub alpha_offset: f64,
    pub beta_slope: f64,
    #[serde(rename = "A")]
    pub mean_power: f64,
    /// Absolute power below which the law does not apply (the two-wave
    /// support edge `A(1 − Δ)`); zero when the law holds all the way down.
    #[serde(default)]
    pub valid_above: f64,
}

impl PowerLawTail {
    pub fn new(alpha_offset: f64, beta_slope: f64, mean_power: f64) -> Self {
        Self {
            alpha_offset,
            beta_slope,
            mean_power,
            valid_above: 0.0,
        }
    }

    pub fn eval(&self, p_r: f64) -> f64 {
        self.alpha_offset * (p_r / self.mean_power).powf(self.beta_slope)
    }

    pub fn ln_eval(&self, p_r: f64) -> f64 {
        self.alpha_offset.ln() + self.beta_slope * (p_r / self.mean_power).ln()
    }

    pub fn invert(&self, eps: f64) -> f64 {
        self.mean_power * (eps / self.alpha_offset).powf(1.0 / self.beta_slope)
    }
}

/// How an exact CDF value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfMethod {
    ClosedForm,
    Series,
    Quadrature,
}

/// A CDF value together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfEstimate {
    pub value: f64,
    /// Absolute error estimate; zero for closed forms.
    pub error_estimate: f64,
    pub method: CdfMethod,
    /// Quadrature result smaller than [`PRECISION_FLOOR`].
    pub at_precision_floor: bool,
}

impl CdfEstimate {
    pub fn closed(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            error_estimate: 0.0,
            method: CdfMethod::ClosedForm,
            at_precision_floor: false,
        }
    }

    pub fn quadrature(value: f64, error_estimate: f64) -> Self {
        let value = value.clamp(0.0, 1.0);
        Self {
            value,
            error_estimate,
            method: CdfMethod::Quadrature,
            at_precision_floor: value < PRECISION_FLOOR,
        }
    }
}

/// Where a local slope value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeSource {
    /// Constant exponent of a power-law tail.
    PowerLaw,
    /// Closed-form derivative of a level-dependent tail approximation.
    Analytic,
    /// Stated without derivation; checked empirically only.
    Asserted,
    /// Finite difference of the exact CDF.
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSlope {
    pub value: f64,
    pub source: SlopeSource,
}

impl LocalSlope {
    pub fn power_law(value: f64) -> Self {
        Self {
            value,
            source: SlopeSource::PowerLaw,
        }
    }
    pub fn analytic(value: f64) -> Self {
        Self {
            value,
            source: SlopeSource::Analytic,
        }
    }
}

/// Exact, approximate and bounded tail values at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub p_rel: f64,
    pub eps_exact: Option<f64>,
    pub eps_tail: f64,
    pub phi: Option<f64>,
    pub within_tolerance: bool,
}

/// Common interface of every fading model.
pub trait Fading {
    const NAME: &'static str;

    fn validate(&self) -> Result<()>;

    /// `A = E[P]`.
    fn mean_power(&self) -> f64;

    /// Envelope density `f(r)`, zero outside the support.
    fn pdf(&self, r: f64) -> Result<f64>;

    /// `Pr(P < P_R)` with provenance.
    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate>;

    /// The tail law `α (P_R/A)^β`, if the model has one.
    fn power_law(&self) -> Option<PowerLawTail>;

    /// `ε̃(P_R)`.
    fn tail_approx(&self, p_r: f64) -> Result<f64> {
        self.power_law()
            .map(|law| law.eval(p_r))
            .ok_or(Error::Unsupported {
                model: Self::NAME,
                what: "tail approximation",
            })
    }

    /// Relative error bound `φ(P_R)` of the tail approximation.
    fn approx_error_phi(&self, _p_r: f64) -> Result<f64> {
        Err(Error::Unsupported {
            model: Self::NAME,
            what: "approximation error function",
        })
    }

    /// Largest `P_R` with `φ(P_R) ≤ η/(1+η)`.
    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        self.approx_error_phi(0.0)?;
        bisect_phi(|p| self.approx_error_phi(p), eta / (1.0 + eta), self.mean_power())
    }

    /// `d ln ε̃ / d ln p`.
    fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        check_level(Self::NAME, p_r)?;
        self.power_law()
            .map(|law| LocalSlope::power_law(law.beta_slope))
            .ok_or(Error::Unsupported {
                model: Self::NAME,
                what: "local slope",
            })
    }

    /// `P_R` such that `ε̃(P_R) = ε`.
    fn invert_tail(&self, eps: f64) -> Result<f64> {
        check_eps(Self::NAME, eps, 1.0)?;
        self.power_law()
            .map(|law| law.invert(eps))
            .ok_or(Error::Unsupported {
                model: Self::NAME,
                what: "tail inversion",
            })
    }
}

pub(crate) fn check_level(model: &'static str, p_r: f64) -> Result<()> {
    if !(p_r >= 0.0) {
        return Err(Error::InvalidParameter {
            model,
            detail: format!("power level must be >= 0, got {p_r}"),
        });
    }
    Ok(())
}

pub(crate) fn check_r(model: &'static str, r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter {
            model,
            detail: format!("envelope must be >= 0, got {r}"),
        });
    }
    Ok(())
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(domain("validity_bound", format!("eta must be finite and > 0, got {eta}")));
    }
    Ok(())
}

pub(crate) fn check_eps(model: &'static str, eps: f64, cap: f64) -> Result<()> {
    if !(eps > 0.0 && eps < cap) {
        return Err(Error::InvalidParameter {
            model,
            detail: format!("outage probability must lie in (0, {cap}), got {eps}"),
        });
    }
    Ok(())
}

pub(crate) fn invalid(model: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        model,
        detail: detail.into(),
    }
}

pub(crate) fn require(model: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid(model, detail()))
    }
}

/// Solves `φ(P) = target` for monotone `φ` with `φ(0) = 0`.
pub(crate) fn bisect_phi<F: Fn(f64) -> Result<f64>>(phi: F, target: f64, scale: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = scale;
    let mut grow = 0;
    while phi(hi)? < target {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 2000 {
            return Err(Error::NoConvergence {
                function: "validity_bound",
                iterations: grow,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Central difference of `ln F` against `ln P` with a relative step.
pub(crate) fn numerical_slope<F: Fn(f64) -> Result<f64>>(cdf: F, p_r: f64) -> Result<f64> {
    let h = 1e-3;
    let up = cdf(p_r * (1.0 + h))?;
    let down = cdf(p_r / (1.0 + h))?;
    if up <= 0.0 || down <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((up.ln() - down.ln()) / (2.0 * (1.0 + h).ln()))
}

/// Serializable union of all supported models.
///
/// JSON form: `{"model": "<Variant>", "params": {...}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params")]
pub enum ChannelModel {
    TwoWave(TwoWave),
    ThreeWave(ThreeWave),
    Rayleigh(Rayleigh),
    Rician(Rician),
    #[serde(rename = "TWDP")]
    Twdp(Twdp),
    Weibull(Weibull),
    Nakagami(Nakagami),
    KappaMu(KappaMu),
    KappaMuM(KappaMuM),
    KappaMuAlpha(KappaMuAlpha),
    Suzuki(Suzuki),
    LogNormal(LogNormal),
    CascadedRayleigh(CascadedRayleigh),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            ChannelModel::TwoWave($m) => $body,
            ChannelModel::ThreeWave($m) => $body,
            ChannelModel::Rayleigh($m) => $body,
            ChannelModel::Rician($m) => $body,
            ChannelModel::Twdp($m) => $body,
            ChannelModel::Weibull($m) => $body,
            ChannelModel::Nakagami($m) => $body,
            ChannelModel::KappaMu($m) => $body,
            ChannelModel::KappaMuM($m) => $body,
            ChannelModel::KappaMuAlpha($m) => $body,
            ChannelModel::Suzuki($m) => $body,
            ChannelModel::LogNormal($m) => $body,
            ChannelModel::CascadedRayleigh($m) => $body,
        }
    };
}

fn name_of<T: Fading>(_: &T) -> &'static str {
    T::NAME
}

impl ChannelModel {
    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self = serde_json::from_str(text).map_err(|e| Error::InvalidParameter {
            model: "ChannelModel",
            detail: e.to_string(),
        })?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models serialize")
    }

    pub fn name(&self) -> &'static str {
        dispatch!(self, m => name_of(m))
    }

    pub fn validate(&self) -> Result<()> {
        dispatch!(self, m => m.validate())
    }

    pub fn mean_power(&self) -> f64 {
        dispatch!(self, m => m.mean_power())
    }

    pub fn pdf(&self, r: f64) -> Result<f64> {
        dispatch!(self, m => m.pdf(r))
    }

    pub fn cdf(&self, p_r: f64) -> Result<f64> {
        self.cdf_detailed(p_r).map(|c| c.value)
    }

    pub fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        dispatch!(self, m => m.cdf_detailed(p_r))
    }

    pub fn power_law(&self) -> Option<PowerLawTail> {
        dispatch!(self, m => m.power_law())
    }

    pub fn tail_approx(&self, p_r: f64) -> Result<f64> {
        dispatch!(self, m => m.tail_approx(p_r))
    }

    pub fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        dispatch!(self, m => m.approx_error_phi(p_r))
    }

    pub fn validity_bound(&self, eta: f64) -> Result<f64> {
        dispatch!(self, m => m.validity_bound(eta))
    }

    pub fn local_slope(&self, p_r: f64) -> Result<LocalSlope> {
        dispatch!(self, m => m.local_slope(p_r))
    }

    pub fn invert_tail(&self, eps: f64) -> Result<f64> {
        dispatch!(self, m => m.invert_tail(eps))
    }

    /// Local log-log slope `d ln F / d ln P` of the exact CDF.
    pub fn cdf_slope(&self, p_r: f64) -> Result<f64> {
        check_level(self.name(), p_r)?;
        numerical_slope(|p| self.cdf(p), p_r)
    }

    /// Whether the model provides `φ`.
    pub fn has_phi(&self) -> bool {
        self.approx_error_phi(0.0).is_ok()
    }

    /// Exact and approximate tail at `P_R`. `within_tolerance` compares `φ`
    /// with `η/(1+η)` when `φ` exists, otherwise the realized relative error
    /// `|ε̃/ε − 1|` with `η`.
    pub fn report(&self, p_r: f64, eta: f64) -> Result<TailReport> {
        check_eta(eta)?;
        let exact = self.cdf_detailed(p_r)?;
        let eps_exact = (!exact.at_precision_floor).then_some(exact.value);
        let eps_tail = self.tail_approx(p_r)?;
        let phi = match self.approx_error_phi(p_r) {
            Ok(v) => Some(v),
            Err(Error::Unsupported { .. }) => None,
            Err(e) => return Err(e),
        };
        let within_tolerance = match (phi, eps_exact) {
            (Some(phi), _) => phi <= eta / (1.0 + eta),
            (None, Some(e)) if e > 0.0 => (eps_tail / e - 1.0).abs() <= eta,
            _ => false,
        };
        Ok(TailReport {
            p_rel: p_r / self.mean_power(),
            eps_exact,
            eps_tail,
            phi,
            within_tolerance,
        })
    }
}

macro_rules! from_impl {
    ($($v:ident($t:ty)),*) => {
        $(impl From<$t> for ChannelModel {
            fn from(m: $t) -> Self {
                ChannelModel::$v(m)
            }
        })*
    };
}

from_impl!(
    TwoWave(TwoWave),
    ThreeWave(ThreeWave),
    Rayleigh(Rayleigh),
    Rician(Rician),
    Twdp(Twdp),
    Weibull(Weibull),
    Nakagami(Nakagami),
    KappaMu(KappaMu),
    KappaMuM(KappaMuM),
    KappaMuAlpha(KappaMuAlpha),
    Suzuki(Suzuki),
    LogNormal(LogNormal),
    CascadedRayleigh(CascadedRayleigh)
);
