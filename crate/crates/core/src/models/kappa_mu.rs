//! κ-μ fading and its Nakagami-m (`κμ/m`) and inverse-Gamma (`κμ/α`)
//! shadowed variants.

use super::simple::check_mean;
use super::{
    check_eta, check_level, check_r, require, CdfEstimate, CdfMethod, Fading, PowerLawTail,
};
use crate::error::Result;
use crate::quad::{integrate_to_infinity, integrate_with_breaks, QuadOptions};
use crate::specfun::{
    gen_laguerre_all, ln_bessel_i, ln_beta, ln_gamma, ln_hyp1f1, marcum_q_complement, reg_lower_gamma,
};
use serde::{Deserialize, Serialize};

/// μ clusters, each with specular-to-diffuse power ratio κ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaMu {
    pub kappa: f64,
    pub mu: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl KappaMu {
    pub fn new(kappa: f64, mu: f64, a: f64) -> Self {
        Self { kappa, mu, a }
    }

    /// CDF at relative level `p`.
    pub(crate) fn cdf_rel(kappa: f64, mu: f64, p: f64) -> Result<f64> {
        if p <= 0.0 {
            return Ok(0.0);
        }
        if kappa == 0.0 {
            return reg_lower_gamma(mu, mu * p);
        }
        marcum_q_complement(mu, (2.0 * kappa * mu).sqrt(), (2.0 * (1.0 + kappa) * mu * p).sqrt())
    }

    /// Density of the relative power `p` (unit mean).
    pub(crate) fn ln_pdf_rel(kappa: f64, mu: f64, p: f64) -> Result<f64> {
        if p <= 0.0 {
            return Ok(if mu < 1.0 {
                f64::INFINITY
            } else if mu == 1.0 {
                ((1.0 + kappa) * (-kappa).exp()).ln()
            } else {
                f64::NEG_INFINITY
            });
        }
        let c = (1.0 + kappa) * mu;
        if kappa == 0.0 {
            return Ok(mu * mu.ln() - ln_gamma(mu) + (mu - 1.0) * p.ln() - mu * p);
        }
        let z = 2.0 * mu * (kappa * (1.0 + kappa) * p).sqrt();
        Ok(mu.ln() + 0.5 * (mu + 1.0) * (1.0 + kappa).ln() - 0.5 * (mu - 1.0) * kappa.ln() - kappa * mu
            + 0.5 * (mu - 1.0) * p.ln()
            - c * p
            + ln_bessel_i(mu - 1.0, z)?)
    }

    fn alpha(kappa: f64, mu: f64) -> f64 {
        (mu * ((1.0 + kappa) * mu).ln() - kappa * mu - ln_gamma(mu + 1.0)).exp()
    }
}

fn check_kappa_mu(model: &'static str, kappa: f64, mu: f64, a: f64) -> Result<()> {
    check_mean(model, a)?;
    require(model, kappa >= 0.0 && kappa.is_finite(), || format!("kappa must be finite and >= 0, got {kappa}"))?;
    require(model, mu > 0.0 && mu.is_finite(), || format!("mu must be finite and > 0, got {mu}"))
}

impl Fading for KappaMu {
    const NAME: &'static str = "KappaMu";

    fn validate(&self) -> Result<()> {
        check_kappa_mu(Self::NAME, self.kappa, self.mu, self.a)
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        let (k, mu) = (self.kappa, self.mu);
        if r == 0.0 {
            // f_p(p) ~ μ^μ (1+κ)^μ e^{−κμ} p^{μ−1} / Γ(μ) near the origin.
            return Ok(if mu > 0.5 {
                0.0
            } else if mu < 0.5 {
                f64::INFINITY
            } else {
                let c = (mu * (mu * (1.0 + k)).ln() - k * mu - ln_gamma(mu)).exp();
                2.0 * c / self.a.sqrt()
            });
        }
        let p = r * r / self.a;
        if p.is_infinite() {
            return Ok(0.0);
        }
        if p == 0.0 {
            // Underflowed level: keep only the leading power of p.
            let ln_c = mu * (mu * (1.0 + k)).ln() - k * mu - ln_gamma(mu);
            let ln_p = 2.0 * r.ln() - self.a.ln();
            return Ok((std::f64::consts::LN_2 + r.ln() - self.a.ln() + ln_c + (mu - 1.0) * ln_p).exp());
        }
        Ok(2.0 * r / self.a * Self::ln_pdf_rel(k, mu, p)?.exp())
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let v = Self::cdf_rel(self.kappa, self.mu, p_r / self.a)?;
        Ok(CdfEstimate {
            method: CdfMethod::Series,
            ..CdfEstimate::closed(v)
        })
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        Some(PowerLawTail::new(Self::alpha(self.kappa, self.mu), self.mu, self.a))
    }

    fn approx_error_phi(&self, p_r: f64) -> Result<f64> {
        check_level(Self::NAME, p_r)?;
        let (k, m) = (self.kappa, self.mu);
        Ok((0.5 * k * m).exp() * ((k + 1.0) * m * p_r / self.a).exp_m1())
    }

    fn validity_bound(&self, eta: f64) -> Result<f64> {
        check_eta(eta)?;
        let t = eta / (1.0 + eta);
        let (k, m) = (self.kappa, self.mu);
        Ok(self.a * ((-0.5 * k * m).exp() * t).ln_1p() / ((k + 1.0) * m))
    }
}

/// Truncated Laguerre expansion of the κ-μ CDF with a rigorous bound on the
/// omitted terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTail {
    pub value: f64,
    pub remainder_bound: f64,
    pub n_terms: usize,
}

/// `ε ≈ e^{−κμ} Σ_{n<N} (−1)^n L_n^{(μ−1)}(κμ) x^{n+μ} / Γ(μ+n+1)`,
/// `x = (1+κ)μp`. The first term is the power-law tail. Bounding
/// `|L_n^{(μ−1)}(y)| ≤ Γ(μ+n)/(n!Γ(μ)) e^{y/2}` gives the remainder bound
/// `ε̃ e^{κμ/2} (e^x − Σ_{n<N} x^n/n!)`.
pub fn kappamu_exact_tail_series(model: &KappaMu, p_r: f64, n_terms: usize) -> Result<SeriesTail> {
    model.validate()?;
    check_level(KappaMu::NAME, p_r)?;
    require(KappaMu::NAME, n_terms >= 1, || "n_terms must be >= 1".into())?;
    let (k, mu) = (model.kappa, model.mu);
    let p = p_r / model.a;
    let x = (1.0 + k) * mu * p;
    let y = k * mu;
    let lag = gen_laguerre_all(n_terms, mu - 1.0, y);
    let mut value = 0.0;
    let ln_x = x.ln();
    for (n, l) in lag.iter().enumerate() {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        value += sign * l * (-y + (nf + mu) * ln_x - ln_gamma(mu + nf + 1.0)).exp();
    }
    let eps_tail = KappaMu::alpha(k, mu) * p.powf(mu);
    // e^x − Σ_{n<N} x^n/n! as the tail of the exponential series.
    let mut term = 1.0;
    for n in 1..=n_terms {
        term *= x / n as f64;
    }
    let mut exp_tail = 0.0;
    let mut n = n_terms;
    while term > 1e-17 * exp_tail || exp_tail == 0.0 {
        exp_tail += term;
        n += 1;
        term *= x / n as f64;
        if term == 0.0 {
            break;
        }
    }
    Ok(SeriesTail {
        value,
        remainder_bound: eps_tail * (0.5 * y).exp() * exp_tail,
        n_terms,
    })
}

/// κ-μ fading whose specular part is scaled by a unit-power Nakagami-m
/// amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaMuM {
    pub kappa: f64,
    pub mu: f64,
    pub m: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl KappaMuM {
    pub fn new(kappa: f64, mu: f64, m: f64, a: f64) -> Self {
        Self { kappa, mu, m, a }
    }

    fn shadow_factor_ln(&self) -> f64 {
        self.m * (self.m / (self.kappa * self.mu + self.m)).ln()
    }

    /// Argument scale of the ₁F₁ factor.
    fn kummer_scale(&self) -> f64 {
        let (k, mu, m) = (self.kappa, self.mu, self.m);
        k * (1.0 + k) * mu * mu / (k * mu + m)
    }

    /// `ln f(q) − (μ−1) ln q` for the relative power `q`.
    fn ln_pdf_reduced(&self, q: f64) -> Result<f64> {
        let (k, mu) = (self.kappa, self.mu);
        let c = mu * (mu * (1.0 + k)).ln() - ln_gamma(mu) + self.shadow_factor_ln();
        Ok(c - (1.0 + k) * mu * q + ln_hyp1f1(self.m, mu, self.kummer_scale() * q)?)
    }
}

impl Fading for KappaMuM {
    const NAME: &'static str = "KappaMuM";

    fn validate(&self) -> Result<()> {
        check_kappa_mu(Self::NAME, self.kappa, self.mu, self.a)?;
        require(Self::NAME, self.m > 0.0 && self.m.is_finite(), || {
            format!("m must be finite and > 0, got {}", self.m)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if r == 0.0 {
            return Ok(if self.mu > 0.5 { 0.0 } else { f64::INFINITY });
        }
        let q = r * r / self.a;
        if q.is_infinite() {
            return Ok(0.0);
        }
        let ln = self.ln_pdf_reduced(q)? + (self.mu - 1.0) * q.ln();
        Ok(2.0 * r / self.a * ln.exp())
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let p = p_r / self.a;
        if p == 0.0 {
            return Ok(CdfEstimate::closed(0.0));
        }
        // u = q^μ absorbs the q^{μ−1} factor: f(q) dq = (1/μ) g(q(u)) du.
        let mu = self.mu;
        let upper = p.powf(mu);
        let mut points = vec![0.0];
        for q in [0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let u = f64::powf(q, mu);
            if u < upper {
                points.push(u);
            }
        }
        points.push(upper);
        let mut failure = None;
        let r = integrate_with_breaks(
            |u: f64| {
                let q = u.powf(1.0 / mu);
                match self.ln_pdf_reduced(q) {
                    Ok(l) => l.exp() / mu,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            &points,
            QuadOptions::with_tol(0.0, 1e-11),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(CdfEstimate::quadrature(r.value, r.error))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        let (k, mu) = (self.kappa, self.mu);
        let ln_alpha = mu * (mu * (1.0 + k)).ln() - ln_gamma(mu + 1.0) + self.shadow_factor_ln();
        Some(PowerLawTail::new(ln_alpha.exp(), mu, self.a))
    }
}

/// κ-μ fading with an inverse-Gamma distributed mean power of shape `α`,
/// normalized to unit mean (scale `α − 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaMuAlpha {
    pub kappa: f64,
    pub mu: f64,
    pub alpha_ig: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl KappaMuAlpha {
    pub fn new(kappa: f64, mu: f64, alpha_ig: f64, a: f64) -> Self {
        Self { kappa, mu, alpha_ig, a }
    }

    /// Inverse-Gamma scale giving unit mean shadowing power.
    pub fn beta_scale(&self) -> f64 {
        self.alpha_ig - 1.0
    }

    /// `E_u[g(u)]` for `u = 1/ω ~ Gamma(α, rate α−1)`.
    fn shadow_average<G: FnMut(f64) -> Result<f64>>(&self, mut g: G, extra_breaks: &[f64]) -> Result<(f64, f64)> {
        let alpha = self.alpha_ig;
        let rate = self.beta_scale();
        let ln_norm = alpha * rate.ln() - ln_gamma(alpha);
        let mode = ((alpha + self.mu - 1.0) / rate).max(1e-3);
        let mut breaks: Vec<f64> = (-6..=10).map(|k| mode * f64::powi(2.0, k)).collect();
        breaks.extend_from_slice(extra_breaks);
        breaks.sort_by(f64::total_cmp);
        let mut failure = None;
        let r = integrate_to_infinity(
            |u: f64| {
                if u <= 0.0 {
                    return 0.0;
                }
                let w = (ln_norm + (alpha - 1.0) * u.ln() - rate * u).exp();
                if w == 0.0 {
                    return 0.0;
                }
                match g(u) {
                    Ok(v) => w * v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            &breaks,
            QuadOptions::with_tol(0.0, 1e-11),
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((r.value, r.error))
    }

    /// The expanded tail with the `(cp + 1)^{α−1}` denominator restored.
    pub fn tail_approx_heuristic(&self, p_r: f64) -> Result<f64> {
        self.validate()?;
        check_level(Self::NAME, p_r)?;
        let (k, mu, alpha) = (self.kappa, self.mu, self.alpha_ig);
        let p = p_r / self.a;
        if p == 0.0 {
            return Ok(0.0);
        }
        let c = mu * (1.0 + k) / (alpha - 1.0);
        let cp = c * p;
        let frac = cp / (cp + 1.0);
        let ln = -k * mu - mu.ln() - ln_beta(alpha, mu) - (alpha - 1.0) * cp.ln_1p()
            + mu * frac.ln()
            + ln_hyp1f1(alpha + mu, mu + 1.0, k * mu * frac)?;
        Ok(ln.exp())
    }
}

impl Fading for KappaMuAlpha {
    const NAME: &'static str = "KappaMuAlpha";

    fn validate(&self) -> Result<()> {
        check_kappa_mu(Self::NAME, self.kappa, self.mu, self.a)?;
        require(Self::NAME, self.alpha_ig > 1.0 && self.alpha_ig.is_finite(), || {
            format!("alpha_ig must be finite and > 1 for unit-mean shadowing, got {}", self.alpha_ig)
        })
    }

    fn mean_power(&self) -> f64 {
        self.a
    }

    fn pdf(&self, r: f64) -> Result<f64> {
        check_r(Self::NAME, r)?;
        if r == 0.0 {
            return Ok(if self.mu > 0.5 { 0.0 } else { f64::INFINITY });
        }
        let p = r * r / self.a;
        // Beyond this the p^{−α−1} power tail is below the f64 range.
        if (self.alpha_ig + 1.0) * p.ln() > 750.0 {
            return Ok(0.0);
        }
        let (k, mu) = (self.kappa, self.mu);
        // Peak of the conditional density sits near u ≈ 1/p.
        let (v, _) = self.shadow_average(
            |u| Ok(u * KappaMu::ln_pdf_rel(k, mu, p * u)?.exp()),
            &[0.25 / p, 0.5 / p, 1.0 / p, 2.0 / p, 4.0 / p],
        )?;
        Ok(2.0 * r / self.a * v)
    }

    fn cdf_detailed(&self, p_r: f64) -> Result<CdfEstimate> {
        check_level(Self::NAME, p_r)?;
        let p = p_r / self.a;
        if p == 0.0 {
            return Ok(CdfEstimate::closed(0.0));
        }
        let (k, mu) = (self.kappa, self.mu);
        let (v, err) = self.shadow_average(
            |u| KappaMu::cdf_rel(k, mu, p * u),
            &[0.25 / p, 0.5 / p, 1.0 / p, 2.0 / p, 4.0 / p],
        )?;
        Ok(CdfEstimate::quadrature(v, err))
    }

    fn power_law(&self) -> Option<PowerLawTail> {
        let (k, mu, alpha) = (self.kappa, self.mu, self.alpha_ig);
        let shadow = ln_gamma(alpha + mu) - mu * (alpha - 1.0).ln() - ln_gamma(alpha);
        Some(PowerLawTail::new(KappaMu::alpha(k, mu) * shadow.exp(), mu, self.a))
    }
}
