//! Generative constructions of the received power for every model.

use crate::models::ChannelModel;
use crate::specfun::gamma;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson, StandardNormal};
use std::f64::consts::TAU;

/// Power of `2μ` real Gaussian dimensions with a specular offset, or the
/// Poisson–Gamma mixture when `2μ` is not an integer. Returns the
/// normalized power with mean `μ(1 + κ')` where `κ'μ` is the specular power.
#[derive(Debug, Clone)]
struct ClusterPower {
    mu: f64,
    dims: Option<u32>,
}

impl ClusterPower {
    fn new(mu: f64) -> Self {
        let d = 2.0 * mu;
        let dims = (d.fract() == 0.0 && d <= 64.0).then_some(d as u32);
        Self { mu, dims }
    }

    /// Sample with specular power `s` on top of unit-variance-per-complex-
    /// dimension diffuse power.
    fn sample<R: Rng + ?Sized>(&self, s: f64, rng: &mut R) -> f64 {
        match self.dims {
            Some(d) => {
                let mut acc = 0.0;
                for i in 0..d {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = z * std::f64::consts::FRAC_1_SQRT_2 + if i == 0 { s.sqrt() } else { 0.0 };
                    acc += x * x;
                }
                acc
            }
            None => {
                let k = if s > 0.0 {
                    Poisson::new(s).expect("finite positive rate").sample(rng)
                } else {
                    0.0
                };
                Gamma::new(self.mu + k, 1.0).expect("positive shape").sample(rng)
            }
        }
    }
}

/// Precomputed sampler for one model.
#[derive(Debug, Clone)]
pub struct PowerSampler {
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Waves(Vec<f64>),
    Diffuse { specular: Vec<f64>, sigma: f64 },
    Weibull { scale: f64, inv_beta: f64 },
    Nakagami(Gamma<f64>),
    KappaMu { cluster: ClusterPower, specular: f64, scale: f64 },
    KappaMuM { cluster: ClusterPower, specular: f64, shadow: Gamma<f64>, scale: f64 },
    KappaMuAlpha { cluster: ClusterPower, specular: f64, inverse_mean: Gamma<f64>, scale: f64 },
    Suzuki { mu: f64, sigma: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Cascaded { corr: f64, scale: f64 },
}

impl PowerSampler {
    pub fn new(model: &ChannelModel) -> Self {
        let kind = match *model {
            ChannelModel::TwoWave(m) => Kind::Waves(vec![m.rho1, m.rho2]),
            ChannelModel::ThreeWave(m) => Kind::Waves(vec![m.rho1, m.rho2, m.rho3]),
            ChannelModel::Rayleigh(m) => Kind::Diffuse {
                specular: vec![],
                sigma: (0.5 * m.a).sqrt(),
            },
            ChannelModel::Rician(m) => Kind::Diffuse {
                specular: vec![(m.k1 / (1.0 + m.k1) * m.a).sqrt()],
                sigma: (0.5 * m.a / (1.0 + m.k1)).sqrt(),
            },
            ChannelModel::Twdp(m) => {
                let (r1, r2) = m.amplitudes();
                Kind::Diffuse {
                    specular: vec![r1, r2],
                    sigma: (0.5 * m.diffuse_power()).sqrt(),
                }
            }
            ChannelModel::Weibull(m) => Kind::Weibull {
                scale: m.a / gamma(1.0 + 1.0 / m.beta_w),
                inv_beta: 1.0 / m.beta_w,
            },
            ChannelModel::Nakagami(m) => Kind::Nakagami(Gamma::new(m.m, m.a / m.m).expect("valid Nakagami")),
            ChannelModel::KappaMu(m) => Kind::KappaMu {
                cluster: ClusterPower::new(m.mu),
                specular: m.kappa * m.mu,
                scale: m.a / ((1.0 + m.kappa) * m.mu),
            },
            ChannelModel::KappaMuM(m) => Kind::KappaMuM {
                cluster: ClusterPower::new(m.mu),
                specular: m.kappa * m.mu,
                shadow: Gamma::new(m.m, 1.0 / m.m).expect("valid shadowing"),
                scale: m.a / ((1.0 + m.kappa) * m.mu),
            },
            ChannelModel::KappaMuAlpha(m) => Kind::KappaMuAlpha {
                cluster: ClusterPower::new(m.mu),
                specular: m.kappa * m.mu,
                inverse_mean: Gamma::new(m.alpha_ig, 1.0 / m.beta_scale()).expect("valid shadowing"),
                scale: m.a / ((1.0 + m.kappa) * m.mu),
            },
            ChannelModel::Suzuki(m) => Kind::Suzuki {
                mu: m.mu_l(),
                sigma: m.sigma_l(),
            },
            ChannelModel::LogNormal(m) => Kind::LogNormal {
                mu: m.mu_l(),
                sigma: m.sigma_l(),
            },
            ChannelModel::CascadedRayleigh(m) => Kind::Cascaded {
                corr: m.gamma_corr.sqrt(),
                scale: m.a / (1.0 + m.gamma_corr),
            },
        };
        Self { kind }
    }

    /// One draw of the received power.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            Kind::Waves(rhos) => {
                let (mut re, mut im) = (rhos[0], 0.0);
                for r in &rhos[1..] {
                    let (s, c) = (rng.random::<f64>() * TAU).sin_cos();
                    re += r * c;
                    im += r * s;
                }
                re * re + im * im
            }
            Kind::Diffuse { specular, sigma } => {
                let x: f64 = rng.sample(StandardNormal);
                let y: f64 = rng.sample(StandardNormal);
                let (mut re, mut im) = (sigma * x, sigma * y);
                if let Some((first, rest)) = specular.split_first() {
                    re += first;
                    for r in rest {
                        let (s, c) = (rng.random::<f64>() * TAU).sin_cos();
                        re += r * c;
                        im += r * s;
                    }
                }
                re * re + im * im
            }
            Kind::Weibull { scale, inv_beta } => {
                let e: f64 = rng.sample(Exp1);
                scale * e.powf(*inv_beta)
            }
            Kind::Nakagami(g) => g.sample(rng),
            Kind::KappaMu { cluster, specular, scale } => scale * cluster.sample(*specular, rng),
            Kind::KappaMuM {
                cluster,
                specular,
                shadow,
                scale,
            } => {
                let xi2 = shadow.sample(rng);
                scale * cluster.sample(specular * xi2, rng)
            }
            Kind::KappaMuAlpha {
                cluster,
                specular,
                inverse_mean,
                scale,
            } => {
                let u = inverse_mean.sample(rng);
                scale * cluster.sample(*specular, rng) / u
            }
            Kind::Suzuki { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                let e: f64 = rng.sample(Exp1);
                (2.0 * (mu + sigma * z)).exp() * e
            }
            Kind::LogNormal { mu, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                (2.0 * (mu + sigma * z)).exp()
            }
            Kind::Cascaded { corr, scale } => {
                let (p1, p2) = cascaded_links(*corr, rng);
                scale * p1 * p2
            }
        }
    }
}

/// Unit-mean powers `|V₁|², |V₂|²` of two complex Gaussians with complex
/// correlation `c`.
pub fn cascaded_links<R: Rng + ?Sized>(c: f64, rng: &mut R) -> (f64, f64) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let g1: (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
    let g2: (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
    let s = (1.0 - c * c).max(0.0).sqrt();
    let v1 = (h * g1.0, h * g1.1);
    let v2 = (h * (c * g1.0 + s * g2.0), h * (c * g1.1 + s * g2.1));
    (v1.0 * v1.0 + v1.1 * v1.1, v2.0 * v2.0 + v2.1 * v2.1)
}
