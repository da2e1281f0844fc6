//! Deterministic parallel Monte Carlo.
//!
//! Samples are drawn in fixed-size chunks. Every chunk (and, for diversity
//! runs, every branch within a chunk) owns a ChaCha8 stream whose seed is a
//! hash of `(seed, branch, chunk)`, so results depend only on the spec and
//! not on how rayon schedules the chunks. Run inside a
//! [`rayon::ThreadPool`] to pick the worker count.

mod sampler;

pub use sampler::{cascaded_links, PowerSampler};

use crate::diversity::{BranchSet, DiversityScheme};
use crate::error::{domain, Error, Result};
use crate::models::ChannelModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const DEFAULT_CHUNK: u64 = 1 << 20;

/// Sample count, master seed and chunk size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub n: u64,
    pub seed: u64,
    #[serde(default = "default_chunk")]
    pub chunk: u64,
}

fn default_chunk() -> u64 {
    DEFAULT_CHUNK
}

impl StreamSpec {
    pub fn new(n: u64, seed: u64) -> Self {
        Self {
            n,
            seed,
            chunk: DEFAULT_CHUNK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(domain("StreamSpec", "sample count n must be >= 1"));
        }
        if self.chunk == 0 {
            return Err(domain("StreamSpec", "chunk size must be >= 1"));
        }
        Ok(())
    }

    fn chunks(&self) -> impl IndexedParallelIterator<Item = (u64, u64)> + '_ {
        let count = self.n.div_ceil(self.chunk) as usize;
        (0..count).into_par_iter().map(move |c| {
            let c = c as u64;
            (c, self.chunk.min(self.n - c * self.chunk))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub model: ChannelModel,
    #[serde(flatten)]
    pub stream: StreamSpec,
}

impl SampleSpec {
    pub fn new(model: ChannelModel, n: u64, seed: u64) -> Self {
        Self {
            model,
            stream: StreamSpec::new(n, seed),
        }
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.stream.chunk = chunk;
        self
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// The generator for one `(branch, chunk)` substream of `seed`.
pub fn substream(seed: u64, branch: u64, chunk: u64) -> ChaCha8Rng {
    let h = splitmix64(splitmix64(splitmix64(seed) ^ branch) ^ chunk);
    ChaCha8Rng::seed_from_u64(h)
}

/// Exceedance counts at a set of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalTail {
    pub thresholds: Vec<f64>,
    /// Samples with `P < threshold`.
    pub counts: Vec<u64>,
    pub n: u64,
    pub eps_hat: Vec<f64>,
    /// Half-width `1.96 √(ε̂(1−ε̂)/n)`.
    pub ci95: Vec<f64>,
}

impl EmpiricalTail {
    fn from_counts(thresholds: &[f64], counts: Vec<u64>, n: u64) -> Self {
        let nf = n as f64;
        let eps_hat: Vec<f64> = counts.iter().map(|&c| c as f64 / nf).collect();
        let ci95 = eps_hat.iter().map(|e| 1.96 * (e * (1.0 - e) / nf).sqrt()).collect();
        Self {
            thresholds: thresholds.to_vec(),
            counts,
            n,
            eps_hat,
            ci95,
        }
    }

    /// CSV with columns `threshold_dB, count, n, eps_hat, ci95`, thresholds
    /// in dB relative to `reference`.
    pub fn to_csv(&self, reference: f64) -> String {
        let mut out = String::from("threshold_dB,count,n,eps_hat,ci95\n");
        for i in 0..self.thresholds.len() {
            let db = 10.0 * (self.thresholds[i] / reference).log10();
            let _ = writeln!(
                out,
                "{:.16e},{},{},{:.16e},{:.16e}",
                db, self.counts[i], self.n, self.eps_hat[i], self.ci95[i]
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tails serialize")
    }
}

fn check_thresholds(thresholds: &[f64]) -> Result<()> {
    if thresholds.iter().any(|t| t.is_nan()) {
        return Err(domain("estimate_tail", "thresholds must not be NaN"));
    }
    if thresholds.windows(2).any(|w| w[0] > w[1]) {
        return Err(domain("estimate_tail", "thresholds must be sorted ascending"));
    }
    Ok(())
}

/// Counts of `P < t` from one pass over the samples: each sample lands in
/// the bin of the first threshold above it, then bins are prefix-summed.
fn count_chunks<F>(stream: &StreamSpec, thresholds: &[f64], draw: F) -> Vec<u64>
where
    F: Fn(u64, u64, &mut dyn FnMut(f64)) + Sync,
{
    let t = thresholds.len();
    let bins = stream
        .chunks()
        .map(|(c, len)| {
            let mut hist = vec![0u64; t + 1];
            draw(c, len, &mut |p| {
                hist[thresholds.partition_point(|&x| x <= p)] += 1;
            });
            hist
        })
        .reduce(
            || vec![0u64; t + 1],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    bins[..t]
        .iter()
        .scan(0u64, |acc, &b| {
            *acc += b;
            Some(*acc)
        })
        .collect()
}

/// Empirical `Pr(P < t)` for each threshold.
pub fn estimate_tail(spec: &SampleSpec, thresholds: &[f64]) -> Result<EmpiricalTail> {
    spec.model.validate()?;
    spec.stream.validate()?;
    check_thresholds(thresholds)?;
    let sampler = PowerSampler::new(&spec.model);
    let seed = spec.stream.seed;
    let counts = count_chunks(&spec.stream, thresholds, |c, len, sink| {
        let mut rng = substream(seed, 0, c);
        for _ in 0..len {
            sink(sampler.sample(&mut rng));
        }
    });
    Ok(EmpiricalTail::from_counts(thresholds, counts, spec.stream.n))
}

/// Empirical outage of the combined power: `max` for SC, sum for MRC.
/// Branch `m` of chunk `c` uses substream `(m, c)`, so branch 0 reproduces
/// [`estimate_tail`] exactly.
pub fn simulate_diversity(
    set: &BranchSet,
    scheme: DiversityScheme,
    stream: &StreamSpec,
    thresholds: &[f64],
) -> Result<EmpiricalTail> {
    stream.validate()?;
    check_thresholds(thresholds)?;
    let samplers: Vec<PowerSampler> = set.branches().iter().map(PowerSampler::new).collect();
    let seed = stream.seed;
    let counts = count_chunks(stream, thresholds, |c, len, sink| {
        let mut rngs: Vec<ChaCha8Rng> = (0..samplers.len() as u64).map(|m| substream(seed, m, c)).collect();
        for _ in 0..len {
            let mut acc = 0.0f64;
            for (s, rng) in samplers.iter().zip(rngs.iter_mut()) {
                let p = s.sample(rng);
                acc = match scheme {
                    DiversityScheme::SelectionCombining => acc.max(p),
                    DiversityScheme::MaximumRatioCombining => acc + p,
                };
            }
            sink(acc);
        }
    });
    Ok(EmpiricalTail::from_counts(thresholds, counts, stream.n))
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Mean of the sampled power, merged chunk by chunk in index order.
pub fn sample_mean(spec: &SampleSpec) -> Result<MeanEstimate> {
    spec.model.validate()?;
    spec.stream.validate()?;
    let sampler = PowerSampler::new(&spec.model);
    let seed = spec.stream.seed;
    let parts: Vec<(f64, f64, f64)> = spec
        .stream
        .chunks()
        .map(|(c, len)| {
            let mut rng = substream(seed, 0, c);
            let (mut mean, mut m2) = (0.0, 0.0);
            for i in 0..len {
                let x = sampler.sample(&mut rng);
                let d = x - mean;
                mean += d / (i + 1) as f64;
                m2 += d * (x - mean);
            }
            (len as f64, mean, m2)
        })
        .collect();
    let (n, mean, m2) = parts.into_iter().fold((0.0, 0.0, 0.0), |(na, ma, sa), (nb, mb, sb)| {
        let n = na + nb;
        let d = mb - ma;
        (n, ma + d * nb / n, sa + sb + d * d * na * nb / n)
    });
    Ok(MeanEstimate {
        mean,
        std_error: (m2 / (n - 1.0).max(1.0) / n).sqrt(),
    })
}

/// Fit window for [`fit_loglog_slope`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SlopeWindow {
    /// Thresholds `P_R` in `[lo, hi]`.
    Threshold(f64, f64),
    /// Points with `ε̂` in `[lo, hi]`.
    Probability(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub points: usize,
}

/// Least-squares slope of `ln ε̂` against `ln P_R` over the points in the
/// window with nonzero counts.
pub fn fit_loglog_slope(tail: &EmpiricalTail, window: SlopeWindow) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = tail
        .thresholds
        .iter()
        .zip(&tail.eps_hat)
        .filter(|(&t, &e)| {
            e > 0.0
                && t > 0.0
                && match window {
                    SlopeWindow::Threshold(lo, hi) => (lo..=hi).contains(&t),
                    SlopeWindow::Probability(lo, hi) => (lo..=hi).contains(&e),
                }
        })
        .map(|(t, e)| (t.ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} thresholds with nonzero counts in the window, need at least 3",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all thresholds in the window coincide".into()));
    }
    let slope = sxy / sxx;
    let sse: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    Ok(SlopeFit {
        slope,
        stderr: (sse / (k - 2.0) / sxx).sqrt(),
        points: pts.len(),
    })
}
