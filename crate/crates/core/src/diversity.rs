//! Receive diversity over independent, non-identically distributed branches.
//!
//! Selection combining picks the strongest branch, so its outage is the
//! product of the branch CDFs. Maximum-ratio combining adds branch powers;
//! for power-law branches the outage is that same product shifted by
//! `α_MRC = ∏Γ(1+β_m) / Γ(1+Σβ_m)`.

use crate::error::{domain, Error, Result};
use crate::models::{ChannelModel, PowerLawTail};
use crate::montecarlo::{self, EmpiricalTail, StreamSpec};
use crate::specfun::{ln_gamma, LogProbability};
use serde::{Deserialize, Serialize};

/// Independent receive branches. Correlation between branches is not
/// representable; unknown JSON fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawBranchSet")]
pub struct BranchSet {
    branches: Vec<ChannelModel>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranchSet {
    branches: Vec<ChannelModel>,
}

impl TryFrom<RawBranchSet> for BranchSet {
    type Error = Error;
    fn try_from(raw: RawBranchSet) -> Result<Self> {
        Self::new(raw.branches)
    }
}

impl BranchSet {
    pub fn new(branches: Vec<ChannelModel>) -> Result<Self> {
        if branches.is_empty() {
            return Err(domain("BranchSet", "at least one branch is required"));
        }
        for b in &branches {
            b.validate()?;
        }
        Ok(Self { branches })
    }

    /// `M` copies of one model.
    pub fn iid(model: ChannelModel, m: usize) -> Result<Self> {
        Self::new(vec![model; m])
    }

    pub fn branches(&self) -> &[ChannelModel] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Branch power ratios `A_m / A_1`.
    pub fn bpr(&self) -> Vec<f64> {
        let a1 = self.branches[0].mean_power();
        self.branches.iter().map(|b| b.mean_power() / a1).collect()
    }

    /// Power-law tails of all branches; fails on the first branch without one.
    pub fn power_laws(&self) -> Result<Vec<PowerLawTail>> {
        self.branches
            .iter()
            .map(|b| {
                b.power_law().ok_or(Error::Unsupported {
                    model: b.name(),
                    what: "power-law tail",
                })
            })
            .collect()
    }

    /// `φ_m(P_R)` of every branch.
    pub fn phis(&self, p_r: f64) -> Result<Vec<f64>> {
        self.branches
            .iter()
            .enumerate()
            .map(|(i, b)| match b.approx_error_phi(p_r) {
                Err(Error::Unsupported { model, .. }) => Err(Error::MissingBranchBound { branch: i, model }),
                other => other,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiversityScheme {
    #[serde(rename = "SC")]
    SelectionCombining,
    #[serde(rename = "MRC")]
    MaximumRatioCombining,
}

impl DiversityScheme {
    pub fn label(self) -> &'static str {
        match self {
            Self::SelectionCombining => "SC",
            Self::MaximumRatioCombining => "MRC",
        }
    }
}

impl std::str::FromStr for DiversityScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(Self::SelectionCombining),
            "mrc" => Ok(Self::MaximumRatioCombining),
            _ => Err(domain("DiversityScheme", format!("expected sc or mrc, got {s:?}"))),
        }
    }
}

/// JSON form `{"branches": [...], "scheme": "SC" | "MRC"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiversityConfig {
    pub branches: Vec<ChannelModel>,
    pub scheme: DiversityScheme,
}

impl DiversityConfig {
    pub fn branch_set(&self) -> Result<BranchSet> {
        BranchSet::new(self.branches.clone())
    }
}

/// `∏ F_m(P_R)`.
pub fn sc_outage(set: &BranchSet, p_r: f64) -> Result<LogProbability> {
    let mut acc = LogProbability::ONE;
    for b in set.branches() {
        let f = b.cdf(p_r)?;
        if f == 0.0 {
            return Ok(LogProbability::ZERO);
        }
        acc = acc * LogProbability::from_prob(f);
    }
    Ok(acc)
}

fn check_slopes(betas: &[f64]) -> Result<()> {
    if betas.is_empty() {
        return Err(domain("mrc_offset", "no slopes given"));
    }
    if let Some(b) = betas.iter().find(|b| !(**b > 0.0) || !b.is_finite()) {
        return Err(domain("mrc_offset", format!("slopes must be finite and > 0, got {b}")));
    }
    Ok(())
}

/// `ln α_MRC`.
pub fn ln_mrc_offset(betas: &[f64]) -> Result<f64> {
    check_slopes(betas)?;
    if betas.len() == 1 {
        return Ok(0.0);
    }
    let num: f64 = betas.iter().map(|b| ln_gamma(1.0 + b)).sum();
    let total: f64 = betas.iter().sum();
    Ok(num - ln_gamma(1.0 + total))
}

/// `α_MRC = ∏Γ(1+β_m) / Γ(1+Σβ_m)`.
pub fn mrc_offset(betas: &[f64]) -> Result<f64> {
    ln_mrc_offset(betas).map(f64::exp)
}

/// `α_MRC ∏ α_m (P_R/A_m)^{β_m}`.
pub fn mrc_outage_powerlaw(laws: &[PowerLawTail], p_r: f64) -> Result<LogProbability> {
    let betas: Vec<f64> = laws.iter().map(|l| l.beta_slope).collect();
    let offset = ln_mrc_offset(&betas)?;
    if !(p_r >= 0.0) {
        return Err(domain("mrc_outage_powerlaw", format!("power level must be >= 0, got {p_r}")));
    }
    if p_r == 0.0 {
        return Ok(LogProbability::ZERO);
    }
    let ln: f64 = offset + laws.iter().map(|l| l.ln_eval(p_r)).sum::<f64>();
    Ok(LogProbability::from_ln(ln))
}

/// Equal-slope form `Γ(1+β)^M / Γ(1+Mβ) · (∏α_m) · ∏(P_R/A_m)^β`.
pub fn mrc_outage_equal_slope(laws: &[PowerLawTail], p_r: f64) -> Result<LogProbability> {
    let beta = laws.first().map(|l| l.beta_slope).unwrap_or(f64::NAN);
    check_slopes(&[beta])?;
    if laws.iter().any(|l| l.beta_slope != beta) {
        return Err(domain("mrc_outage_equal_slope", "branch slopes differ"));
    }
    if p_r == 0.0 {
        return Ok(LogProbability::ZERO);
    }
    let m = laws.len() as f64;
    let offset = m * ln_gamma(1.0 + beta) - ln_gamma(1.0 + m * beta);
    let alphas: f64 = laws.iter().map(|l| l.alpha_offset.ln()).sum();
    let levels: f64 = laws.iter().map(|l| (p_r / l.mean_power).ln()).sum();
    Ok(LogProbability::from_ln(offset + alphas + beta * levels))
}

/// `1/(M!)^β`.
pub fn mrc_heuristic_offset(m: usize, beta: f64) -> f64 {
    (-beta * ln_gamma(m as f64 + 1.0)).exp()
}

/// `α_MRC(β_1(P_R), …, β_M(P_R)) · ∏ F_m(P_R)`, where `β_m(P_R)` is the
/// local log-log slope of branch `m`'s exact CDF at the queried level.
/// Fails with a domain error where a branch CDF has saturated (zero slope).
pub fn mrc_outage_generic(set: &BranchSet, p_r: f64) -> Result<LogProbability> {
    let sc = sc_outage(set, p_r)?;
    if set.len() == 1 || sc == LogProbability::ZERO {
        return Ok(sc);
    }
    let betas = set
        .branches()
        .iter()
        .map(|b| b.cdf_slope(p_r))
        .collect::<Result<Vec<_>>>()?;
    Ok(LogProbability::from_ln(ln_mrc_offset(&betas)? + sc.ln()))
}

/// MRC approximation error bound from branch bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MrcPhi {
    /// `(1 + max φ)^M − 1`.
    pub exact: f64,
    /// `M · max φ`.
    pub bernoulli: f64,
}

pub fn mrc_phi(phis: &[f64]) -> Result<MrcPhi> {
    if let Some(p) = phis.iter().find(|p| !(**p >= 0.0)) {
        return Err(domain("mrc_phi", format!("branch bounds must be >= 0, got {p}")));
    }
    let m = phis.len() as f64;
    let max = phis.iter().copied().fold(0.0, f64::max);
    Ok(MrcPhi {
        exact: (m * max.ln_1p()).exp_m1(),
        bernoulli: m * max,
    })
}

/// [`mrc_phi`] over the branch bounds of `set` at `P_R`.
pub fn mrc_phi_at(set: &BranchSet, p_r: f64) -> Result<MrcPhi> {
    mrc_phi(&set.phis(p_r)?)
}

/// Monte Carlo reference for `scheme` at the given thresholds.
pub fn simulate_reference(
    set: &BranchSet,
    scheme: DiversityScheme,
    stream: &StreamSpec,
    thresholds: &[f64],
) -> Result<EmpiricalTail> {
    montecarlo::simulate_diversity(set, scheme, stream, thresholds)
}
