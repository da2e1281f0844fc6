//! Lower-tail statistics of wireless fading channels at ultra-reliable
//! operating points.
//!
//! The crate evaluates exact outage probabilities `ε = F(P_R)` for a catalog
//! of fading models, their power-law tail approximations
//! `ε̃ = α (P_R/A)^β`, two-sided approximation-error bounds, tail inversions,
//! and receive-diversity (selection / maximum-ratio combining) outage. A
//! deterministic parallel Monte Carlo engine provides an independent check
//! of every analytic curve.
//!
//! Module map:
//!
//! - [`specfun`]: Bessel I/K, Marcum Q, incomplete gamma, Kummer ₁F₁,
//!   elliptic K, Lambert W, erfc, generalized Laguerre polynomials.
//! - [`quad`]: adaptive Gauss–Kronrod integration used where no closed form
//!   exists.
//! - [`models`]: the channel-model catalog.
//! - [`diversity`]: SC/MRC combining.
//! - [`montecarlo`]: rare-event sampler and empirical tails.

pub mod diversity;
pub mod error;
pub mod models;
pub mod montecarlo;
pub mod quad;
pub mod specfun;

pub use diversity::{BranchSet, DiversityScheme};
pub use error::{Error, Result};
pub use models::{ChannelModel, PowerLawTail, TailReport};
pub use montecarlo::{EmpiricalTail, SampleSpec};
pub use specfun::{LogProbability, WBranch};
