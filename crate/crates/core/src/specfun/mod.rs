//! Special functions used by the channel models.
//!
//! Every function that can underflow in the ultra-reliable regime has a log
//! variant; tail quantities are computed without subtracting from one.

mod bessel;
mod elliptic;
mod erf;
mod gamma;
mod kummer;
mod lambert;
mod laguerre;
mod logprob;
mod marcum;

pub use bessel::{bessel_i, bessel_i0_m1, bessel_i_scaled, bessel_xk1_m1, bessel_k, bessel_k_scaled, ln_bessel_i, ln_bessel_k};
pub use elliptic::{carlson_rf, elliptic_k};
pub use erf::{erf, erfc, ln_erfc};
pub use gamma::{
    gamma, ln_beta, ln_gamma, ln_gamma_ratio, ln_reg_lower_gamma, ln_reg_upper_gamma, reg_lower_gamma,
    reg_upper_gamma, EULER_GAMMA,
};
pub use kummer::{hyp1f1, ln_hyp1f1};
pub use lambert::{lambert_w, WBranch};
pub use laguerre::{gen_laguerre, gen_laguerre_all};
pub use logprob::LogProbability;
pub use marcum::{ln_marcum_q, ln_marcum_q_complement, marcum_q, marcum_q_complement};
