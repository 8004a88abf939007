//! Success/failure probabilities, concentration bounds, repetition counts,
//! cost and the width/repetition trade-off.
//!
//! Per-realization probabilities are rational and are generic over
//! [`ExactScalar`]; the bounds are plain `f64`.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::nblp::SampleSet;
use crate::num::ExactScalar;
use crate::qram::{predicted_qram_metrics, QramMode};

fn two_pow<S: ExactScalar>(k: usize) -> S {
    let two = S::from_u8(2).expect("2 representable");
    (0..k).fold(S::one(), |acc, _| acc * two.clone())
}

fn from_i64<S: ExactScalar>(v: i64) -> S {
    S::from_i64(v).expect("integer representable")
}

/// `|sum_a (-1)^{a.phi + e_a}|^2 / 2^{n+q+1}`, i.e. `|U|^2 / 2^{n-q+1}` with
/// `U` the signed sample mean.
fn signed_mass<S: ExactScalar>(samples: &SampleSet, phi: &BitString) -> S {
    let sum: i64 = samples
        .entries
        .iter()
        .map(|e| if e.a.dot(phi) ^ e.e { -1 } else { 1 })
        .sum();
    from_i64::<S>(sum * sum) / two_pow::<S>(samples.n + samples.q + 1)
}

/// Probability of measuring `k* = 1, k = s` for this error realization.
pub fn exact_ps<S: ExactScalar>(samples: &SampleSet) -> S {
    signed_mass(samples, &BitString::zeros(samples.n))
}

/// Probability of measuring `k* = 1, k = s xor phi` for this error realization.
pub fn exact_pf<S: ExactScalar>(samples: &SampleSet, phi: &BitString) -> Result<S> {
    if phi.len() != samples.n {
        return Err(Error::LengthMismatch {
            expected: samples.n,
            got: phi.len(),
        });
    }
    if phi.is_zero() {
        return Err(Error::PhiZero);
    }
    Ok(signed_mass(samples, phi))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub n: usize,
    pub q: usize,
    pub eta: f64,
    pub t: f64,
    pub epsilon: f64,
    pub delta: f64,
}

impl BoundsConfig {
    /// Range checks only; see [`check_conditions`] for feasibility.
    pub fn validate(&self) -> Result<()> {
        if self.q > self.n {
            return Err(Error::QOutOfRange {
                n: self.n,
                q: self.q,
            });
        }
        if !(self.eta > 0.0 && self.eta <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "eta must lie in (0, 1/2], got {}",
                self.eta
            )));
        }
        if !(self.t > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t must be positive, got {}",
                self.t
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::DeltaOutOfRange(self.delta));
        }
        Ok(())
    }

    fn scale(&self) -> f64 {
        2f64.powi((self.n - self.q + 1) as i32)
    }
}

/// `(2 eta - t)^2 / 2^{n-q+1}`.
pub fn ps_lower(config: &BoundsConfig) -> f64 {
    (2.0 * config.eta - config.t).powi(2) / config.scale()
}

/// `t^2 / 2^{n-q+1}`.
pub fn pf_upper(config: &BoundsConfig) -> f64 {
    config.t.powi(2) / config.scale()
}

/// Chernoff-Hoeffding tail `2 exp(-2^q t^2 / 2)` for `|U - 2 eta| >= t`.
pub fn ch_tail_bound(q: usize, t: f64) -> f64 {
    2.0 * (-(2f64.powi(q as i32)) * t * t / 2.0).exp()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChernoffVariant {
    /// `3 / eps'^2 ln(2/delta)`.
    #[default]
    Loose,
    /// `(2 + eps') / eps'^2 ln(2/delta)`.
    Tight,
}

fn chernoff_real(epsilon_prime: f64, delta: f64, variant: ChernoffVariant) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if !(epsilon_prime > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon' must be positive, got {epsilon_prime}"
        )));
    }
    let c = match variant {
        ChernoffVariant::Loose => 3.0,
        ChernoffVariant::Tight => 2.0 + epsilon_prime,
    };
    Ok(c / (epsilon_prime * epsilon_prime) * (2.0 / delta).ln())
}

/// Successful episodes needed for majority voting.
pub fn chernoff_m(epsilon_prime: f64, delta: f64, variant: ChernoffVariant) -> Result<u64> {
    Ok(chernoff_real(epsilon_prime, delta, variant)?.ceil() as u64)
}

/// Fails unless `t < eta` and `epsilon < 1 - P_F,sup / P_S,inf`.
pub fn check_conditions(config: &BoundsConfig) -> Result<()> {
    config.validate()?;
    if !(config.t < config.eta) {
        return Err(Error::ConditionViolated(format!(
            "majority voting requires t < eta (t = {}, eta = {})",
            config.t, config.eta
        )));
    }
    let limit = 1.0 - pf_upper(config) / ps_lower(config);
    if !(config.epsilon < limit) {
        return Err(Error::ConditionViolated(format!(
            "sampling requires epsilon < 1 - P_F,sup/P_S,inf (epsilon = {}, limit = {limit})",
            config.epsilon
        )));
    }
    Ok(())
}

/// `eps' = epsilon * P_S,inf`.
pub fn epsilon_prime(config: &BoundsConfig) -> f64 {
    config.epsilon * ps_lower(config)
}

/// `M` for a feasible configuration, with the loose Chernoff constant.
pub fn chernoff_m_for(config: &BoundsConfig) -> Result<u64> {
    check_conditions(config)?;
    chernoff_m(epsilon_prime(config), config.delta, ChernoffVariant::Loose)
}

/// Total episodes `S = 2M`.
pub fn repetitions_s(config: &BoundsConfig) -> Result<u64> {
    Ok(2 * chernoff_m_for(config)?)
}

/// `S` before rounding: `2 * 3 / eps'^2 * ln(2/delta)`.
pub fn repetitions_real(config: &BoundsConfig) -> Result<f64> {
    check_conditions(config)?;
    Ok(2.0 * chernoff_real(epsilon_prime(config), config.delta, ChernoffVariant::Loose)?)
}

/// `(T-depth of preparation + T-depth of kernel) * S`.
pub fn cost_c(tdepth_prep: u64, tdepth_kernel: u64, s: u64) -> u128 {
    (tdepth_prep as u128 + tdepth_kernel as u128) * s as u128
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: usize,
    pub q: usize,
    pub eta: f64,
    pub t: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub ps_inf: f64,
    pub pf_sup: f64,
    pub epsilon_prime: f64,
    pub m: u64,
    pub s_repetitions: u64,
    pub tdepth_prep: u64,
    pub tdepth_kernel: u64,
    pub cost_c: u128,
    pub width: u64,
    pub tradeoff_ws2: f64,
    /// `W^2 S / 4^{n + log2 n}`.
    pub tradeoff_ratio: f64,
}

/// Full report for one `(n, q)` point; width and T-depth are the closed-form
/// predictions for the QRAM preparation circuit.
pub fn tradeoff_report(config: &BoundsConfig, mode: QramMode) -> Result<BoundsReport> {
    if config.q == 0 {
        return Err(Error::InvalidParameter("the QRAM needs q >= 1".into()));
    }
    let m = chernoff_m_for(config)?;
    let s = 2 * m;
    let prediction = predicted_qram_metrics(config.n, config.q, mode);
    let width = prediction.width as u64;
    let tdepth_prep = prediction.t_depth as u64;
    let tdepth_kernel = 0;
    let ws2 = (width as f64).powi(2) * s as f64;
    let n = config.n as f64;
    Ok(BoundsReport {
        n: config.n,
        q: config.q,
        eta: config.eta,
        t: config.t,
        epsilon: config.epsilon,
        delta: config.delta,
        ps_inf: ps_lower(config),
        pf_sup: pf_upper(config),
        epsilon_prime: epsilon_prime(config),
        m,
        s_repetitions: s,
        tdepth_prep,
        tdepth_kernel,
        cost_c: cost_c(tdepth_prep, tdepth_kernel, s),
        width,
        tradeoff_ws2: ws2,
        tradeoff_ratio: ws2 / 4f64.powf(n + n.log2()),
    })
}

/// Reports for every `(n, q)` with `q <= n` in the given ranges, ordered by `n` then `q`.
pub fn sweep(
    ns: impl IntoIterator<Item = usize>,
    qs: impl IntoIterator<Item = usize> + Clone,
    base: &BoundsConfig,
    mode: QramMode,
) -> Result<Vec<BoundsReport>> {
    let mut out = Vec::new();
    for n in ns {
        for q in qs.clone().into_iter().filter(|&q| q >= 1 && q <= n) {
            let cfg = BoundsConfig {
                n,
                q,
                ..base.clone()
            };
            out.push(tradeoff_report(&cfg, mode)?);
        }
    }
    Ok(out)
}
