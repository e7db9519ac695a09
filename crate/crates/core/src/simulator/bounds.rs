//! Monte Carlo evaluation of the information-spectrum converse and
//! achievability bounds.

use serde::{Deserialize, Serialize};

use super::codeword::CodewordPair;
use super::engine::{sample_infodensity_sums, sample_random_coding, AnSamples};
use crate::error::{invalid, Result};
use crate::quantities::{ChannelParams, CorrelationPoint};

/// A probability estimate with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub p_hat: f64,
    pub trials: usize,
    pub std_err: f64,
    pub seed: u64,
}

impl MCEstimate {
    pub fn from_count(hits: usize, trials: usize, seed: u64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        Self {
            p_hat,
            trials,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Lower bound on the error probability of any code in the type class.
    Converse,
    /// Upper bound on the ensemble-average error probability.
    Achievability,
}

/// Result of one bound evaluation at a rate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub r1: f64,
    pub r2: f64,
    pub n: usize,
    pub gamma: f64,
    /// Estimate of the union of both threshold events.
    pub union: MCEstimate,
    /// Marginal probabilities of the `j1` and `j12` events.
    pub event_probs: [f64; 2],
    /// Additive term `2 exp(-n gamma)`.
    pub slack: f64,
    /// `max(0, p_hat - slack)` for the converse, `min(1, p_hat + slack)` for achievability.
    pub bound: f64,
    /// Fraction of sampled codewords exceeding a power budget (achievability only).
    pub power_violation_fraction: Option<f64>,
}

/// `ln(n) / (2n)`, for which the slack `2 exp(-n gamma)` equals `2 / sqrt(n)`.
pub fn default_gamma(n: usize) -> f64 {
    let nf = n as f64;
    nf.ln() / (2.0 * nf)
}

fn check(n: usize, gamma: f64, r1: f64, r2: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "blocklength must be >= 1"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("must be positive, got {gamma}")));
    }
    if !(r1.is_finite() && r2.is_finite()) {
        return Err(invalid("r1", "rates must be finite"));
    }
    Ok(())
}

/// Counts trials with `sum j1 <= n t1` or `sum j12 <= n t12`, returning
/// `(union, j1 event, j12 event)`.
fn count_events(samples: &AnSamples, t1: f64, t12: f64) -> (usize, usize, usize) {
    let nf = samples.n as f64;
    let (c1, c12) = (nf * t1, nf * t12);
    let (mut union, mut e1, mut e12) = (0, 0, 0);
    for s in &samples.sums {
        let a = s[0] <= c1;
        let b = s[1] <= c12;
        union += (a || b) as usize;
        e1 += a as usize;
        e12 += b as usize;
    }
    (union, e1, e12)
}

fn report(kind: BoundKind, samples: &AnSamples, r1: f64, r2: f64, gamma: f64, violations: Option<f64>) -> BoundReport {
    let shift = match kind {
        BoundKind::Converse => -gamma,
        BoundKind::Achievability => gamma,
    };
    let (u, e1, e12) = count_events(samples, r1 + shift, r1 + r2 + shift);
    let trials = samples.trials();
    let union = MCEstimate::from_count(u, trials, samples.seed);
    let slack = 2.0 * (-(samples.n as f64) * gamma).exp();
    let bound = match kind {
        BoundKind::Converse => (union.p_hat - slack).max(0.0),
        BoundKind::Achievability => (union.p_hat + slack).min(1.0),
    };
    BoundReport {
        kind,
        r1,
        r2,
        n: samples.n,
        gamma,
        union,
        event_probs: [e1 as f64 / trials as f64, e12 as f64 / trials as f64],
        slack,
        bound,
        power_violation_fraction: violations,
    }
}

/// Converse at `(r1, r2)` for the fixed pair; events use the thresholds
/// `R1 - gamma` and `R1 + R2 - gamma` on the normalised density sums.
#[allow(clippy::too_many_arguments)]
pub fn converse_bound(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    r1: f64,
    r2: f64,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<BoundReport> {
    Ok(converse_grid(p, rho, pair, &[[r1, r2]], gamma, trials, seed)?.remove(0))
}

/// Converse on a list of rate pairs sharing one set of noise draws.
pub fn converse_grid(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    rates: &[[f64; 2]],
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    for r in rates {
        check(pair.len(), gamma, r[0], r[1])?;
    }
    let samples = sample_infodensity_sums(p, rho, pair, trials, seed)?;
    Ok(converse_from_samples(&samples, rates, gamma))
}

/// Converse reports from precomputed samples.
pub fn converse_from_samples(samples: &AnSamples, rates: &[[f64; 2]], gamma: f64) -> Vec<BoundReport> {
    rates
        .iter()
        .map(|r| report(BoundKind::Converse, samples, r[0], r[1], gamma, None))
        .collect()
}

/// Achievability at `(r1, r2)` for the i.i.d. Gaussian ensemble; events use the
/// thresholds `R1 + gamma` and `R1 + R2 + gamma`.
#[allow(clippy::too_many_arguments)]
pub fn achievability_bound(
    p: &ChannelParams,
    rho: CorrelationPoint,
    r1: f64,
    r2: f64,
    n: usize,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<BoundReport> {
    Ok(achievability_grid(p, rho, &[[r1, r2]], n, gamma, trials, seed)?.remove(0))
}

/// Achievability on a list of rate pairs sharing one set of draws.
pub fn achievability_grid(
    p: &ChannelParams,
    rho: CorrelationPoint,
    rates: &[[f64; 2]],
    n: usize,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<BoundReport>> {
    for r in rates {
        check(n, gamma, r[0], r[1])?;
    }
    let rc = sample_random_coding(p, rho, n, trials, seed)?;
    let frac = rc.violation_fraction();
    Ok(rates
        .iter()
        .map(|r| report(BoundKind::Achievability, &rc.samples, r[0], r[1], gamma, Some(frac)))
        .collect())
}
