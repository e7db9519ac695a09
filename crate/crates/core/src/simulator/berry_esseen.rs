//! Empirical check of the multivariate Berry-Esseen envelope for `A_n`.

use serde::{Deserialize, Serialize};

use super::codeword::CodewordPair;
use super::engine::{sample_with_third_moments, ThirdMoments};
use crate::error::{Error, Result};
use crate::gaussian::{psi, BvnCov};
use crate::quantities::{moments_from_gram, ChannelParams, CorrelationPoint, SequenceMoments};

/// Constant of the two-dimensional Berry-Esseen theorem.
pub const BERRY_ESSEEN_CONSTANT: f64 = 265.0;

/// Standard errors added to the envelope before declaring a violation.
pub const STD_ERR_MULTIPLIER: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerryEsseenReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub thresholds: [f64; 2],
    /// Closed-form moments of `A_n`, with MC third moments attached.
    pub moments: SequenceMoments,
    /// Empirical `Pr(A_n <= thresholds)`.
    pub empirical: f64,
    pub std_err: f64,
    /// Gaussian prediction `Psi(thresholds - mean; cov)`.
    pub gaussian: f64,
    pub third: ThirdMoments,
    pub lambda_min: f64,
    /// `k2 t / (lambda_min^{3/2} sqrt n)`.
    pub bound: f64,
    /// `bound + 4 std_err`.
    pub envelope: f64,
    pub within: bool,
}

impl BerryEsseenReport {
    pub fn deviation(&self) -> f64 {
        (self.empirical - self.gaussian).abs()
    }
}

/// Samples `A_n` for the pair and compares the lower-left quadrant
/// probability at `thresholds` with its Gaussian approximation.
///
/// Returns the report when inside the envelope, and
/// [`Error::BerryEsseenViolation`] otherwise.
pub fn berry_esseen_check(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    thresholds: [f64; 2],
    trials: usize,
    seed: u64,
) -> Result<BerryEsseenReport> {
    let report = berry_esseen_report(p, rho, pair, thresholds, trials, seed)?;
    if !report.within {
        return Err(Error::BerryEsseenViolation {
            empirical: report.empirical,
            gaussian: report.gaussian,
            envelope: report.envelope,
        });
    }
    Ok(report)
}

/// Like [`berry_esseen_check`] but returns the report regardless of the outcome.
pub fn berry_esseen_report(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    thresholds: [f64; 2],
    trials: usize,
    seed: u64,
) -> Result<BerryEsseenReport> {
    let n = pair.len();
    let mut moments = moments_from_gram(p, rho, n, pair.norm1_sq(), pair.norm2_sq(), pair.inner());
    let cov = BvnCov::new(moments.cov[0][0], moments.cov[1][1], moments.cov[0][1])?;
    let lambda_min = cov.min_eigenvalue();
    if !(lambda_min > 0.0) {
        return Err(Error::NotPsd {
            v11: cov.v11,
            v22: cov.v22,
            v12: cov.v12,
        });
    }
    let (samples, third) = sample_with_third_moments(p, rho, pair, trials, seed)?;
    moments.third_abs = Some(third.per_component);
    let hits = samples
        .an()
        .filter(|a| a[0] <= thresholds[0] && a[1] <= thresholds[1])
        .count();
    let empirical = hits as f64 / trials as f64;
    let std_err = (empirical * (1.0 - empirical) / trials as f64).sqrt();
    let gaussian = psi(thresholds[0] - moments.mean[0], thresholds[1] - moments.mean[1], &cov);
    let bound = BERRY_ESSEEN_CONSTANT * third.t / (lambda_min.powf(1.5) * (n as f64).sqrt());
    let envelope = bound + STD_ERR_MULTIPLIER * std_err;
    let within = (empirical - gaussian).abs() <= envelope;
    Ok(BerryEsseenReport {
        n,
        trials,
        seed,
        thresholds,
        moments,
        empirical,
        std_err,
        gaussian,
        third,
        lambda_min,
        bound,
        envelope,
        within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::codeword::representative_pair;

    #[test]
    fn thresholds_at_mean() {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let rho = CorrelationPoint::new(0.5).unwrap();
        let pair = representative_pair(&p, 500, 0.5).unwrap();
        let m = moments_from_gram(&p, rho, 500, pair.norm1_sq(), pair.norm2_sq(), pair.inner());
        let r = berry_esseen_check(&p, rho, &pair, m.mean, 20_000, 11).unwrap();
        assert!(r.deviation() < 0.05);
        assert!(r.third.t > 0.0 && r.third.t_std_err < 0.1 * r.third.t);
    }

    #[test]
    fn j1_third_moment_vanishes_near_one() {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let n = 64;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 3..9 {
            let r = 1.0 - 2f64.powi(-k);
            let rho = CorrelationPoint::new(r).unwrap();
            let pair = representative_pair(&p, n, r).unwrap();
            let (_, t) = sample_with_third_moments(&p, rho, &pair, 4000, 7).unwrap();
            xs.push((1.0 - r).ln());
            ys.push(t.per_component[0].ln());
        }
        let slope = crate::gaussian::lemmas::log_slope(&xs, &ys);
        assert!(slope >= 1.0, "slope {slope}");
    }
}
