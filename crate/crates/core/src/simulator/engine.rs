//! Sharded, seed-deterministic sampling of information-density sums.
//!
//! Trials are cut into fixed-size shards. Shard `s` draws from a ChaCha8
//! stream seeded by the user seed with stream id `s`, so the output does not
//! depend on the number of worker threads; shard results are concatenated and
//! reduced in shard order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codeword::CodewordPair;
use crate::error::{invalid, Result};
use crate::quantities::{capacity, letter_mean_cov, ChannelParams, CorrelationPoint, DensityConstants, SequenceMoments};

/// Trials per shard.
pub const SHARD_TRIALS: usize = 1024;

/// Stream offset separating random-coding draws from fixed-codeword draws.
const RANDOM_CODING_STREAMS: u64 = 1 << 40;

/// Per-trial sums `sum_i j(x_i, Y_i)` (not normalised).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnSamples {
    pub n: usize,
    pub seed: u64,
    pub sums: Vec<[f64; 2]>,
}

impl AnSamples {
    pub fn trials(&self) -> usize {
        self.sums.len()
    }

    /// `A_n = n^{-1/2} sum_i j` for each trial.
    pub fn an(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        let s = 1.0 / (self.n as f64).sqrt();
        self.sums.iter().map(move |v| [v[0] * s, v[1] * s])
    }

    /// Sample mean and (unbiased) covariance of `A_n`.
    pub fn moments(&self) -> SequenceMoments {
        let m = self.trials() as f64;
        let mut mean = [0.0; 2];
        for v in self.an() {
            mean[0] += v[0];
            mean[1] += v[1];
        }
        mean = [mean[0] / m, mean[1] / m];
        let mut cov = [[0.0; 2]; 2];
        for v in self.an() {
            let d = [v[0] - mean[0], v[1] - mean[1]];
            for i in 0..2 {
                for j in 0..2 {
                    cov[i][j] += d[i] * d[j];
                }
            }
        }
        let denom = (m - 1.0).max(1.0);
        for row in cov.iter_mut() {
            for c in row.iter_mut() {
                *c /= denom;
            }
        }
        SequenceMoments {
            mean,
            cov,
            third_abs: None,
        }
    }
}

/// Monte Carlo estimate of the per-letter third absolute moments of the
/// centred information densities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThirdMoments {
    /// `(1/n) sum_i E |U_i|^3` with `U_i` the centred letter vector.
    pub t: f64,
    pub t_std_err: f64,
    /// `(1/n) sum_i E |U_{i,j}|^3` per component.
    pub per_component: [f64; 2],
}

#[derive(Default, Clone, Copy)]
struct ThirdAcc {
    sum: f64,
    sum_sq: f64,
    comp: [f64; 2],
}

struct Letters {
    /// `x1 - kappa x2` and `x1 + x2` per letter.
    u: Vec<f64>,
    w: Vec<f64>,
    mean: Vec<[f64; 2]>,
}

fn letters(c: &DensityConstants, pair: &CodewordPair) -> Letters {
    let mut u = Vec::with_capacity(pair.len());
    let mut w = Vec::with_capacity(pair.len());
    let mut mean = Vec::with_capacity(pair.len());
    for (&a, &b) in pair.x1().iter().zip(pair.x2()) {
        u.push(a - c.kappa * b);
        w.push(a + b);
        mean.push(letter_mean_cov(c, a, b).0);
    }
    Letters { u, w, mean }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    Ok(())
}

fn shard_ranges(trials: usize) -> Vec<(u64, usize)> {
    (0..trials.div_ceil(SHARD_TRIALS))
        .map(|s| (s as u64, SHARD_TRIALS.min(trials - s * SHARD_TRIALS)))
        .collect()
}

fn shard_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples `A_n` for the fixed pair under `Y = x1 + x2 + Z`, with the auxiliary
/// output laws selected by `rho`.
pub fn sample_infodensity_sums(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    trials: usize,
    seed: u64,
) -> Result<AnSamples> {
    Ok(sample_fixed(p, rho, pair, trials, seed, false)?.0)
}

/// Like [`sample_infodensity_sums`], also estimating the third-moment term of
/// the Berry-Esseen bound from the same noise.
pub fn sample_with_third_moments(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    trials: usize,
    seed: u64,
) -> Result<(AnSamples, ThirdMoments)> {
    sample_fixed(p, rho, pair, trials, seed, true)
}

fn sample_fixed(
    p: &ChannelParams,
    rho: CorrelationPoint,
    pair: &CodewordPair,
    trials: usize,
    seed: u64,
    third: bool,
) -> Result<(AnSamples, ThirdMoments)> {
    check_trials(trials)?;
    let c = DensityConstants::new(p, rho);
    let lt = letters(&c, pair);
    let n = pair.len();
    let (ca, ct) = (capacity(c.alpha), capacity(c.theta));
    let (ia, it) = (0.5 / (1.0 + c.alpha), 0.5 / (1.0 + c.theta));

    let shards: Vec<(Vec<[f64; 2]>, ThirdAcc)> = shard_ranges(trials)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = shard_rng(seed, stream);
            let mut out = Vec::with_capacity(count);
            let mut acc = ThirdAcc::default();
            for _ in 0..count {
                let (mut s1, mut s12) = (0.0, 0.0);
                let (mut t, mut t1, mut t2) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    let half_z2 = 0.5 * z * z;
                    let a = lt.u[i] + z;
                    let b = lt.w[i] + z;
                    let j1 = ca - half_z2 + a * a * ia;
                    let j12 = ct - half_z2 + b * b * it;
                    s1 += j1;
                    s12 += j12;
                    if third {
                        let d1 = j1 - lt.mean[i][0];
                        let d2 = j12 - lt.mean[i][1];
                        let s = d1 * d1 + d2 * d2;
                        t += s * s.sqrt();
                        t1 += d1.abs().powi(3);
                        t2 += d2.abs().powi(3);
                    }
                }
                out.push([s1, s12]);
                if third {
                    let per = t / n as f64;
                    acc.sum += per;
                    acc.sum_sq += per * per;
                    acc.comp[0] += t1 / n as f64;
                    acc.comp[1] += t2 / n as f64;
                }
            }
            (out, acc)
        })
        .collect();

    let mut sums = Vec::with_capacity(trials);
    let mut acc = ThirdAcc::default();
    for (chunk, a) in shards {
        sums.extend(chunk);
        acc.sum += a.sum;
        acc.sum_sq += a.sum_sq;
        acc.comp[0] += a.comp[0];
        acc.comp[1] += a.comp[1];
    }
    Ok((AnSamples { n, seed, sums }, third_summary(acc, trials)))
}

fn third_summary(acc: ThirdAcc, trials: usize) -> ThirdMoments {
    let m = trials as f64;
    let t = acc.sum / m;
    let var = (acc.sum_sq / m - t * t).max(0.0);
    ThirdMoments {
        t,
        t_std_err: (var / m).sqrt(),
        per_component: [acc.comp[0] / m, acc.comp[1] / m],
    }
}

/// Information-density sums under i.i.d. `N(0, Sigma(rho))` inputs, plus the
/// number of trials whose codewords exceed either power budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCodingSamples {
    pub samples: AnSamples,
    pub power_violations: usize,
}

impl RandomCodingSamples {
    pub fn violation_fraction(&self) -> f64 {
        self.power_violations as f64 / self.samples.trials() as f64
    }
}

/// Samples codewords from the superposition ensemble `X2 = sqrt(S2) G1`,
/// `X1 = kappa X2 + sqrt(alpha) G2` and evaluates the densities against the
/// induced output laws.
pub fn sample_random_coding(
    p: &ChannelParams,
    rho: CorrelationPoint,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<RandomCodingSamples> {
    check_trials(trials)?;
    if n == 0 {
        return Err(invalid("n", "blocklength must be >= 1"));
    }
    let c = DensityConstants::new(p, rho);
    let (ca, ct) = (capacity(c.alpha), capacity(c.theta));
    let (ia, it) = (0.5 / (1.0 + c.alpha), 0.5 / (1.0 + c.theta));
    let (sd2, sd_cond) = (p.s2().sqrt(), c.alpha.sqrt());
    let (budget1, budget2) = (n as f64 * p.s1(), n as f64 * p.s2());

    let shards: Vec<(Vec<[f64; 2]>, usize)> = shard_ranges(trials)
        .into_par_iter()
        .map(|(stream, count)| {
            let mut rng = shard_rng(seed, RANDOM_CODING_STREAMS + stream);
            let mut out = Vec::with_capacity(count);
            let mut violations = 0;
            for _ in 0..count {
                let (mut s1, mut s12) = (0.0, 0.0);
                let (mut e1, mut e2) = (0.0, 0.0);
                for _ in 0..n {
                    let g1: f64 = rng.sample(StandardNormal);
                    let g2: f64 = rng.sample(StandardNormal);
                    let z: f64 = rng.sample(StandardNormal);
                    let x2 = sd2 * g1;
                    let x1 = c.kappa * x2 + sd_cond * g2;
                    e1 += x1 * x1;
                    e2 += x2 * x2;
                    let half_z2 = 0.5 * z * z;
                    let a = x1 - c.kappa * x2 + z;
                    let b = x1 + x2 + z;
                    s1 += ca - half_z2 + a * a * ia;
                    s12 += ct - half_z2 + b * b * it;
                }
                if e1 > budget1 || e2 > budget2 {
                    violations += 1;
                }
                out.push([s1, s12]);
            }
            (out, violations)
        })
        .collect();

    let mut sums = Vec::with_capacity(trials);
    let mut power_violations = 0;
    for (chunk, v) in shards {
        sums.extend(chunk);
        power_violations += v;
    }
    Ok(RandomCodingSamples {
        samples: AnSamples { n, seed, sums },
        power_violations,
    })
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::quantities::sequence_moments;
    use crate::simulator::codeword::representative_pair;

    #[test]
    fn deterministic_and_shard_consistent() {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let r = CorrelationPoint::new(0.5).unwrap();
        let pair = representative_pair(&p, 16, 0.5).unwrap();
        let a = sample_infodensity_sums(&p, r, &pair, 3000, 9).unwrap();
        let b = sample_infodensity_sums(&p, r, &pair, 3000, 9).unwrap();
        assert_eq!(a, b);
        // a prefix of trials is reproduced by a shorter run
        let c = sample_infodensity_sums(&p, r, &pair, 1500, 9).unwrap();
        assert_eq!(&a.sums[..1500], &c.sums[..]);
        let d = sample_infodensity_sums(&p, r, &pair, 3000, 10).unwrap();
        assert_ne!(a.sums, d.sums);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| sample_infodensity_sums(&p, r, &pair, 3000, 9).unwrap());
        assert_eq!(a, single);
    }

    #[test]
    fn moments_match_closed_form() {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let r = CorrelationPoint::new(0.5).unwrap();
        let pair = representative_pair(&p, 16, 0.5).unwrap();
        let trials = 100_000;
        let s = sample_infodensity_sums(&p, r, &pair, trials, 1).unwrap().moments();
        let exact = sequence_moments(&p, r, pair.x1(), pair.x2()).unwrap();
        for i in 0..2 {
            let se = (exact.cov[i][i] / trials as f64).sqrt();
            assert!((s.mean[i] - exact.mean[i]).abs() < 4.0 * se);
        }
        assert!((exact.mean[0] - 4.0 * mi(&p, r)[0]).abs() < 1e-12);
    }

    fn mi(p: &ChannelParams, r: CorrelationPoint) -> [f64; 2] {
        crate::quantities::mi_vector(p, r).as_array()
    }

    #[test]
    fn random_coding_moments() {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let r = CorrelationPoint::new(0.5).unwrap();
        let rc = sample_random_coding(&p, r, 50, 20_000, 3).unwrap();
        let m = rc.samples.moments();
        let mi = mi(&p, r);
        let root = 50f64.sqrt();
        // E[j] = I(rho) letterwise under the ensemble
        for i in 0..2 {
            let se = (m.cov[i][i] / 20_000.0).sqrt();
            assert!((m.mean[i] - root * mi[i]).abs() < 4.0 * se);
        }
        let f = rc.violation_fraction();
        assert!(f > 0.5 && f < 0.9, "violation fraction {f}");
    }
}
