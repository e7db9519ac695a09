//! Codeword pairs with exact powers and prescribed empirical correlation.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quantities::ChannelParams;

/// A pair of length-`n` codewords with cached Gram entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodewordPair {
    x1: Vec<f64>,
    x2: Vec<f64>,
    norm1_sq: f64,
    norm2_sq: f64,
    inner: f64,
}

impl CodewordPair {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::LengthMismatch {
                left: x1.len(),
                right: x2.len(),
            });
        }
        if x1.is_empty() {
            return Err(invalid("x1", "codewords must have length >= 1"));
        }
        if x1.iter().chain(&x2).any(|v| !v.is_finite()) {
            return Err(invalid("x1", "codeword entries must be finite"));
        }
        let norm1_sq = x1.iter().map(|v| v * v).sum();
        let norm2_sq = x2.iter().map(|v| v * v).sum();
        let inner = x1.iter().zip(&x2).map(|(a, b)| a * b).sum();
        Ok(Self {
            x1,
            x2,
            norm1_sq,
            norm2_sq,
            inner,
        })
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn x2(&self) -> &[f64] {
        &self.x2
    }

    pub fn norm1_sq(&self) -> f64 {
        self.norm1_sq
    }

    pub fn norm2_sq(&self) -> f64 {
        self.norm2_sq
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    /// `<x1, x2> / (|x1| |x2|)`, or 0 when either codeword vanishes.
    pub fn empirical_correlation(&self) -> f64 {
        let d = (self.norm1_sq * self.norm2_sq).sqrt();
        if d > 0.0 {
            (self.inner / d).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Pair with `x1 = sqrt(S1) 1`, `|x2|^2 = n S2` and empirical correlation `rho_target`.
///
/// `x2` has entries `+-sqrt(S2)` except for two entries that absorb the
/// fractional part of `n rho_target`.
pub fn representative_pair(p: &ChannelParams, n: usize, rho_target: f64) -> Result<CodewordPair> {
    if n < 2 {
        return Err(invalid("n", format!("representative pairs need n >= 2, got {n}")));
    }
    if !(rho_target.abs() <= 1.0) {
        return Err(invalid("rho", format!("correlation must lie in [-1, 1], got {rho_target}")));
    }
    let unit = unit_pattern(n, rho_target);
    let (a, b) = (p.s1().sqrt(), p.s2().sqrt());
    CodewordPair::new(vec![a; n], unit.into_iter().map(|v| v * b).collect())
}

/// Unit-power pattern `w` with `|w|^2 = n` and `sum w = n rho`.
fn unit_pattern(n: usize, rho: f64) -> Vec<f64> {
    let nf = n as f64;
    let target = rho * nf;
    let reach = nf - 2.0 + SQRT_2;
    if target > reach {
        return aligned_pattern(n, target);
    }
    if target < -reach {
        return aligned_pattern(n, -target).into_iter().map(|v| -v).collect();
    }
    // sum = n - 2k + f with f = sqrt(1 + eta) - sqrt(1 - eta) in [-sqrt 2, sqrt 2]
    let k = ((nf * (1.0 - rho) / 2.0).round() as usize).clamp(1, n - 1);
    let f = (target - nf + 2.0 * k as f64).clamp(-SQRT_2, SQRT_2);
    let c = 1.0 - 0.5 * f * f;
    let eta = f.signum() * (1.0 - c * c).max(0.0).sqrt();
    let mut w = Vec::with_capacity(n);
    w.push((1.0 + eta).sqrt());
    w.extend(std::iter::repeat_n(1.0, n - k - 1));
    w.push(-(1.0 - eta).sqrt());
    w.extend(std::iter::repeat_n(-1.0, k - 1));
    w
}

/// Pattern `(sqrt(1 + eta), sqrt(1 - eta), 1, ..., 1)` for sums above `n - 2 + sqrt 2`.
fn aligned_pattern(n: usize, target: f64) -> Vec<f64> {
    let g = (target - n as f64 + 2.0).clamp(SQRT_2, 2.0);
    let c = 0.5 * g * g - 1.0;
    let eta = (1.0 - c * c).max(0.0).sqrt();
    let mut w = Vec::with_capacity(n);
    w.push((1.0 + eta).sqrt());
    w.push((1.0 - eta).sqrt());
    w.extend(std::iter::repeat_n(1.0, n - 2));
    w
}

/// Correlation type-class index `k` in `[-n, n]`: `0` for zero correlation,
/// otherwise the cell `((k-1)/n, k/n]` (mirrored for negative values).
pub fn type_class_index(pair: &CodewordPair, n: usize) -> Result<i64> {
    if n == 0 || pair.len() != n {
        return Err(Error::LengthMismatch {
            left: pair.len(),
            right: n,
        });
    }
    Ok(class_of(pair.empirical_correlation(), n))
}

pub(crate) fn class_of(rho: f64, n: usize) -> i64 {
    if rho == 0.0 {
        return 0;
    }
    let scaled = rho.abs() * n as f64;
    let snapped = scaled.round();
    let cell = if snapped >= 1.0 && (scaled - snapped).abs() <= 1e-9 * n as f64 {
        snapped
    } else {
        scaled.ceil()
    };
    let k = (cell as i64).clamp(1, n as i64);
    if rho > 0.0 {
        k
    } else {
        -k
    }
}
