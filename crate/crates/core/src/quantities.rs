//! Closed-form quantities of the Gaussian MAC with degraded message sets.
//!
//! Everything here is in nats. The channel is `Y = X1 + X2 + Z` with unit
//! noise variance; encoder 1 knows both messages, encoder 2 only its own.
//! A boundary point of the capacity region is indexed by the input
//! correlation `rho` between the two codewords.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Admissible transmit powers (linear SNR) of the two encoders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    s1: f64,
    s2: f64,
}

impl ChannelParams {
    pub fn new(s1: f64, s2: f64) -> Result<Self> {
        if !(s1.is_finite() && s1 > 0.0) {
            return Err(invalid("s1", format!("power must be finite and > 0, got {s1}")));
        }
        if !(s2.is_finite() && s2 > 0.0) {
            return Err(invalid("s2", format!("power must be finite and > 0, got {s2}")));
        }
        Ok(Self { s1, s2 })
    }

    /// Folds channel gains into the powers.
    ///
    /// For `Y = g1 X1 + g2 X2 + Z` with `|x_j|^2 <= n S_j`, the gain-free model
    /// with powers `g_j^2 S_j` has the same operational regions.
    pub fn with_gains(s1: f64, s2: f64, g1: f64, g2: f64) -> Result<Self> {
        Self::new(s1 * g1 * g1, s2 * g2 * g2)
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }
}

/// Input correlation `rho` in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CorrelationPoint(f64);

impl CorrelationPoint {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.abs() <= 1.0) {
            return Err(invalid("rho", format!("correlation must lie in [-1, 1], got {rho}")));
        }
        Ok(Self(rho))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for CorrelationPoint {
    type Error = Error;

    fn try_from(rho: f64) -> Result<Self> {
        Self::new(rho)
    }
}

/// `(I1(rho), I12(rho))`: the individual and sum-rate mutual informations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MIVector {
    pub i1: f64,
    pub i12: f64,
}

impl MIVector {
    pub fn as_array(&self) -> [f64; 2] {
        [self.i1, self.i12]
    }
}

/// Symmetric 2x2 dispersion matrix `V(rho)` of the information-density vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionMatrix {
    pub v1: f64,
    pub v12: f64,
    /// Off-diagonal entry `V_{1,12}`.
    pub v1_12: f64,
}

impl DispersionMatrix {
    pub fn determinant(&self) -> f64 {
        self.v1 * self.v12 - self.v1_12 * self.v1_12
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self.v1, self.v12, self.v1_12)
    }
}

/// Smallest eigenvalue of the symmetric matrix `[[a, c], [c, b]]`.
pub fn min_eigenvalue(a: f64, b: f64, c: f64) -> f64 {
    let half_trace = 0.5 * (a + b);
    let disc = (0.25 * (a - b) * (a - b) + c * c).sqrt();
    // the smaller root loses precision when the matrix is nearly singular
    let large = half_trace + disc;
    if large > 0.0 {
        (a * b - c * c) / large
    } else {
        half_trace - disc
    }
}

/// `dI/drho`. `d2()` is the derivative of the second rate `I12 - I1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeVector {
    pub d1: f64,
    pub d12: f64,
}

impl DerivativeVector {
    pub fn d2(&self) -> f64 {
        self.d12 - self.d1
    }
}

/// Constants shared by the per-letter information densities at a given `rho`.
///
/// `alpha = S1 (1 - rho^2)` is the conditional variance of `X1` given `X2`,
/// `theta = S1 + S2 + 2 rho sqrt(S1 S2)` is the variance of `X1 + X2`, and
/// `kappa = rho sqrt(S1 / S2)` is the regression coefficient of `X1` on `X2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityConstants {
    pub alpha: f64,
    pub theta: f64,
    pub kappa: f64,
}

impl DensityConstants {
    pub fn new(p: &ChannelParams, rho: CorrelationPoint) -> Self {
        let r = rho.value();
        Self {
            alpha: (p.s1 * (1.0 - r * r)).max(0.0),
            theta: (p.s1 + p.s2 + 2.0 * r * (p.s1 * p.s2).sqrt()).max(0.0),
            kappa: r * (p.s1 / p.s2).sqrt(),
        }
    }
}

/// One realisation of `(j1, j12)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoDensitySample {
    pub j1: f64,
    pub j12: f64,
}

/// Mean vector and covariance of an information-density sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceMoments {
    pub mean: [f64; 2],
    /// Row-major symmetric covariance `[[c11, c12], [c12, c22]]`.
    pub cov: [[f64; 2]; 2],
    /// Per-component third absolute central moments, when estimated.
    pub third_abs: Option<[f64; 2]>,
}

/// `ln(1 + x) / 2`, the Gaussian capacity function.
pub fn gaussian_capacity(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("SNR must be >= 0, got {x}")));
    }
    Ok(capacity(x))
}

/// `x (y + 2) / (2 (x + 1) (y + 1))`, the Gaussian cross-dispersion function.
pub fn gaussian_cross_dispersion(x: f64, y: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", format!("SNR must be >= 0, got {x}")));
    }
    if !(y >= 0.0) {
        return Err(invalid("y", format!("SNR must be >= 0, got {y}")));
    }
    Ok(cross_dispersion(x, y))
}

/// Single-user AWGN dispersion `V(x) = V(x, x)`.
pub fn gaussian_dispersion(x: f64) -> Result<f64> {
    gaussian_cross_dispersion(x, x)
}

#[inline]
pub(crate) fn capacity(x: f64) -> f64 {
    0.5 * x.ln_1p()
}

#[inline]
pub(crate) fn cross_dispersion(x: f64, y: f64) -> f64 {
    x * (y + 2.0) / (2.0 * (x + 1.0) * (y + 1.0))
}

pub fn mi_vector(p: &ChannelParams, rho: CorrelationPoint) -> MIVector {
    let c = DensityConstants::new(p, rho);
    MIVector {
        i1: capacity(c.alpha),
        i12: capacity(c.theta),
    }
}

pub fn dispersion_matrix(p: &ChannelParams, rho: CorrelationPoint) -> DispersionMatrix {
    let c = DensityConstants::new(p, rho);
    DispersionMatrix {
        v1: cross_dispersion(c.alpha, c.alpha),
        v12: cross_dispersion(c.theta, c.theta),
        v1_12: cross_dispersion(c.alpha, c.theta),
    }
}

pub fn derivative_vector(p: &ChannelParams, rho: CorrelationPoint) -> DerivativeVector {
    let r = rho.value();
    let c = DensityConstants::new(p, rho);
    DerivativeVector {
        d1: -p.s1 * r / (1.0 + c.alpha),
        d12: (p.s1 * p.s2).sqrt() / (1.0 + c.theta),
    }
}

/// Input covariance `Sigma(rho)` of the superposition-coding Gaussian ensemble.
pub fn input_covariance(p: &ChannelParams, rho: CorrelationPoint) -> [[f64; 2]; 2] {
    let off = rho.value() * (p.s1 * p.s2).sqrt();
    [[p.s1, off], [off, p.s2]]
}

/// Information densities of one channel use against the auxiliary outputs
/// `Q_{Y|X2} = N(x2 (1 + kappa), 1 + alpha)` and `Q_Y = N(0, 1 + theta)`.
///
/// Evaluated from the log-density quadratic forms, so large `|y|` cannot
/// overflow.
pub fn info_density(
    p: &ChannelParams,
    rho: CorrelationPoint,
    x1: f64,
    x2: f64,
    y: f64,
) -> InfoDensitySample {
    let c = DensityConstants::new(p, rho);
    let z = y - x1 - x2;
    density_from_noise(&c, x1, x2, z)
}

#[inline]
pub(crate) fn density_from_noise(c: &DensityConstants, x1: f64, x2: f64, z: f64) -> InfoDensitySample {
    let u1 = x1 - c.kappa * x2 + z;
    let u12 = x1 + x2 + z;
    let half_z2 = 0.5 * z * z;
    InfoDensitySample {
        j1: capacity(c.alpha) - half_z2 + u1 * u1 / (2.0 * (1.0 + c.alpha)),
        j12: capacity(c.theta) - half_z2 + u12 * u12 / (2.0 * (1.0 + c.theta)),
    }
}

/// Conditional mean and covariance of `j(x1, x2, Y)` for one channel use.
pub fn per_letter_moments(p: &ChannelParams, rho: CorrelationPoint, x1: f64, x2: f64) -> SequenceMoments {
    let c = DensityConstants::new(p, rho);
    let (mean, cov) = letter_mean_cov(&c, x1, x2);
    SequenceMoments {
        mean,
        cov,
        third_abs: None,
    }
}

#[inline]
pub(crate) fn letter_mean_cov(c: &DensityConstants, x1: f64, x2: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let u = x1 - c.kappa * x2;
    let w = x1 + x2;
    let (a, t) = (c.alpha, c.theta);
    let mean = [
        capacity(a) + (u * u - a) / (2.0 * (1.0 + a)),
        capacity(t) + (w * w - t) / (2.0 * (1.0 + t)),
    ];
    let c11 = (a * a + 2.0 * u * u) / (2.0 * (1.0 + a) * (1.0 + a));
    let c22 = (t * t + 2.0 * w * w) / (2.0 * (1.0 + t) * (1.0 + t));
    let c12 = (a * t + 2.0 * u * w) / (2.0 * (1.0 + a) * (1.0 + t));
    (mean, [[c11, c12], [c12, c22]])
}

/// Mean and covariance of `A_n = n^{-1/2} sum_i j(x1_i, x2_i, Y_i)`.
///
/// Depends on the sequences only through `|x1|^2`, `|x2|^2` and `<x1, x2>`.
pub fn sequence_moments(
    p: &ChannelParams,
    rho: CorrelationPoint,
    x1: &[f64],
    x2: &[f64],
) -> Result<SequenceMoments> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch {
            left: x1.len(),
            right: x2.len(),
        });
    }
    if x1.is_empty() {
        return Err(invalid("x1", "sequences must have length >= 1"));
    }
    let p11: f64 = x1.iter().map(|v| v * v).sum();
    let p22: f64 = x2.iter().map(|v| v * v).sum();
    let p12: f64 = x1.iter().zip(x2).map(|(a, b)| a * b).sum();
    Ok(moments_from_gram(p, rho, x1.len(), p11, p22, p12))
}

/// [`sequence_moments`] from the Gram entries `(|x1|^2, |x2|^2, <x1, x2>)`.
pub fn moments_from_gram(
    p: &ChannelParams,
    rho: CorrelationPoint,
    n: usize,
    norm1_sq: f64,
    norm2_sq: f64,
    inner: f64,
) -> SequenceMoments {
    let c = DensityConstants::new(p, rho);
    let (a, t, k) = (c.alpha, c.theta, c.kappa);
    let nf = n as f64;
    // |x1 - kappa x2|^2 and |x1 + x2|^2
    let u_sq = norm1_sq + k * k * norm2_sq - 2.0 * k * inner;
    let w_sq = norm1_sq + norm2_sq + 2.0 * inner;
    let mean = [
        nf.sqrt() * (capacity(a) + (u_sq - nf * a) / (2.0 * nf * (1.0 + a))),
        nf.sqrt() * (capacity(t) + (w_sq - nf * t) / (2.0 * nf * (1.0 + t))),
    ];
    let c11 = (nf * a * a + 2.0 * u_sq) / (2.0 * nf * (1.0 + a) * (1.0 + a));
    let c22 = (nf * t * t + 2.0 * w_sq) / (2.0 * nf * (1.0 + t) * (1.0 + t));
    let cross = norm1_sq + (1.0 - k) * inner - k * norm2_sq;
    let c12 = (nf * a * t + 2.0 * cross) / (2.0 * nf * (1.0 + a) * (1.0 + t));
    SequenceMoments {
        mean,
        cov: [[c11, c12], [c12, c22]],
        third_abs: None,
    }
}

/// Input-averaged second and fourth central moments of `j1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct J1Moments {
    pub m2: f64,
    pub m4: f64,
    /// `(m2 + m4) / 2`, an upper bound on the third absolute moment `T1(rho)`.
    pub t1_bound: f64,
}

/// `E[m2]` and `E[m4]` of `j1` with `(X1, X2) ~ N(0, Sigma(rho))`.
pub fn expected_m2_m4(p: &ChannelParams, rho: CorrelationPoint) -> J1Moments {
    let a = DensityConstants::new(p, rho).alpha;
    let m2 = a * (2.0 + a) / (2.0 * (1.0 + a).powi(2));
    let m4 = 3.0 * a * a * (5.0 * a * a + 20.0 * a + 12.0) / (4.0 * (1.0 + a).powi(4));
    J1Moments {
        m2,
        m4,
        t1_bound: 0.5 * (m2 + m4),
    }
}
