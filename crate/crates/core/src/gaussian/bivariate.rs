//! Bivariate normal orthant probabilities.
//!
//! The nonsingular case uses the Drezner-Wesolowsky single-integral
//! representation with Genz's refinements for `|r|` close to one, evaluated
//! with fixed Gauss-Legendre rules (6, 12 or 20 nodes by `|r|`).

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::normal::phi;
use crate::error::{Error, Result};
use crate::quantities::{min_eigenvalue, DispersionMatrix};

/// Relative eigenvalue threshold below which a covariance is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// A 2x2 covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BvnCov {
    pub v11: f64,
    pub v22: f64,
    pub v12: f64,
}

/// Structural classification of a covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovKind {
    Regular,
    /// Both variances vanish.
    Zero,
    /// The first coordinate is degenerate at zero.
    FirstDegenerate,
    /// The second coordinate is degenerate at zero.
    SecondDegenerate,
    /// Perfectly correlated (`r = +1`) with positive variances.
    Comonotone,
    /// Perfectly anti-correlated (`r = -1`) with positive variances.
    Antithetic,
}

impl BvnCov {
    pub fn new(v11: f64, v22: f64, v12: f64) -> Result<Self> {
        let finite = v11.is_finite() && v22.is_finite() && v12.is_finite();
        let scale = v11.abs().max(v22.abs());
        let psd = finite
            && v11 >= 0.0
            && v22 >= 0.0
            && v12 * v12 <= v11 * v22 + 1e-12 * scale * scale;
        if !psd {
            return Err(Error::NotPsd { v11, v22, v12 });
        }
        Ok(Self { v11, v22, v12 })
    }

    pub fn identity() -> Self {
        Self {
            v11: 1.0,
            v22: 1.0,
            v12: 0.0,
        }
    }

    /// Unit variances with correlation `r`.
    pub fn unit_correlation(r: f64) -> Result<Self> {
        Self::new(1.0, 1.0, r)
    }

    pub fn sd1(&self) -> f64 {
        self.v11.sqrt()
    }

    pub fn sd2(&self) -> f64 {
        self.v22.sqrt()
    }

    /// Correlation coefficient, or `None` if either variance is zero.
    pub fn correlation(&self) -> Option<f64> {
        if self.v11 > 0.0 && self.v22 > 0.0 {
            Some((self.v12 / (self.v11 * self.v22).sqrt()).clamp(-1.0, 1.0))
        } else {
            None
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self.v11, self.v22, self.v12)
    }

    pub fn singular(&self) -> bool {
        self.min_eigenvalue() < SINGULAR_TOL * self.v11.max(self.v22)
            || self.v11.max(self.v22) == 0.0
    }

    pub fn kind(&self) -> CovKind {
        let scale = self.v11.max(self.v22);
        if scale == 0.0 {
            return CovKind::Zero;
        }
        if !self.singular() {
            return CovKind::Regular;
        }
        if self.v11 <= SINGULAR_TOL * scale {
            CovKind::FirstDegenerate
        } else if self.v22 <= SINGULAR_TOL * scale {
            CovKind::SecondDegenerate
        } else if self.v12 > 0.0 {
            CovKind::Comonotone
        } else {
            CovKind::Antithetic
        }
    }
}

impl From<DispersionMatrix> for BvnCov {
    fn from(v: DispersionMatrix) -> Self {
        Self {
            v11: v.v1.max(0.0),
            v22: v.v12.max(0.0),
            v12: v.v1_12,
        }
    }
}

/// `Pr(Z1 <= z1, Z2 <= z2)` for `Z ~ N(0, cov)`.
pub fn psi(z1: f64, z2: f64, cov: &BvnCov) -> f64 {
    let indicator = |z: f64| if z >= 0.0 { 1.0 } else { 0.0 };
    match cov.kind() {
        CovKind::Regular => {
            let r = cov.correlation().unwrap_or(0.0);
            bvn_lower(z1 / cov.sd1(), z2 / cov.sd2(), r)
        }
        CovKind::Zero => indicator(z1) * indicator(z2),
        CovKind::FirstDegenerate => indicator(z1) * phi(z2 / cov.sd2()),
        CovKind::SecondDegenerate => phi(z1 / cov.sd1()) * indicator(z2),
        CovKind::Comonotone => phi((z1 / cov.sd1()).min(z2 / cov.sd2())),
        CovKind::Antithetic => (phi(z1 / cov.sd1()) - phi(-z2 / cov.sd2())).max(0.0),
    }
}

/// `Pr(X <= h, Y <= k)` for standard bivariate normal with correlation `r`.
pub fn bvn_lower(h: f64, k: f64, r: f64) -> f64 {
    bvn_upper(-h, -k, r)
}

const GL6: [(f64, f64); 3] = [
    (0.1713244923791705, -0.9324695142031522),
    (0.3607615730481384, -0.6612093864662647),
    (0.4679139345726904, -0.2386191860831970),
];

const GL12: [(f64, f64); 6] = [
    (0.4717533638651177e-01, -0.9815606342467191),
    (0.1069393259953183, -0.9041172563704750),
    (0.1600783285433464, -0.7699026741943050),
    (0.2031674267230659, -0.5873179542866171),
    (0.2334925365383547, -0.3678314989981802),
    (0.2491470458134029, -0.1252334085114692),
];

const GL20: [(f64, f64); 10] = [
    (0.1761400713915212e-01, -0.9931285991850949),
    (0.4060142980038694e-01, -0.9639719272779138),
    (0.6267204833410906e-01, -0.9122344282513259),
    (0.8327674157670475e-01, -0.8391169718222188),
    (0.1019301198172404, -0.7463319064601508),
    (0.1181945319615184, -0.6360536807265150),
    (0.1316886384491766, -0.5108670019508271),
    (0.1420961093183821, -0.3737060887154196),
    (0.1491729864726037, -0.2277858511416451),
    (0.1527533871307259, -0.7652652113349733e-01),
];

fn rule(abs_r: f64) -> &'static [(f64, f64)] {
    if abs_r < 0.3 {
        &GL6
    } else if abs_r < 0.75 {
        &GL12
    } else {
        &GL20
    }
}

/// `Pr(X > h, Y > k)` for standard bivariate normal with correlation `r`.
pub fn bvn_upper(h: f64, k: f64, r: f64) -> f64 {
    if h == f64::INFINITY || k == f64::INFINITY {
        return 0.0;
    }
    if h == f64::NEG_INFINITY {
        return if k == f64::NEG_INFINITY { 1.0 } else { phi(-k) };
    }
    if k == f64::NEG_INFINITY {
        return phi(-h);
    }
    if r == 0.0 {
        return phi(-h) * phi(-k);
    }
    let two_pi = 2.0 * PI;
    let nodes = rule(r.abs());
    let mut k = k;
    let mut hk = h * k;
    let mut bvn = 0.0;

    if r.abs() < 0.925 {
        let hs = 0.5 * (h * h + k * k);
        let asr = 0.5 * r.asin();
        for &(w, x) in nodes {
            for t in [1.0 - x, 1.0 + x] {
                let sn = (asr * t).sin();
                bvn += w * ((sn * hk - hs) / (1.0 - sn * sn)).exp();
            }
        }
        return (bvn * asr / two_pi + phi(-h) * phi(-k)).clamp(0.0, 1.0);
    }

    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    if r.abs() < 1.0 {
        let as_ = (1.0 - r) * (1.0 + r);
        let mut a = as_.sqrt();
        let bs = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 80.0;
        let asr = -0.5 * (bs / as_ + hk);
        if asr > -100.0 {
            bvn = a * asr.exp() * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_);
        }
        if hk > -100.0 {
            let b = bs.sqrt();
            let sp = two_pi.sqrt() * phi(-b / a);
            bvn -= (-0.5 * hk).exp() * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a *= 0.5;
        let mut sum = 0.0;
        for &(w, x) in nodes {
            for t in [1.0 - x, 1.0 + x] {
                let xs = (a * t) * (a * t);
                let asr = -0.5 * (bs / xs + hk);
                if asr > -100.0 {
                    let sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    let rs = (1.0 - xs).sqrt();
                    let ep = (-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))).exp() / rs;
                    sum += w * asr.exp() * (sp - ep);
                }
            }
        }
        bvn = (a * sum - bvn) / two_pi;
    }
    if r > 0.0 {
        bvn += phi(-h.max(k));
    } else if h >= k {
        bvn = -bvn;
    } else {
        let mass = if h < 0.0 { phi(k) - phi(h) } else { phi(-h) - phi(-k) };
        bvn = mass - bvn;
    }
    bvn.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_quadrant() {
        assert!((psi(0.0, 0.0, &BvnCov::identity()) - 0.25).abs() < 1e-16);
    }

    #[test]
    fn orthant_at_origin_closed_form() {
        for i in 0..=200 {
            let r = -0.999 + 1.998 * i as f64 / 200.0;
            let want = 0.25 + r.asin() / (2.0 * PI);
            let cov = BvnCov::unit_correlation(r).unwrap();
            assert!((psi(0.0, 0.0, &cov) - want).abs() < 1e-12, "r={r}");
        }
        let cov = BvnCov::unit_correlation(0.674156).unwrap();
        assert!((psi(0.0, 0.0, &cov) - 0.367746).abs() < 1e-6);
    }

    #[test]
    fn total_mass_far_out() {
        for r in [-0.99, -0.5, 0.0, 0.3, 0.8, 0.95, 0.999] {
            let cov = BvnCov::new(2.0, 0.5, r * 1.0).unwrap();
            let p = psi(8.0 * cov.sd1(), 8.0 * cov.sd2(), &cov);
            assert!(1.0 - p < 1e-10, "r={r}");
        }
    }

    #[test]
    fn perfect_correlation_limits_continuous() {
        let (z1, z2) = (0.3, -0.4);
        let near = psi(z1, z2, &BvnCov::unit_correlation(1.0 - 1e-10).unwrap());
        let at = psi(z1, z2, &BvnCov::unit_correlation(1.0).unwrap());
        assert!((near - at).abs() < 1e-4);
        let near = psi(z1, z2, &BvnCov::unit_correlation(-1.0 + 1e-10).unwrap());
        let at = psi(z1, z2, &BvnCov::unit_correlation(-1.0).unwrap());
        assert!((near - at).abs() < 1e-4);
        assert!((at - (phi(0.3) - phi(0.4)).max(0.0)).abs() < 1e-15);
    }

    #[test]
    fn singular_kinds() {
        let first = BvnCov::new(0.0, 0.48, 0.0).unwrap();
        assert_eq!(first.kind(), CovKind::FirstDegenerate);
        assert!((psi(0.0, 0.1, &first) - phi(0.1 / 0.48f64.sqrt())).abs() < 1e-16);
        assert_eq!(psi(-1e-300, 0.1, &first), 0.0);
        let zero = BvnCov::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(zero.kind(), CovKind::Zero);
        assert_eq!(psi(0.0, 0.0, &zero), 1.0);
        assert_eq!(psi(-1.0, 0.0, &zero), 0.0);
        assert_eq!(BvnCov::new(4.0, 1.0, 2.0).unwrap().kind(), CovKind::Comonotone);
        assert_eq!(BvnCov::new(4.0, 1.0, -2.0).unwrap().kind(), CovKind::Antithetic);
        assert!(BvnCov::new(1.0, 1.0, 1.1).is_err());
        assert!(BvnCov::new(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_in_arguments() {
        for r in [-0.97, -0.6, -0.1, 0.2, 0.5, 0.93, 0.99] {
            for (h, k) in [(0.3, -1.2), (-2.0, 1.5), (1.0, 1.0), (-0.5, -0.7)] {
                let a = bvn_lower(h, k, r);
                let b = bvn_lower(k, h, r);
                assert!((a - b).abs() < 1e-14);
                // Pr(X<=h, Y<=k) + Pr(X<=h, Y>k) = Phi(h)
                let comp = bvn_lower(h, -k, -r);
                assert!((a + comp - phi(h)).abs() < 1e-13, "r={r} h={h} k={k}");
            }
        }
    }
}
