//! The down-set `{ z : Psi(-z1, -z2; V) >= 1 - eps }` and its boundary.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::bivariate::{psi, BvnCov, CovKind};
use super::normal::quantile;
use crate::error::{invalid, Error, Result};

/// Residual at which a traced vertex is accepted.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Smallest admissible tracing resolution.
pub const MIN_RESOLUTION: usize = 16;

/// Shape of a traced region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionShape {
    /// Smooth boundary traced along rays.
    Curved,
    /// A quadrant `[corner]^-`, arising from a singular covariance.
    Rectangle { corner: [f64; 2] },
}

/// A traced `Psi^{-1}(V, eps)` region in the vector frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiInverseRegion {
    pub cov: BvnCov,
    pub eps: f64,
    /// Marginal quantile limits `(sd1 Phi^{-1}(eps), sd2 Phi^{-1}(eps))`.
    pub asymptotes: [f64; 2],
    /// Boundary vertices ordered by increasing `z1`.
    pub vertices: Vec<[f64; 2]>,
    /// `|Psi(-z) - (1 - eps)|` at each vertex.
    pub residuals: Vec<f64>,
    pub shape: RegionShape,
}

impl PsiInverseRegion {
    pub fn contains(&self, z: [f64; 2]) -> bool {
        membership_unchecked(z, &self.cov, self.eps)
    }

    /// Vertices scaled by `factor`, e.g. `1 / sqrt(n)`.
    pub fn scaled_vertices(&self, factor: f64) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [v[0] * factor, v[1] * factor]).collect()
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("error probability must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// `true` iff `Psi(-z1, -z2; cov) >= 1 - eps`.
pub fn psi_inv_membership(z: [f64; 2], cov: &BvnCov, eps: f64) -> Result<bool> {
    check_eps(eps)?;
    Ok(membership_unchecked(z, cov, eps))
}

#[inline]
pub(crate) fn membership_unchecked(z: [f64; 2], cov: &BvnCov, eps: f64) -> bool {
    psi(-z[0], -z[1], cov) >= 1.0 - eps
}

/// Asymptote corner `(sd1 Phi^{-1}(eps), sd2 Phi^{-1}(eps))`.
pub fn asymptotes(cov: &BvnCov, eps: f64) -> [f64; 2] {
    let q = quantile(eps);
    [cov.sd1() * q, cov.sd2() * q]
}

/// Ray directions used by [`trace_boundary`], ascending in angle.
pub fn ray_angles(resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|i| FRAC_PI_2 * (i + 1) as f64 / (resolution + 1) as f64)
        .collect()
}

/// Traces the boundary of `Psi^{-1}(cov, eps)` at `resolution` directions.
///
/// Rays leave the asymptote corner towards the third quadrant, scaled by the
/// marginal standard deviations. Doubling `resolution` to `2 r + 1` reuses
/// every existing direction.
pub fn trace_boundary(cov: &BvnCov, eps: f64, resolution: usize) -> Result<PsiInverseRegion> {
    check_eps(eps)?;
    if resolution < MIN_RESOLUTION {
        return Err(invalid(
            "resolution",
            format!("need at least {MIN_RESOLUTION} directions, got {resolution}"),
        ));
    }
    let anchor = asymptotes(cov, eps);
    let target = 1.0 - eps;
    let corner = match cov.kind() {
        CovKind::Zero => Some([0.0, 0.0]),
        CovKind::FirstDegenerate => Some([0.0, anchor[1]]),
        CovKind::SecondDegenerate => Some([anchor[0], 0.0]),
        CovKind::Comonotone => Some(anchor),
        CovKind::Regular | CovKind::Antithetic => None,
    };
    if let Some(c) = corner {
        let residual = (psi(-c[0], -c[1], cov) - target).abs();
        return Ok(PsiInverseRegion {
            cov: *cov,
            eps,
            asymptotes: anchor,
            vertices: vec![c],
            residuals: vec![residual],
            shape: RegionShape::Rectangle { corner: c },
        });
    }

    let mut vertices = Vec::with_capacity(resolution);
    let mut residuals = Vec::with_capacity(resolution);
    for (idx, phi) in ray_angles(resolution).into_iter().enumerate() {
        let (z, residual) = solve_on_ray(cov, eps, anchor, phi, idx)?;
        vertices.push(z);
        residuals.push(residual);
    }
    Ok(PsiInverseRegion {
        cov: *cov,
        eps,
        asymptotes: anchor,
        vertices,
        residuals,
        shape: RegionShape::Curved,
    })
}

/// Boundary point of a nonsingular `Psi^{-1}(cov, eps)` on the ray at angle
/// `phi` in `(0, pi/2)`, with the same parametrisation as [`trace_boundary`].
pub fn boundary_on_ray(cov: &BvnCov, eps: f64, phi: f64) -> Result<[f64; 2]> {
    check_eps(eps)?;
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return Err(invalid("phi", format!("ray angle must lie in (0, pi/2), got {phi}")));
    }
    Ok(solve_on_ray(cov, eps, asymptotes(cov, eps), phi, 0)?.0)
}

fn solve_on_ray(cov: &BvnCov, eps: f64, anchor: [f64; 2], phi: f64, idx: usize) -> Result<([f64; 2], f64)> {
    let dir = [cov.sd1() * phi.cos(), cov.sd2() * phi.sin()];
    let at = |t: f64| [anchor[0] - t * dir[0], anchor[1] - t * dir[1]];
    let target = 1.0 - eps;
    let g = |t: f64| {
        let z = at(t);
        psi(-z[0], -z[1], cov) - target
    };
    let t = solve_ray(g, idx)?;
    let residual = g(t).abs();
    if residual > RESIDUAL_TOL {
        return Err(Error::BisectionFailed { direction: idx });
    }
    Ok((at(t), residual))
}

/// Smallest `t >= 0` with `g(t) >= 0` for non-decreasing `g`, bracketed by
/// doubling then bisected. The returned point satisfies `g(t) >= 0`.
fn solve_ray(g: impl Fn(f64) -> f64, direction: usize) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut tries = 0;
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::BisectionFailed { direction });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v >= 0.0 {
            hi = mid;
            if v <= 1e-14 {
                break;
            }
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `nu >= 0` such that `z - nu 1` is a member.
pub(crate) fn uniform_shift_into(z: [f64; 2], cov: &BvnCov, eps: f64) -> f64 {
    let member = |nu: f64| membership_unchecked([z[0] - nu, z[1] - nu], cov, eps);
    if member(0.0) {
        return 0.0;
    }
    let mut hi = 1e-6f64.max(1e-3 * (cov.sd1() + cov.sd2()));
    let mut lo = 0.0;
    while !member(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if member(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::normal::phi;
    use crate::quantities::{dispersion_matrix, ChannelParams, CorrelationPoint};

    fn v_of(rho: f64) -> BvnCov {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        dispersion_matrix(&p, CorrelationPoint::new(rho).unwrap()).into()
    }

    #[test]
    fn diagonal_factorises() {
        let cov = BvnCov::new(0.4, 1.7, 0.0).unwrap();
        let region = trace_boundary(&cov, 0.1, 64).unwrap();
        for z in &region.vertices {
            let prod = phi(-z[0] / cov.sd1()) * phi(-z[1] / cov.sd2());
            assert!((prod - 0.9).abs() < 1e-9);
        }
    }

    #[test]
    fn boundary_monotone_with_tight_residuals() {
        for eps in [0.01, 0.1, 0.5, 0.8] {
            let region = trace_boundary(&v_of(0.5), eps, 128).unwrap();
            assert!(region.residuals.iter().all(|r| *r <= RESIDUAL_TOL));
            for w in region.vertices.windows(2) {
                assert!(w[1][0] > w[0][0]);
                assert!(w[1][1] <= w[0][1]);
            }
            for z in &region.vertices {
                assert!(z[0] < region.asymptotes[0] && z[1] < region.asymptotes[1]);
            }
        }
    }

    #[test]
    fn vertices_are_members_and_nudge_leaves() {
        let cov = v_of(0.5);
        let region = trace_boundary(&cov, 0.1, 64).unwrap();
        for z in &region.vertices {
            assert!(psi_inv_membership(*z, &cov, 0.1).unwrap());
            assert!(!psi_inv_membership([z[0] + 1e-4, z[1] + 1e-4], &cov, 0.1).unwrap());
        }
    }

    #[test]
    fn quadrant_location_by_eps() {
        let low = trace_boundary(&v_of(0.5), 0.01, 64).unwrap();
        assert!(low.vertices.iter().all(|z| z[0] < 0.0 && z[1] < 0.0));
        let high = trace_boundary(&v_of(0.5), 0.8, 64).unwrap();
        assert!(high.vertices.iter().any(|z| z[0] > 0.0 || z[1] > 0.0));
    }

    #[test]
    fn singular_rectangle_at_full_correlation() {
        let cov = v_of(1.0);
        let region = trace_boundary(&cov, 0.1, 32).unwrap();
        let c2 = 0.48f64.sqrt() * quantile(0.1);
        match region.shape {
            RegionShape::Rectangle { corner } => {
                assert_eq!(corner[0], 0.0);
                assert!((corner[1] - c2).abs() < 1e-15);
            }
            RegionShape::Curved => panic!("expected rectangle"),
        }
        assert!(region.contains([0.0, c2]));
        assert!(!region.contains([1e-12, c2]));
    }

    #[test]
    fn antithetic_traced_by_rays() {
        let cov = BvnCov::new(1.0, 1.0, -1.0).unwrap();
        let region = trace_boundary(&cov, 0.2, 32).unwrap();
        assert_eq!(region.shape, RegionShape::Curved);
        for z in &region.vertices {
            assert!((phi(z[0]) + phi(z[1]) - 0.2).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(trace_boundary(&BvnCov::identity(), 0.0, 64).is_err());
        assert!(trace_boundary(&BvnCov::identity(), 0.1, 8).is_err());
        assert!(psi_inv_membership([0.0, 0.0], &BvnCov::identity(), 1.0).is_err());
    }

    #[test]
    fn membership_spot_checks() {
        let cov = v_of(0.5);
        assert!(psi_inv_membership([-10.0 * cov.sd1(), -10.0 * cov.sd2()], &cov, 0.01).unwrap());
        assert!(!psi_inv_membership([0.0, 0.0], &cov, 0.1).unwrap());
    }

    #[test]
    fn uniform_shift_lands_on_boundary() {
        let cov = v_of(0.5);
        let z = [0.0, 0.0];
        let nu = uniform_shift_into(z, &cov, 0.1);
        assert!(nu > 0.0);
        assert!(membership_unchecked([-nu, -nu], &cov, 0.1));
        assert!(!membership_unchecked([-nu + 1e-9, -nu + 1e-9], &cov, 0.1));
    }
}
