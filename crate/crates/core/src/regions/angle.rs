//! Half-plane form of the curved-segment local region and the geometry of
//! approaching a boundary point along a fixed angle.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::frames::SecondOrderPair;
use crate::error::{invalid, Error, Result};
use crate::gaussian::normal::quantile;
use crate::gaussian::region::{boundary_on_ray, check_eps, ray_angles};
use crate::gaussian::{trace_boundary, BvnCov, PsiInverseRegion};
use crate::quantities::{
    derivative_vector, dispersion_matrix, gaussian_capacity, gaussian_dispersion, ChannelParams, CorrelationPoint,
};

/// Maximisers closer than this in objective value count as ties.
pub const TIE_TOL: f64 = 1e-9;

/// `{ (L1, L2) : L2 <= a L1 + b }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    /// Point of `Psi^{-1}` (in the `L` frame) where the boundary line touches it.
    pub tangency: SecondOrderPair,
    /// `atan2(L2, L1)` of the tangency point, in `[0, 2 pi)`.
    pub theta_star: f64,
    /// Set when the maximiser is not unique within [`TIE_TOL`]; `tangency` is then the midpoint.
    pub tie: bool,
}

impl HalfPlane {
    pub fn contains(&self, l: SecondOrderPair) -> bool {
        l.l2 <= self.a * l.l1 + self.b
    }

    /// Signed distance of `l2` below the boundary line (positive inside).
    pub fn margin(&self, l: SecondOrderPair) -> f64 {
        self.a * l.l1 + self.b - l.l2
    }
}

/// Half-plane form together with the traced region it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneForm {
    pub half_plane: HalfPlane,
    pub psi_inverse: PsiInverseRegion,
}

pub(crate) fn check_interior_rho(rho: CorrelationPoint) -> Result<f64> {
    let r = rho.value();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DegenerateRho {
            rho: r,
            reason: "half-plane form needs rho in (0, 1)",
        });
    }
    Ok(r)
}

/// Slope `D2 / D1` of the local boundary line.
pub fn slope(p: &ChannelParams, rho: CorrelationPoint) -> Result<f64> {
    check_interior_rho(rho)?;
    let d = derivative_vector(p, rho);
    Ok(d.d2() / d.d1)
}

#[inline]
fn objective(z: [f64; 2], a: f64) -> f64 {
    // L = (z1, z2 - z1), objective L2 - a L1
    (z[1] - z[0]) - a * z[0]
}

/// `a = D2 / D1` and `b = max { L2 - a L1 }` over the boundary of `Psi^{-1}(V(rho), eps)`.
pub fn half_plane_form(p: &ChannelParams, rho: CorrelationPoint, eps: f64, resolution: usize) -> Result<HalfPlaneForm> {
    check_eps(eps)?;
    let a = slope(p, rho)?;
    let cov = BvnCov::from(dispersion_matrix(p, rho));
    let region = trace_boundary(&cov, eps, resolution)?;
    let angles = ray_angles(resolution);
    let obj: Vec<f64> = region.vertices.iter().map(|z| objective(*z, a)).collect();
    let best = obj
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1))
        .map(|(i, _)| i)
        .expect("resolution >= 16");

    let lo = if best == 0 { 0.5 * angles[0] } else { angles[best - 1] };
    let hi = if best + 1 == angles.len() {
        0.5 * (angles[best] + PI / 2.0)
    } else {
        angles[best + 1]
    };
    let f = |phi: f64| -> Result<([f64; 2], f64)> {
        let z = boundary_on_ray(&cov, eps, phi)?;
        Ok((z, objective(z, a)))
    };
    let (mut z_best, mut f_best) = golden_max(&f, lo, hi)?;
    if obj[best] > f_best {
        z_best = region.vertices[best];
        f_best = obj[best];
    }

    // a separate local maximum of equal height means the tangency is not unique
    let mut tie = false;
    let mut far = z_best;
    for j in 0..obj.len() {
        if j + 1 >= best && j <= best + 1 {
            continue;
        }
        let left = if j == 0 { f64::NEG_INFINITY } else { obj[j - 1] };
        let right = obj.get(j + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if obj[j] >= left && obj[j] >= right && obj[j] >= f_best - TIE_TOL {
            tie = true;
            far = region.vertices[j];
        }
    }
    if tie {
        z_best = [0.5 * (z_best[0] + far[0]), 0.5 * (z_best[1] + far[1])];
    }
    let tangency = SecondOrderPair::from_vector(z_best);
    Ok(HalfPlaneForm {
        half_plane: HalfPlane {
            a,
            b: f_best,
            tangency,
            theta_star: wrap(tangency.l2.atan2(tangency.l1)),
            tie,
        },
        psi_inverse: region,
    })
}

fn golden_max<F>(f: &F, mut lo: f64, mut hi: f64) -> Result<([f64; 2], f64)>
where
    F: Fn(f64) -> Result<([f64; 2], f64)>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > 1e-12 {
        if f1.1 < f2.1 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1.1 >= f2.1 { f1 } else { f2 })
}

#[inline]
fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Point where the ray at angle `theta` meets the boundary line of `hp`.
pub fn angle_intersection(hp: &HalfPlane, theta: f64) -> Result<SecondOrderPair> {
    let den = theta.sin() - hp.a * theta.cos();
    if den.abs() < 1e-12 * (1.0 + hp.a.abs()) {
        return Err(Error::ParallelApproach { theta });
    }
    let t = hp.b / den;
    Ok(SecondOrderPair::new(t * theta.cos(), t * theta.sin()))
}

/// Angles at which approach directions run parallel to the boundary line.
pub fn critical_angles(a: f64) -> [f64; 2] {
    [PI + a.atan(), TAU + a.atan()]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub theta_frac: f64,
    pub l1: f64,
    pub l2: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSweep {
    pub half_plane: HalfPlane,
    pub critical: [f64; 2],
    /// Rows sorted by `theta` in `[0, 2 pi)`.
    pub rows: Vec<SweepRow>,
}

/// Sweeps `theta` over both arcs between the critical angles with `grid`
/// midpoint samples in total.
pub fn angle_sweep(p: &ChannelParams, rho: CorrelationPoint, eps: f64, grid: usize, resolution: usize) -> Result<AngleSweep> {
    if grid < 8 {
        return Err(invalid("grid", format!("sweep needs at least 8 angles, got {grid}")));
    }
    let hp = half_plane_form(p, rho, eps, resolution)?.half_plane;
    let critical = critical_angles(hp.a);
    Ok(AngleSweep {
        rows: sweep_rows(&hp, critical, grid),
        half_plane: hp,
        critical,
    })
}

pub(crate) fn sweep_rows(hp: &HalfPlane, critical: [f64; 2], grid: usize) -> Vec<SweepRow> {
    let per_arc = grid / 2;
    let mut rows = Vec::with_capacity(2 * per_arc);
    for start in critical {
        for i in 0..per_arc {
            let theta = wrap(start + PI * (i as f64 + 0.5) / per_arc as f64);
            let den = theta.sin() - hp.a * theta.cos();
            let t = hp.b / den;
            rows.push(SweepRow {
                theta,
                theta_frac: theta / TAU,
                l1: t * theta.cos(),
                l2: t * theta.sin(),
                norm: hp.b.abs() / den.abs(),
            });
        }
    }
    rows.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    rows
}

/// `n C(S) + sqrt(n V(S)) Phi^{-1}(eps) + offset`, in nats.
pub fn single_user_expansion(s: f64, n: u64, eps: f64, offset: f64) -> Result<f64> {
    check_eps(eps)?;
    if n == 0 {
        return Err(invalid("n", "blocklength must be >= 1"));
    }
    let nf = n as f64;
    Ok(nf * gaussian_capacity(s)? + (nf * gaussian_dispersion(s)?).sqrt() * quantile(eps) + offset)
}
