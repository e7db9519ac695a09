//! Numerical checks of the continuity and rectangle-sandwich properties of
//! `Psi^{-1}`.

use serde::{Deserialize, Serialize};

use super::bivariate::BvnCov;
use super::normal::{phi, quantile};
use super::region::{check_eps, membership_unchecked, trace_boundary, uniform_shift_into};
use crate::error::{invalid, Error, Result};
use crate::quantities::{dispersion_matrix, ChannelParams, CorrelationPoint};

/// Outcome of the uniform-shift continuity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub lambda: f64,
    /// Smallest `nu` with `Psi^{-1}(eps + lambda) within Psi^{-1}(eps) + nu 1` over the window.
    pub nu: f64,
    pub ratio: f64,
    /// `z1` extent of the traced boundary over which the supremum was taken.
    pub window: [f64; 2],
}

/// Uniform shift needed to cover `Psi^{-1}(cov, eps + lambda)` by
/// `Psi^{-1}(cov, eps)`, evaluated over the traced boundary of the larger set.
pub fn lemma1_shift_check(cov: &BvnCov, eps: f64, lambda: f64, resolution: usize) -> Result<ShiftReport> {
    check_eps(eps)?;
    if !(lambda > 0.0) {
        return Err(invalid("lambda", format!("shift must be > 0, got {lambda}")));
    }
    check_eps(eps + lambda)?;
    let outer = trace_boundary(cov, eps + lambda, resolution)?;
    let nu = outer
        .vertices
        .iter()
        .map(|z| uniform_shift_into(*z, cov, eps))
        .fold(0.0, f64::max);
    let first = outer.vertices.first().map_or(0.0, |v| v[0]);
    let last = outer.vertices.last().map_or(0.0, |v| v[0]);
    Ok(ShiftReport {
        lambda,
        nu,
        ratio: nu / lambda,
        window: [first, last],
    })
}

/// Inner and outer quadrants bracketing `Psi^{-1}(V(rho), eps)` near full correlation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Corner of `[0, sqrt(V12(1)) Phi^{-1}(eps + a)]^- - b 1`.
    pub inner_corner: [f64; 2],
    /// Corner of `[0, sqrt(V12(1)) Phi^{-1}(eps)]^- + c 1`.
    pub outer_corner: [f64; 2],
    pub vertices_checked: usize,
}

/// Builds the sandwich quadrants at `rho` in `(0.9, 1]` and verifies them
/// against the traced boundary.
pub fn lemma2_sandwich(p: &ChannelParams, rho: f64, eps: f64, resolution: usize) -> Result<SandwichReport> {
    check_eps(eps)?;
    if !(rho > 0.9 && rho <= 1.0) {
        return Err(invalid("rho", format!("sandwich needs rho in (0.9, 1], got {rho}")));
    }
    let v_rho = dispersion_matrix(p, CorrelationPoint::new(rho)?);
    let v_one = dispersion_matrix(p, CorrelationPoint::new(1.0)?);
    let q_eps = quantile(eps);
    let top = v_one.v12.sqrt() * q_eps;

    let (a, b, c) = if rho == 1.0 {
        (0.0, 0.0, 0.0)
    } else {
        let b = (1.0 - rho).powf(0.25);
        let q = 1.0 - eps + phi(-b / v_rho.v1.sqrt());
        if q >= 1.0 {
            return Err(Error::SandwichViolation(format!(
                "inner quadrant undefined at rho={rho}: required mass {q} >= 1"
            )));
        }
        let a = phi((b - v_rho.v12.sqrt() * quantile(q)) / v_one.v12.sqrt()) - eps;
        let c_top = v_rho.v12.sqrt() * q_eps - top;
        let c_left = v_rho.v1.sqrt() * q_eps;
        (a, b, c_top.abs().max(c_left.abs()))
    };
    let inner_level = eps + a;
    if !(inner_level > 0.0 && inner_level < 1.0) {
        return Err(Error::SandwichViolation(format!(
            "inner level eps + a = {inner_level} outside (0, 1)"
        )));
    }
    let inner_corner = [-b, v_one.v12.sqrt() * quantile(inner_level) - b];
    let outer_corner = [c, top + c];

    let cov = BvnCov::from(v_rho);
    let region = trace_boundary(&cov, eps, resolution)?;
    if !membership_unchecked(inner_corner, &cov, eps) {
        return Err(Error::SandwichViolation(format!(
            "inner corner ({}, {}) is not a member at rho={rho}",
            inner_corner[0], inner_corner[1]
        )));
    }
    for z in &region.vertices {
        if z[0] > outer_corner[0] || z[1] > outer_corner[1] {
            return Err(Error::SandwichViolation(format!(
                "vertex ({}, {}) escapes the outer quadrant at rho={rho}",
                z[0], z[1]
            )));
        }
        if z[0] < inner_corner[0] && z[1] < inner_corner[1] {
            return Err(Error::SandwichViolation(format!(
                "vertex ({}, {}) lies inside the inner quadrant at rho={rho}",
                z[0], z[1]
            )));
        }
    }
    Ok(SandwichReport {
        rho,
        a,
        b,
        c,
        inner_corner,
        outer_corner,
        vertices_checked: region.vertices.len(),
    })
}

/// Least-squares slopes of `ln a`, `ln b`, `ln c` against `ln(1 - rho)`.
pub fn sandwich_exponents(reports: &[SandwichReport]) -> Result<[f64; 3]> {
    let usable: Vec<&SandwichReport> = reports
        .iter()
        .filter(|r| r.rho < 1.0 && r.a > 0.0 && r.b > 0.0 && r.c > 0.0)
        .collect();
    if usable.len() < 2 {
        return Err(invalid("reports", "need at least two points with rho < 1"));
    }
    let xs: Vec<f64> = usable.iter().map(|r| (1.0 - r.rho).ln()).collect();
    let slope = |ys: Vec<f64>| log_slope(&xs, &ys);
    Ok([
        slope(usable.iter().map(|r| r.a.ln()).collect()),
        slope(usable.iter().map(|r| r.b.ln()).collect()),
        slope(usable.iter().map(|r| r.c.ln()).collect()),
    ])
}

pub(crate) fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
