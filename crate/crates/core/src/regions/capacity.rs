//! Capacity region and the global finite-blocklength surrogate regions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::frames::{from_vector, Frame, RegionBoundary};
use crate::error::{invalid, Result};
use crate::gaussian::{trace_boundary, BvnCov, PsiInverseRegion};
use crate::quantities::{dispersion_matrix, mi_vector, ChannelParams, CorrelationPoint};

/// Upper-right boundary of the capacity region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityBoundary {
    /// Correlation of each point, descending from 1 to 0.
    pub rho: Vec<f64>,
    /// Rate-plane points, `R1` ascending.
    pub curve: RegionBoundary,
    /// The vertical segment `R1 = I1(0)`, from the corner down to `R2 = 0`.
    pub vertical_segment: [[f64; 2]; 2],
}

/// Samples `(I1(rho), I12(rho) - I1(rho))` at `grid` correlations in `[0, 1]`.
pub fn capacity_boundary(p: &ChannelParams, grid: usize) -> Result<CapacityBoundary> {
    if grid < 2 {
        return Err(invalid("grid", format!("need at least 2 points, got {grid}")));
    }
    let rho: Vec<f64> = (0..grid)
        .map(|i| 1.0 - i as f64 / (grid - 1) as f64)
        .collect();
    let points = rho
        .iter()
        .map(|&r| {
            let m = mi_vector(p, CorrelationPoint::new(r).expect("grid lies in [0, 1]"));
            from_vector(m.as_array())
        })
        .collect::<Vec<_>>();
    let corner = *points.last().expect("grid >= 2");
    Ok(CapacityBoundary {
        rho,
        curve: RegionBoundary::new(Frame::RatePlane, points),
        vertical_segment: [corner, [corner[0], 0.0]],
    })
}

/// `I(rho) + Psi^{-1}(V(rho), eps) / sqrt(n) + offset 1` in the vector frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalRegion {
    pub rho: f64,
    pub n: u64,
    pub eps: f64,
    pub offset: f64,
    /// The unscaled `Psi^{-1}` boundary.
    pub psi_inverse: PsiInverseRegion,
    /// Boundary of the shifted region in the vector frame.
    pub boundary: RegionBoundary,
}

impl GlobalRegion {
    pub fn rate_plane(&self) -> RegionBoundary {
        self.boundary.to_frame(Frame::RatePlane)
    }
}

pub fn global_region(
    p: &ChannelParams,
    rho: CorrelationPoint,
    n: u64,
    eps: f64,
    offset: f64,
    resolution: usize,
) -> Result<GlobalRegion> {
    if n == 0 {
        return Err(invalid("n", "blocklength must be >= 1"));
    }
    if !offset.is_finite() {
        return Err(invalid("offset", "offset must be finite"));
    }
    let mi = mi_vector(p, rho);
    let cov = BvnCov::from(dispersion_matrix(p, rho));
    let psi_inverse = trace_boundary(&cov, eps, resolution)?;
    let scale = 1.0 / (n as f64).sqrt();
    let points = psi_inverse
        .vertices
        .iter()
        .map(|z| [mi.i1 + z[0] * scale + offset, mi.i12 + z[1] * scale + offset])
        .collect();
    Ok(GlobalRegion {
        rho: rho.value(),
        n,
        eps,
        offset,
        psi_inverse,
        boundary: RegionBoundary::new(Frame::Vector, points),
    })
}

/// Default correlation grid: `points` uniform values on `[0, 1]`, endpoints included.
pub fn default_rho_grid(points: usize) -> Vec<f64> {
    let m = points.max(2);
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}

/// Pareto envelope, in the rate plane, of the global regions over `rhos`.
///
/// Each correlation is traced independently; results are merged in grid order.
pub fn global_envelope(
    p: &ChannelParams,
    rhos: &[f64],
    n: u64,
    eps: f64,
    offset: f64,
    resolution: usize,
) -> Result<RegionBoundary> {
    if rhos.is_empty() {
        return Err(invalid("rho_grid", "grid must not be empty"));
    }
    let regions: Vec<GlobalRegion> = rhos
        .par_iter()
        .map(|&r| global_region(p, CorrelationPoint::new(r)?, n, eps, offset, resolution))
        .collect::<Result<_>>()?;
    let mut pts: Vec<[f64; 2]> = regions
        .iter()
        .flat_map(|g| g.rate_plane().points)
        .collect();
    Ok(RegionBoundary::new(Frame::RatePlane, pareto_front(&mut pts)))
}

/// Non-dominated points, sorted by `R1` ascending.
pub(crate) fn pareto_front(pts: &mut [[f64; 2]]) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut front = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for p in pts.iter() {
        if p[1] > best {
            front.push(*p);
            best = p[1];
        }
    }
    front.reverse();
    front
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ChannelParams {
        ChannelParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn capacity_endpoints_and_monotone() {
        let b = capacity_boundary(&unit(), 512).unwrap();
        let first = b.curve.points[0];
        assert_eq!(first[0], 0.0);
        assert_abs_diff_eq!(first[1], 0.804719, epsilon = 1e-6);
        let corner = *b.curve.points.last().unwrap();
        assert_abs_diff_eq!(corner[0], 0.346574, epsilon = 1e-6);
        assert_abs_diff_eq!(corner[1], 0.202733, epsilon = 1e-6);
        assert_eq!(b.vertical_segment[1], [corner[0], 0.0]);
        for w in b.curve.points.windows(2) {
            assert!(w[1][0] > w[0][0] && w[1][1] < w[0][1]);
        }
        assert!(capacity_boundary(&unit(), 1).is_err());
    }

    #[test]
    fn global_region_shrinks_to_mi() {
        let r = CorrelationPoint::new(0.5).unwrap();
        let g = global_region(&unit(), r, 1_000_000_000_000, 0.1, 0.0, 64).unwrap();
        let mi = mi_vector(&unit(), r);
        for v in &g.boundary.points {
            assert!((v[0] - mi.i1).abs() < 1e-5 || (v[1] - mi.i12).abs() < 1e-5);
        }
    }

    #[test]
    fn global_region_side_of_mi() {
        let r = CorrelationPoint::new(0.5).unwrap();
        let mi = mi_vector(&unit(), r);
        let low = global_region(&unit(), r, 500, 0.01, 0.0, 64).unwrap();
        assert!(low.boundary.points.iter().all(|v| v[0] < mi.i1 && v[1] < mi.i12));
        let high = global_region(&unit(), r, 500, 0.8, 0.0, 64).unwrap();
        assert!(high.boundary.points.iter().any(|v| v[0] > mi.i1 || v[1] > mi.i12));
    }

    #[test]
    fn pareto_front_filters() {
        let mut pts = vec![[0.0, 1.0], [0.5, 0.5], [0.4, 0.4], [1.0, 0.0], [0.2, 0.9]];
        let f = pareto_front(&mut pts);
        assert_eq!(f, vec![[0.0, 1.0], [0.2, 0.9], [0.5, 0.5], [1.0, 0.0]]);
    }

    #[test]
    fn envelope_is_pareto() {
        let env = global_envelope(&unit(), &default_rho_grid(9), 500, 0.1, 0.0, 32).unwrap();
        for w in env.points.windows(2) {
            assert!(w[1][0] > w[0][0] && w[1][1] < w[0][1]);
        }
    }
}
