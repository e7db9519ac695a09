//! Local second-order regions at points of the capacity boundary.

use serde::{Deserialize, Serialize};

use super::angle::{half_plane_form, HalfPlane};
use super::frames::{RatePoint, SecondOrderPair};
use crate::error::{Error, Result};
use crate::gaussian::normal::quantile;
use crate::gaussian::region::check_eps;
use crate::gaussian::PsiInverseRegion;
use crate::quantities::{derivative_vector, dispersion_matrix, mi_vector, ChannelParams, CorrelationPoint, DerivativeVector};

/// Which part of the capacity boundary a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// `R1 = I1(0)` strictly below the corner.
    VerticalI,
    /// Both constraints tight at some `rho` in `(0, 1)`.
    CurvedII,
    /// `R1 = 0`, `R2 = I12(1)`.
    TopIII,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub rho_star: f64,
    pub rates: RatePoint,
    pub case_tag: CaseTag,
    /// Set for the corner `rho = 0` with both constraints tight, which is treated
    /// as the curved case in the limit `rho -> 0+`.
    pub corner: bool,
}

/// Tolerance for deciding that a rate pair sits on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

impl BoundaryPoint {
    /// Point with both constraints tight at `rho` in `[0, 1]`.
    pub fn on_curve(p: &ChannelParams, rho: CorrelationPoint) -> Result<Self> {
        let r = rho.value();
        if r < 0.0 {
            return Err(Error::DegenerateRho {
                rho: r,
                reason: "boundary points have rho in [0, 1]",
            });
        }
        let m = mi_vector(p, rho);
        let rates = RatePoint::new(m.i1, m.i12 - m.i1);
        Ok(if r == 1.0 {
            Self {
                rho_star: 1.0,
                rates,
                case_tag: CaseTag::TopIII,
                corner: false,
            }
        } else {
            Self {
                rho_star: r,
                rates,
                case_tag: CaseTag::CurvedII,
                corner: r == 0.0,
            }
        })
    }

    /// Point on the vertical segment `R1 = I1(0)` at height `r2`.
    pub fn vertical(p: &ChannelParams, r2: f64) -> Result<Self> {
        Self::classify(p, RatePoint::new(mi_vector(p, CorrelationPoint::new(0.0)?).i1, r2))
    }

    /// Locates `rates` on the capacity boundary.
    pub fn classify(p: &ChannelParams, rates: RatePoint) -> Result<Self> {
        let bad = || Error::InconsistentBoundaryPoint {
            r1: rates.r1,
            r2: rates.r2,
        };
        if !(rates.r1.is_finite() && rates.r2.is_finite()) || rates.r1 < -BOUNDARY_TOL || rates.r2 < -BOUNDARY_TOL {
            return Err(bad());
        }
        let zero = mi_vector(p, CorrelationPoint::new(0.0)?);
        let sum = rates.r1 + rates.r2;
        if (rates.r1 - zero.i1).abs() <= BOUNDARY_TOL {
            if sum < zero.i12 - BOUNDARY_TOL {
                return Ok(Self {
                    rho_star: 0.0,
                    rates,
                    case_tag: CaseTag::VerticalI,
                    corner: false,
                });
            }
            if (sum - zero.i12).abs() <= BOUNDARY_TOL {
                return Self::on_curve(p, CorrelationPoint::new(0.0)?).map(|b| Self { rates, ..b });
            }
            return Err(bad());
        }
        // I1(rho) = R1 inverts to rho = sqrt(1 - (e^{2 R1} - 1) / S1)
        let alpha = (2.0 * rates.r1.max(0.0)).exp_m1();
        let rho2 = 1.0 - alpha / p.s1();
        if !(0.0..=1.0).contains(&rho2) {
            return Err(bad());
        }
        let rho = CorrelationPoint::new(rho2.sqrt())?;
        let m = mi_vector(p, rho);
        if (sum - m.i12).abs() > BOUNDARY_TOL {
            return Err(bad());
        }
        Self::on_curve(p, rho).map(|b| Self { rates, ..b })
    }
}

/// Local second-order region in the `(L1, L2)` frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum LocalRegion {
    /// `L1 <= threshold`, `L2` free.
    VerticalI { threshold: f64 },
    /// Union over all real `beta` of `beta D(rho) + Psi^{-1}(V(rho), eps)`,
    /// equal to the half-plane `L2 <= a L1 + b`.
    CurvedII {
        rho: f64,
        derivative: DerivativeVector,
        half_plane: HalfPlane,
        psi_inverse: PsiInverseRegion,
        corner: bool,
    },
    /// Union over `beta <= 0` of `beta D(1) + [0, top]^-` in the vector frame.
    TopIII { top: f64, derivative: DerivativeVector },
}

impl LocalRegion {
    pub fn contains(&self, l: SecondOrderPair) -> bool {
        match self {
            LocalRegion::VerticalI { threshold } => l.l1 <= *threshold,
            LocalRegion::CurvedII { half_plane, .. } => half_plane.contains(l),
            LocalRegion::TopIII { top, derivative } => top_cone_contains(l, *top, derivative),
        }
    }
}

fn top_cone_contains(l: SecondOrderPair, top: f64, d: &DerivativeVector) -> bool {
    // u = -beta >= 0 must satisfy l1 + u d1 <= 0 and l1 + l2 + u d12 <= top
    let lower = (l.l1 / -d.d1).max(0.0);
    let upper = (top - (l.l1 + l.l2)) / d.d12;
    lower <= upper
}

/// Local region at `bp`, tracing `Psi^{-1}` at `resolution` directions when needed.
pub fn local_region_case(bp: &BoundaryPoint, p: &ChannelParams, eps: f64, resolution: usize) -> Result<LocalRegion> {
    check_eps(eps)?;
    let check = BoundaryPoint::classify(p, bp.rates)?;
    if check.case_tag != bp.case_tag || (check.rho_star - bp.rho_star).abs() > 1e-6 {
        return Err(Error::InconsistentBoundaryPoint {
            r1: bp.rates.r1,
            r2: bp.rates.r2,
        });
    }
    match bp.case_tag {
        CaseTag::VerticalI => {
            let v1 = dispersion_matrix(p, CorrelationPoint::new(0.0)?).v1;
            Ok(LocalRegion::VerticalI {
                threshold: v1.sqrt() * quantile(eps),
            })
        }
        CaseTag::CurvedII => {
            // the corner uses the one-sided limit rho -> 0+
            let rho = if bp.corner { 1e-9 } else { bp.rho_star };
            let rho = CorrelationPoint::new(rho)?;
            let form = half_plane_form(p, rho, eps, resolution)?;
            Ok(LocalRegion::CurvedII {
                rho: bp.rho_star,
                derivative: derivative_vector(p, rho),
                half_plane: form.half_plane,
                psi_inverse: form.psi_inverse,
                corner: bp.corner,
            })
        }
        CaseTag::TopIII => {
            let one = CorrelationPoint::new(1.0)?;
            Ok(LocalRegion::TopIII {
                top: dispersion_matrix(p, one).v12.sqrt() * quantile(eps),
                derivative: derivative_vector(p, one),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> ChannelParams {
        ChannelParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn classify_cases() {
        let p = unit();
        let bp = BoundaryPoint::vertical(&p, 0.1).unwrap();
        assert_eq!(bp.case_tag, CaseTag::VerticalI);
        let bp = BoundaryPoint::on_curve(&p, CorrelationPoint::new(0.5).unwrap()).unwrap();
        let again = BoundaryPoint::classify(&p, bp.rates).unwrap();
        assert_eq!(again.case_tag, CaseTag::CurvedII);
        assert_abs_diff_eq!(again.rho_star, 0.5, epsilon = 1e-9);
        let top = BoundaryPoint::classify(&p, RatePoint::new(0.0, 0.5 * 5f64.ln())).unwrap();
        assert_eq!(top.case_tag, CaseTag::TopIII);
        let corner = BoundaryPoint::classify(&p, RatePoint::new(0.5 * 2f64.ln(), 0.5 * 1.5f64.ln())).unwrap();
        assert!(corner.corner && corner.case_tag == CaseTag::CurvedII);
        assert!(BoundaryPoint::classify(&p, RatePoint::new(0.1, 0.1)).is_err());
        assert!(BoundaryPoint::classify(&p, RatePoint::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn vertical_threshold() {
        let p = unit();
        let bp = BoundaryPoint::vertical(&p, 0.1).unwrap();
        match local_region_case(&bp, &p, 0.1, 64).unwrap() {
            LocalRegion::VerticalI { threshold } => assert_abs_diff_eq!(threshold, -0.784787, epsilon = 1e-6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn curved_beta_shift_invariance() {
        let p = unit();
        let bp = BoundaryPoint::on_curve(&p, CorrelationPoint::new(0.5).unwrap()).unwrap();
        let region = local_region_case(&bp, &p, 0.1, 128).unwrap();
        let LocalRegion::CurvedII { derivative: d, .. } = &region else {
            panic!("expected curved case")
        };
        for (l1, l2) in [(-1.0, -0.5), (0.3, -3.0), (-2.0, 2.5), (0.0, 0.0)] {
            for beta in [-1.0, 1.0] {
                let shifted = SecondOrderPair::new(l1 + beta * d.d1, l2 + beta * d.d2());
                assert_eq!(region.contains(SecondOrderPair::new(l1, l2)), region.contains(shifted));
            }
        }
    }

    #[test]
    fn top_cone_membership() {
        let p = unit();
        let bp = BoundaryPoint::on_curve(&p, CorrelationPoint::new(1.0).unwrap()).unwrap();
        let region = local_region_case(&bp, &p, 0.1, 64).unwrap();
        let LocalRegion::TopIII { top, derivative } = region.clone() else {
            panic!("expected top case")
        };
        assert_abs_diff_eq!(derivative.d1, -1.0, epsilon = 1e-15);
        assert!(region.contains(SecondOrderPair::new(0.0, top)));
        assert!(!region.contains(SecondOrderPair::new(0.0, top + 1e-9)));
        // beta = -1 shifts (0, top) to (S1, top + d12) in the vector frame
        let shifted = SecondOrderPair::from_vector([-derivative.d1, top - derivative.d12 - 1e-12]);
        assert!(region.contains(shifted));
        assert!(shifted.l1 > 0.0);
    }
}
