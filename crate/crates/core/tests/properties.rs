mod common;

use gmac::gaussian::{psi_inv_membership, trace_boundary, BvnCov};
use gmac::quantities::{dispersion_matrix, sequence_moments};
use gmac::regions::frames::{from_vector, to_vector};
use gmac::regions::{local_region_case, BoundaryPoint, LocalRegion, SecondOrderPair};
use gmac::{ChannelParams, CorrelationPoint};
use proptest::prelude::*;

fn cov_at(rho: f64) -> BvnCov {
    let p = ChannelParams::new(1.0, 1.0).unwrap();
    BvnCov::from(dispersion_matrix(&p, CorrelationPoint::new(rho).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn psi_inverse_is_a_down_set(
        rho in -0.95f64..0.95,
        eps in 0.01f64..0.9,
        z1 in -3.0f64..1.0,
        z2 in -3.0f64..1.0,
        d1 in 0.0f64..2.0,
        d2 in 0.0f64..2.0,
    ) {
        let cov = cov_at(rho);
        if psi_inv_membership([z1, z2], &cov, eps).unwrap() {
            prop_assert!(psi_inv_membership([z1 - d1, z2 - d2], &cov, eps).unwrap());
        }
    }

    #[test]
    fn psi_inverse_grows_with_eps(
        rho in -0.95f64..0.95,
        eps in 0.01f64..0.8,
        step in 0.0f64..0.15,
        z1 in -2.0f64..0.5,
        z2 in -2.0f64..0.5,
    ) {
        let cov = cov_at(rho);
        if psi_inv_membership([z1, z2], &cov, eps).unwrap() {
            prop_assert!(psi_inv_membership([z1, z2], &cov, eps + step).unwrap());
        }
    }

    #[test]
    fn frame_bijection_exact_on_dyadic_points(a in -(1i64 << 20)..(1i64 << 20), b in -(1i64 << 20)..(1i64 << 20)) {
        let p = [a as f64 / 1024.0, b as f64 / 1024.0];
        prop_assert_eq!(from_vector(to_vector(p)), p);
        prop_assert_eq!(to_vector(from_vector(p)), p);
    }

    #[test]
    fn moments_invariant_under_orthogonal_maps(
        seed in any::<u64>(),
        rho in -0.95f64..0.95,
        angle in 0.0f64..std::f64::consts::TAU,
        i in 0usize..8,
        j in 0usize..8,
    ) {
        // Givens rotation of coordinates (i, j) followed by a sign flip: Gram entries are preserved
        let n = 8;
        let mut rng = common::test_rng(seed);
        use rand::Rng;
        let x1: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x2: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let rotate = |x: &[f64]| {
            let mut y = x.to_vec();
            if i != j {
                let (c, s) = (angle.cos(), angle.sin());
                y[i] = c * x[i] - s * x[j];
                y[j] = s * x[i] + c * x[j];
            }
            y[(i + 3) % n] = -y[(i + 3) % n];
            y.rotate_left(j);
            y
        };
        let p = ChannelParams::new(1.3, 0.7).unwrap();
        let r = CorrelationPoint::new(rho).unwrap();
        let a = sequence_moments(&p, r, &x1, &x2).unwrap();
        let b = sequence_moments(&p, r, &rotate(&x1), &rotate(&x2)).unwrap();
        for k in 0..2 {
            prop_assert!((a.mean[k] - b.mean[k]).abs() < 1e-10);
            for l in 0..2 {
                prop_assert!((a.cov[k][l] - b.cov[k][l]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn curved_case_beta_shift_invariance(l1 in -4.0f64..4.0, l2 in -4.0f64..4.0, beta in -5.0f64..5.0) {
        let region = curved_region();
        let LocalRegion::CurvedII { derivative: d, half_plane, .. } = region else { unreachable!() };
        let base = SecondOrderPair::new(l1, l2);
        let shifted = SecondOrderPair::new(l1 + beta * d.d1, l2 + beta * d.d2());
        // exact up to rounding of the shift itself
        if half_plane.margin(base).abs() > 1e-12 * (1.0 + beta.abs()) {
            prop_assert_eq!(region.contains(base), region.contains(shifted));
        }
    }
}

fn curved_region() -> &'static LocalRegion {
    use std::sync::OnceLock;
    static REGION: OnceLock<LocalRegion> = OnceLock::new();
    REGION.get_or_init(|| {
        let p = ChannelParams::new(1.0, 1.0).unwrap();
        let bp = BoundaryPoint::on_curve(&p, CorrelationPoint::new(0.5).unwrap()).unwrap();
        local_region_case(&bp, &p, 0.1, 512).unwrap()
    })
}

/// Membership in the union over beta of `beta D + Psi^{-1}`, by scanning beta.
fn union_over_beta(l: SecondOrderPair, d: [f64; 2], cov: &BvnCov, eps: f64, betas: &[f64]) -> bool {
    let v = l.vector();
    betas
        .iter()
        .any(|b| psi_inv_membership([v[0] - b * d[0], v[1] - b * d[1]], cov, eps).unwrap())
}

#[test]
fn curved_case_matches_brute_force_union() {
    let region = curved_region();
    let LocalRegion::CurvedII { derivative, half_plane, .. } = region else {
        panic!("expected curved case")
    };
    let cov = cov_at(0.5);
    let d = [derivative.d1, derivative.d12];
    let betas: Vec<f64> = (0..=8000).map(|i| -20.0 + i as f64 * 0.005).collect();
    let mut checked = 0;
    for i in 0..40 {
        for j in 0..40 {
            let l = SecondOrderPair::new(-3.0 + 0.15 * i as f64, -3.0 + 0.15 * j as f64);
            if half_plane.margin(l).abs() < 0.02 {
                continue;
            }
            checked += 1;
            assert_eq!(
                union_over_beta(l, d, &cov, 0.1, &betas),
                region.contains(l),
                "L = ({}, {})",
                l.l1,
                l.l2
            );
        }
    }
    assert!(checked > 1000);
}

#[test]
fn top_case_matches_brute_force_union() {
    let p = ChannelParams::new(1.0, 1.0).unwrap();
    let bp = BoundaryPoint::on_curve(&p, CorrelationPoint::new(1.0).unwrap()).unwrap();
    let region = local_region_case(&bp, &p, 0.1, 64).unwrap();
    let LocalRegion::TopIII { top, derivative } = region.clone() else {
        panic!("expected top case")
    };
    let betas: Vec<f64> = (0..=20_000).map(|i| -(i as f64) * 0.001).collect();
    for i in 0..50 {
        for j in 0..50 {
            let l = SecondOrderPair::new(-3.0 + 0.12 * i as f64, -4.0 + 0.12 * j as f64);
            let v = l.vector();
            let brute = betas
                .iter()
                .any(|b| v[0] - b * derivative.d1 <= 0.0 && v[1] - b * derivative.d12 <= top);
            // skip points within one beta step of the cone boundary
            let near = betas.iter().any(|b| {
                let (u, w) = (v[0] - b * derivative.d1, v[1] - b * derivative.d12 - top);
                u.abs() < 2e-3 && w.abs() < 2e-3
            });
            if !near {
                assert_eq!(brute, region.contains(l), "L = ({}, {})", l.l1, l.l2);
            }
        }
    }
}

#[test]
fn traced_vertices_lie_below_the_boundary_line() {
    let LocalRegion::CurvedII { half_plane, psi_inverse, .. } = curved_region() else {
        panic!("expected curved case")
    };
    for v in &psi_inverse.vertices {
        assert!(half_plane.margin(SecondOrderPair::from_vector(*v)) >= -1e-9);
    }
}

#[test]
fn resolution_doubling_is_stable() {
    let cov = cov_at(0.5);
    let coarse = trace_boundary(&cov, 0.1, 255).unwrap();
    let fine = trace_boundary(&cov, 0.1, 511).unwrap();
    for (i, c) in coarse.vertices.iter().enumerate() {
        let f = fine.vertices[2 * i + 1];
        assert!((c[0] - f[0]).abs() < 1e-6 && (c[1] - f[1]).abs() < 1e-6);
    }
}
