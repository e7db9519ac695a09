mod common;

use common::bvn_oracle;
use gmac::gaussian::{psi, BvnCov};

fn grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

#[test]
fn psi_matches_quadrature_on_grid() {
    let mut worst = 0.0f64;
    for &r in &grid(-0.9, 0.9, 19) {
        let cov = BvnCov::unit_correlation(r).unwrap();
        for &h in &grid(-5.0, 5.0, 21) {
            for &k in &grid(-5.0, 5.0, 21) {
                let err = (psi(h, k, &cov) - bvn_oracle(h, k, r)).abs();
                worst = worst.max(err);
            }
        }
    }
    assert!(worst <= 1e-8, "max error {worst}");
}

#[test]
fn psi_scales_with_covariance() {
    let cov = BvnCov::new(4.0, 0.25, 0.3).unwrap();
    let r = 0.3 / (2.0 * 0.5);
    for (z1, z2) in [(-1.0, 0.2), (0.5, -0.7), (3.0, 1.0)] {
        let want = bvn_oracle(z1 / 2.0, z2 / 0.5, r);
        assert!((psi(z1, z2, &cov) - want).abs() < 1e-8);
    }
}

#[test]
fn closed_form_at_origin() {
    for &r in &grid(-0.99, 0.99, 67) {
        let cov = BvnCov::unit_correlation(r).unwrap();
        let want = 0.25 + r.asin() / (2.0 * std::f64::consts::PI);
        assert!((psi(0.0, 0.0, &cov) - want).abs() <= 1e-9, "r={r}");
    }
}
