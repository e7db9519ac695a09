//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `Pr(X <= h, Y <= k)` for standard normals with correlation `r`, |r| < 1,
/// as `int_{-inf}^{h} phi(x) Phi((k - r x) / sqrt(1 - r^2)) dx`.
pub fn bvn_oracle(h: f64, k: f64, r: f64) -> f64 {
    let s = (1.0 - r * r).sqrt();
    let f = |x: f64| std_normal_pdf(x) * std_normal_cdf((k - r * x) / s);
    let lo = -12.0;
    if h <= lo {
        return 0.0;
    }
    // split at the integrand's kink region around the conditional threshold
    let mut cuts = vec![lo, h.min(12.0)];
    for c in [-6.0, -3.0, 0.0, 3.0, 6.0] {
        if c > lo && c < h.min(12.0) {
            cuts.push(c);
        }
    }
    if r.abs() > 1e-12 {
        let c = k / r;
        if c > lo && c < h.min(12.0) {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).map(|w| integrate(&f, w[0], w[1], 1e-14)).sum()
}

/// Seeded generator for test-side random configurations.
pub fn test_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
