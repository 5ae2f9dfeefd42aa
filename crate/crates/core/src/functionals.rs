//! Exact k=1 Ornstein–Uhlenbeck/Gaussian calculus: entropy, Fisher
//! information, W₂, the energy identity, and the metric slope.
//!
//! The reference measure is N(0,1), the invariant law of the k=1 bulk
//! model. Fisher normalisation: this module's F(ν) = ∫|∇log(dν/dμ)|² dν
//! satisfies dH/dt = −F along the Full-speed flow and slope² = F; the
//! factor-4 convention F_4E = F/4 matching the slope-squared display as
//! |D⁻H|² = 4·F_4E is exposed separately.

use crate::dynamics::Speed;
use serde::{Deserialize, Serialize};

/// A one-dimensional Gaussian N(mean, variance), variance > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLaw {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianLaw {
    pub fn new(mean: f64, variance: f64) -> Self {
        assert!(variance > 0.0, "variance must be positive");
        Self { mean, variance }
    }

    pub fn standard() -> Self {
        Self::new(0.0, 1.0)
    }
}

/// Law of the OU flow at time t started from g.
///
/// Full speed (dX = −X dt + √2 dB): (m e^{−t}, 1 + (v−1)e^{−2t});
/// Half speed (dX = −X/2 dt + dB): (m e^{−t/2}, 1 + (v−1)e^{−t}).
pub fn ou_evolve(g: GaussianLaw, t: f64, speed: Speed) -> GaussianLaw {
    assert!(t >= 0.0);
    let (em, ev) = match speed {
        Speed::Full => ((-t).exp(), (-2.0 * t).exp()),
        Speed::Half => ((-0.5 * t).exp(), (-t).exp()),
    };
    GaussianLaw::new(g.mean * em, 1.0 + (g.variance - 1.0) * ev)
}

/// Time derivatives (ṁ, v̇) of the OU flow at the state g.
pub fn ou_velocity(g: GaussianLaw, speed: Speed) -> (f64, f64) {
    match speed {
        Speed::Full => (-g.mean, -2.0 * (g.variance - 1.0)),
        Speed::Half => (-0.5 * g.mean, -(g.variance - 1.0)),
    }
}

/// W₂ between Gaussians via the quantile coupling:
/// √((m₁−m₂)² + (√v₁−√v₂)²).
pub fn gaussian_w2(a: GaussianLaw, b: GaussianLaw) -> f64 {
    let dm = a.mean - b.mean;
    let ds = a.variance.sqrt() - b.variance.sqrt();
    (dm * dm + ds * ds).sqrt()
}

/// Relative entropy H_μ(ν) = ∫ ρ log ρ dμ for Gaussians:
/// ½((m_ν−m_μ)²/v_μ + v_ν/v_μ − 1 − log(v_ν/v_μ)).
pub fn gaussian_entropy(nu: GaussianLaw, mu: GaussianLaw) -> f64 {
    let dm = nu.mean - mu.mean;
    let ratio = nu.variance / mu.variance;
    0.5 * (dm * dm / mu.variance + ratio - 1.0 - ratio.ln())
}

/// Fisher information F(ν) = ∫ |d/dx log(dν/dμ)|² dν in closed form:
/// v_ν (1/v_μ − 1/v_ν)² + (m_ν−m_μ)²/v_μ².
pub fn gaussian_fisher(nu: GaussianLaw, mu: GaussianLaw) -> f64 {
    let a = 1.0 / mu.variance - 1.0 / nu.variance;
    let b = (nu.mean - mu.mean) / mu.variance;
    nu.variance * a * a + b * b
}

/// The paper-normalised Fisher information with |D⁻H|² = 4·F.
pub fn gaussian_fisher_quarter(nu: GaussianLaw, mu: GaussianLaw) -> f64 {
    0.25 * gaussian_fisher(nu, mu)
}

/// Max over an n-point time grid of |dH/dt + F(ν_t)| along the Full-speed
/// flow started at g0, both sides analytic.
pub fn energy_identity_residual(g0: GaussianLaw, t_end: f64, n_steps: usize) -> f64 {
    assert!(n_steps >= 1);
    let mu = GaussianLaw::standard();
    let mut worst = 0.0_f64;
    for i in 0..=n_steps {
        let t = t_end * i as f64 / n_steps as f64;
        let g = ou_evolve(g0, t, Speed::Full);
        let (md, vd) = ou_velocity(g, Speed::Full);
        // dH/dt = m·ṁ + ½(1 − 1/v)·v̇
        let dh = g.mean * md + 0.5 * (1.0 - 1.0 / g.variance) * vd;
        let fisher = gaussian_fisher(g, mu);
        worst = worst.max((dh + fisher).abs());
    }
    worst
}

/// Descending W₂-slope of the entropy at a unit-variance Gaussian and
/// √F; the two coincide (both equal |m|).
///
/// The slope is the mean-perturbation limsup of (H(ν) − H(σ))⁺/W₂(σ, ν),
/// evaluated in closed form; a finite-perturbation estimate is in
/// [`numeric_descending_slope`].
pub fn metric_slope_check(g: GaussianLaw) -> (f64, f64) {
    assert!(
        (g.variance - 1.0).abs() < 1e-12,
        "slope identity stated at unit variance"
    );
    let slope = g.mean.abs();
    let sqrt_fisher = gaussian_fisher(g, GaussianLaw::standard()).sqrt();
    debug_assert!((slope - sqrt_fisher).abs() <= 1e-10);
    (slope, sqrt_fisher)
}

/// Finite-perturbation estimate of the descending slope: max decrease
/// ratio over mean and standard-deviation perturbations of size delta.
pub fn numeric_descending_slope(g: GaussianLaw, delta: f64) -> f64 {
    let mu = GaussianLaw::standard();
    let h0 = gaussian_entropy(g, mu);
    let mut best = 0.0_f64;
    let s = g.variance.sqrt();
    let candidates = [
        GaussianLaw::new(g.mean + delta, g.variance),
        GaussianLaw::new(g.mean - delta, g.variance),
        GaussianLaw::new(g.mean, (s + delta) * (s + delta)),
        GaussianLaw::new(g.mean, (s - delta) * (s - delta)),
    ];
    for c in candidates {
        let drop = h0 - gaussian_entropy(c, mu);
        if drop > 0.0 {
            best = best.max(drop / gaussian_w2(g, c));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ou_evolve_examples() {
        let g = GaussianLaw::new(1.0, 1.0);
        assert_eq!(ou_evolve(g, 0.0, Speed::Full), g);
        let inv = GaussianLaw::standard();
        for &t in &[0.1, 1.0, 7.0] {
            assert_eq!(ou_evolve(inv, t, Speed::Full), inv);
            assert_eq!(ou_evolve(inv, t, Speed::Half), inv);
        }
        let at = ou_evolve(g, 0.1, Speed::Full);
        assert!((at.mean - (-0.1_f64).exp()).abs() < 1e-15);
        assert!((at.variance - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ou_semigroup_property() {
        let g = GaussianLaw::new(-2.0, 3.5);
        for speed in [Speed::Full, Speed::Half] {
            let a = ou_evolve(ou_evolve(g, 0.3, speed), 0.9, speed);
            let b = ou_evolve(g, 1.2, speed);
            assert!((a.mean - b.mean).abs() < 1e-14);
            assert!((a.variance - b.variance).abs() < 1e-14);
        }
    }

    #[test]
    fn w2_closed_forms() {
        let std = GaussianLaw::standard();
        assert_eq!(gaussian_w2(std, std), 0.0);
        assert!((gaussian_w2(std, GaussianLaw::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((gaussian_w2(std, GaussianLaw::new(0.0, 4.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn w2_triangle_inequality() {
        let mut state = 123456789u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
        };
        for _ in 0..300 {
            let g1 = GaussianLaw::new(next(), next().abs() + 0.1);
            let g2 = GaussianLaw::new(next(), next().abs() + 0.1);
            let g3 = GaussianLaw::new(next(), next().abs() + 0.1);
            let lhs = gaussian_w2(g1, g3);
            let rhs = gaussian_w2(g1, g2) + gaussian_w2(g2, g3);
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn entropy_closed_forms() {
        let mu = GaussianLaw::standard();
        assert_eq!(gaussian_entropy(mu, mu), 0.0);
        assert!((gaussian_entropy(GaussianLaw::new(1.0, 1.0), mu) - 0.5).abs() < 1e-15);
        let v4 = gaussian_entropy(GaussianLaw::new(0.0, 4.0), mu);
        assert!((v4 - 0.5 * (3.0 - 4.0_f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn entropy_contracts_along_the_flow() {
        let mu = GaussianLaw::standard();
        for g0 in [GaussianLaw::new(2.0, 0.3), GaussianLaw::new(-1.0, 5.0)] {
            let mut prev = gaussian_entropy(g0, mu);
            for i in 1..=30 {
                let h = gaussian_entropy(ou_evolve(g0, i as f64 * 0.1, Speed::Full), mu);
                assert!(h <= prev + 1e-13);
                prev = h;
            }
        }
    }

    #[test]
    fn fisher_closed_form_and_quadrature_oracle() {
        let mu = GaussianLaw::standard();
        assert_eq!(gaussian_fisher(mu, mu), 0.0);
        let m = 1.7;
        assert!((gaussian_fisher(GaussianLaw::new(m, 1.0), mu) - m * m).abs() < 1e-14);

        // quadrature of the defining integral
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let nu = GaussianLaw::new(next() * 2.0 - 1.0, 0.3 + 2.0 * next());
            let mu = GaussianLaw::new(next() * 2.0 - 1.0, 0.3 + 2.0 * next());
            let f = gaussian_fisher(nu, mu);
            let s = nu.variance.sqrt();
            let integrand = |x: f64| {
                let grad = -(x - nu.mean) / nu.variance + (x - mu.mean) / mu.variance;
                let dens = (-(x - nu.mean) * (x - nu.mean) / (2.0 * nu.variance)).exp()
                    / (s * (2.0 * std::f64::consts::PI).sqrt());
                grad * grad * dens
            };
            let by_quad = crate::quad::adaptive_simpson(
                &integrand,
                nu.mean - 12.0 * s,
                nu.mean + 12.0 * s,
                1e-12,
            );
            assert!((f - by_quad).abs() < 1e-8, "closed {f} vs quad {by_quad}");
        }
    }

    #[test]
    fn energy_identity_residuals() {
        assert!(energy_identity_residual(GaussianLaw::new(1.0, 1.0), 2.0, 50) <= 1e-12);
        assert!(energy_identity_residual(GaussianLaw::standard(), 2.0, 50) <= 1e-15);
        // the identity holds for variance flows too
        assert!(energy_identity_residual(GaussianLaw::new(0.5, 2.5), 2.0, 50) <= 1e-12);
    }

    #[test]
    fn finite_difference_dh_dt_matches_analytic() {
        let mu = GaussianLaw::standard();
        let g0 = GaussianLaw::new(1.0, 1.0);
        let dt = 1e-4;
        for &t in &[0.0, 0.5, 1.5] {
            let g = ou_evolve(g0, t, Speed::Full);
            let (md, vd) = ou_velocity(g, Speed::Full);
            let analytic = g.mean * md + 0.5 * (1.0 - 1.0 / g.variance) * vd;
            let fd = (gaussian_entropy(ou_evolve(g0, t + dt, Speed::Full), mu)
                - gaussian_entropy(ou_evolve(g0, (t - dt).max(0.0), Speed::Full), mu))
                / (if t == 0.0 { dt } else { 2.0 * dt });
            assert!((fd - analytic).abs() < 1e-6, "t={t}: {fd} vs {analytic}");
        }
    }

    #[test]
    fn slope_identity() {
        assert_eq!(metric_slope_check(GaussianLaw::standard()), (0.0, 0.0));
        let (s, f) = metric_slope_check(GaussianLaw::new(2.0, 1.0));
        assert!((s - 2.0).abs() < 1e-15 && (f - 2.0).abs() < 1e-15);
        // perturbation-based estimate converges to |m|
        let est = numeric_descending_slope(GaussianLaw::new(2.0, 1.0), 1e-5);
        assert!((est - 2.0).abs() < 1e-4, "numeric slope {est}");
    }
}
