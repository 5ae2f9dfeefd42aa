//! Random generation of k-particle states under the bulk/edge invariant
//! densities and of sine₂/Airy₂ window approximations via random-matrix
//! scalings, with a Metropolis-adjusted Langevin fallback sampler.
//!
//! Conventions: the tridiagonal Hermite model is normalised so that the
//! eigenvalue density is ∝ Π_{i<j}|λ_i−λ_j|² e^{−Σλ²/2} (semicircle support
//! [−2√k, 2√k], E[Σλ²] = k²). The bulk invariant density e^{−Ψ−Φ} with
//! Φ = Σx²/(2k) is the exact pushforward of that model under x = √k·λ.

use crate::configspace::{Configuration, WeylPoint, Window};
use crate::dynamics::{grad_hamiltonian_raw, hamiltonian_raw};
use crate::rng::RngStream;
use crate::tridiag;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Bulk,
    Edge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub regime: Regime,
    pub k: usize,
}

impl ModelSpec {
    pub fn new(regime: Regime, k: usize) -> Self {
        assert!(k >= 1, "particle count must be at least 1");
        Self { regime, k }
    }

    pub fn bulk(k: usize) -> Self {
        Self::new(Regime::Bulk, k)
    }

    pub fn edge(k: usize) -> Self {
        Self::new(Regime::Edge, k)
    }
}

/// Sorted spectrum of the k×k tridiagonal β=2 Hermite model:
/// diagonal N(0,1), off-diagonal χ_{2(k−i)}/√2.
pub fn sample_gue_spectrum<R: Rng + ?Sized>(k: usize, rng: &mut R) -> WeylPoint {
    assert!(k >= 1);
    loop {
        let d: Vec<f64> = (0..k).map(|_| StandardNormal.sample(rng)).collect();
        let e: Vec<f64> = (1..k)
            .map(|i| {
                let dof = 2.0 * (k - i) as f64;
                (ChiSquared::new(dof).unwrap().sample(rng) / 2.0).sqrt()
            })
            .collect();
        let ev = tridiag::eigenvalues(&d, &e);
        let desc: Vec<f64> = ev.into_iter().rev().collect();
        // Collisions have probability zero; retry on the degenerate draw.
        if let Ok(w) = WeylPoint::new(desc) {
            return w;
        }
    }
}

/// Draw from the invariant density (1/Z)e^{−Ψ−Φ}.
///
/// Bulk: exact change of variables x = √k·λ from the Hermite spectrum.
/// Edge: MALA targeting the density verbatim, initialised at the affine
/// image of a Hermite spectrum (itself stationary for this density, which
/// the cross-validation tests lean on).
pub fn sample_mu_k<R: Rng + ?Sized>(model: ModelSpec, rng: &mut R) -> WeylPoint {
    match model.regime {
        Regime::Bulk => {
            let lam = sample_gue_spectrum(model.k, rng);
            let s = (model.k as f64).sqrt();
            WeylPoint::new(lam.coords().iter().map(|l| s * l).collect()).unwrap()
        }
        Regime::Edge => {
            let init = edge_affine_gue(model.k, rng);
            let out = sample_mcmc_from(model, init, 200, 0.02, rng);
            out.state
        }
    }
}

/// Affine image of the Hermite spectrum with the exact edge density:
/// x = √2·k^{1/6}·λ − 2k^{2/3}.
pub fn edge_affine_gue<R: Rng + ?Sized>(k: usize, rng: &mut R) -> WeylPoint {
    let lam = sample_gue_spectrum(k, rng);
    let kf = k as f64;
    let a = std::f64::consts::SQRT_2 * kf.powf(1.0 / 6.0);
    let b = 2.0 * kf.powf(2.0 / 3.0);
    WeylPoint::new(lam.coords().iter().map(|l| a * l - b).collect()).unwrap()
}

#[derive(Debug, Clone)]
pub struct McmcOutput {
    pub state: WeylPoint,
    pub acceptance_rate: f64,
    /// Cleared when the chain accepted fewer than 5% of proposals.
    pub converged: bool,
}

/// Metropolis-adjusted Langevin chain targeting e^{−H} on the Weyl chamber,
/// started from an equilibrium-scale spectrum.
pub fn sample_mcmc<R: Rng + ?Sized>(
    model: ModelSpec,
    steps: usize,
    step_size: f64,
    rng: &mut R,
) -> McmcOutput {
    assert!(steps >= 1 && step_size > 0.0);
    let init = match model.regime {
        Regime::Bulk => {
            let lam = sample_gue_spectrum(model.k, rng);
            let s = (model.k as f64).sqrt();
            WeylPoint::new(lam.coords().iter().map(|l| s * l).collect()).unwrap()
        }
        Regime::Edge => edge_affine_gue(model.k, rng),
    };
    sample_mcmc_from(model, init, steps, step_size, rng)
}

/// MALA chain from an explicit initial state. Proposals that leave the open
/// chamber are rejected outright.
pub fn sample_mcmc_from<R: Rng + ?Sized>(
    model: ModelSpec,
    init: WeylPoint,
    steps: usize,
    step_size: f64,
    rng: &mut R,
) -> McmcOutput {
    let tau = step_size;
    let mut x = init.coords().to_vec();
    let mut h_x = hamiltonian_raw(model, &x).expect("initial state in open chamber");
    let mut g_x = grad_hamiltonian_raw(model, &x).expect("initial state in open chamber");
    let mut accepted = 0usize;
    for _ in 0..steps {
        let y: Vec<f64> = x
            .iter()
            .zip(&g_x)
            .map(|(xi, gi)| {
                let noise: f64 = StandardNormal.sample(rng);
                xi - tau * gi + (2.0 * tau).sqrt() * noise
            })
            .collect();
        if !strictly_decreasing(&y) {
            continue;
        }
        let (h_y, g_y) = match (hamiltonian_raw(model, &y), grad_hamiltonian_raw(model, &y)) {
            (Ok(h), Ok(g)) => (h, g),
            _ => continue,
        };
        // log q(a -> b) = -|b - a + tau grad H(a)|^2 / (4 tau)
        let log_q = |from: &[f64], to: &[f64], grad: &[f64]| -> f64 {
            let s: f64 = from
                .iter()
                .zip(to)
                .zip(grad)
                .map(|((a, b), g)| {
                    let d = b - a + tau * g;
                    d * d
                })
                .sum();
            -s / (4.0 * tau)
        };
        let log_alpha = (h_x - h_y) + log_q(&y, &x, &g_y) - log_q(&x, &y, &g_x);
        if log_alpha >= 0.0 || rng.gen::<f64>().ln() < log_alpha {
            x = y;
            h_x = h_y;
            g_x = g_y;
            accepted += 1;
        }
    }
    let rate = accepted as f64 / steps as f64;
    McmcOutput {
        state: WeylPoint::new(x).expect("chain stays in open chamber"),
        acceptance_rate: rate,
        converged: rate >= 0.05,
    }
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] > w[1])
}

/// Bulk window approximation of sine₂: Hermite spectrum rescaled to unit
/// intensity at the bulk centre, u = (√k/π)·λ, restricted to the window.
pub fn sample_sine_window<R: Rng + ?Sized>(k: usize, window: Window, rng: &mut R) -> Configuration {
    let lam = sample_gue_spectrum(k, rng);
    let s = (k as f64).sqrt() / std::f64::consts::PI;
    let pts: Vec<f64> = lam.coords().iter().map(|l| s * l).collect();
    Configuration::from_points(&pts).unwrap().restrict(window)
}

/// Edge window approximation of Airy₂ under the standard soft-edge scaling
/// a = k^{1/6}(λ − 2√k), restricted to the window.
pub fn sample_airy_window<R: Rng + ?Sized>(k: usize, window: Window, rng: &mut R) -> Configuration {
    let lam = sample_gue_spectrum(k, rng);
    let kf = k as f64;
    let pts: Vec<f64> = lam
        .coords()
        .iter()
        .map(|l| kf.powf(1.0 / 6.0) * (l - 2.0 * kf.sqrt()))
        .collect();
    Configuration::from_points(&pts).unwrap().restrict(window)
}

/// Convenience: draw a whole ensemble with per-member streams.
pub fn sample_ensemble<F, T>(n: usize, stream: RngStream, mut draw: F) -> Vec<T>
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> T,
{
    (0..n)
        .map(|i| {
            let mut rng = stream.substream(i as u64).rng();
            draw(&mut rng)
        })
        .collect()
}
