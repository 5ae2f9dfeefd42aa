//! Hamiltonians H = Ψ + Φ of the finite-k bulk/edge models, their
//! gradients and Hessians, and adaptive Euler–Maruyama integration of the
//! associated SDEs, including synchronous couplings and ensembles.
//!
//! Speed conventions. `Full` integrates dX = −∇H dt + √2 dB (generator
//! Δ − ∇H·∇); `Half` integrates dX = −½∇H dt + dB. Both leave e^{−H}
//! invariant; all inequality checks in the harness run at Full speed.
//! The literal finite-k drifts displayed for the models (confinement
//! −X/k, resp. −(X+2k^{2/3})/(2k^{1/3}), with unit noise) differ from
//! −½∇Φ by a factor of two in the confinement term; they are available
//! behind [`DriftKind::LiteralDisplay`] but are not used by any check.

use crate::configspace::WeylPoint;
use crate::rng::RngStream;
use crate::sampling::{ModelSpec, Regime};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynError {
    #[error("collision: particles {i} and {j} coincide")]
    Collision { i: usize, j: usize },
    #[error("substep budget exhausted after {0} halvings")]
    SubstepExhausted(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Speed {
    #[default]
    Full,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DriftKind {
    /// Drift derived from ∇H so that e^{−H} is exactly invariant.
    #[default]
    FromHamiltonian,
    /// The displayed finite-k drifts with unit noise.
    LiteralDisplay,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SdeConfig {
    pub dt: f64,
    pub t_end: f64,
    pub speed: Speed,
    pub drift: DriftKind,
    /// Recursion depth for step halving near collisions.
    pub max_substeps: u32,
}

impl Default for SdeConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_end: 1.0, speed: Speed::Full, drift: DriftKind::default(), max_substeps: 30 }
    }
}

impl SdeConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self { dt, ..Self::default() }
    }

    pub fn half_speed(mut self) -> Self {
        self.speed = Speed::Half;
        self
    }
}

/// Ψ(x) = −2Σ_{i<j} log|x_i−x_j| plus the regime confinement Φ.
pub fn hamiltonian(model: ModelSpec, w: &WeylPoint) -> f64 {
    hamiltonian_raw(model, w.coords()).expect("WeylPoint is strictly ordered")
}

pub(crate) fn hamiltonian_raw(model: ModelSpec, x: &[f64]) -> Result<f64, DynError> {
    let k = x.len();
    let mut psi = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let gap = x[i] - x[j];
            if gap == 0.0 {
                return Err(DynError::Collision { i, j });
            }
            psi -= 2.0 * gap.abs().ln();
        }
    }
    Ok(psi + confinement(model, x))
}

fn confinement(model: ModelSpec, x: &[f64]) -> f64 {
    let kf = model.k as f64;
    match model.regime {
        Regime::Bulk => x.iter().map(|v| v * v).sum::<f64>() / (2.0 * kf),
        Regime::Edge => {
            let c = 2.0 * kf.powf(2.0 / 3.0);
            x.iter().map(|v| (v + c) * (v + c)).sum::<f64>() / (4.0 * kf.powf(1.0 / 3.0))
        }
    }
}

/// ∂_i H = −2 Σ_{j≠i} 1/(x_i−x_j) + ∂_i Φ.
pub fn grad_hamiltonian(model: ModelSpec, w: &WeylPoint) -> Vec<f64> {
    grad_hamiltonian_raw(model, w.coords()).expect("WeylPoint is strictly ordered")
}

pub(crate) fn grad_hamiltonian_raw(model: ModelSpec, x: &[f64]) -> Result<Vec<f64>, DynError> {
    let k = x.len();
    let kf = model.k as f64;
    let mut g = vec![0.0; k];
    for i in 0..k {
        for j in i + 1..k {
            let gap = x[i] - x[j];
            if gap == 0.0 {
                return Err(DynError::Collision { i, j });
            }
            g[i] -= 2.0 / gap;
            g[j] += 2.0 / gap;
        }
    }
    match model.regime {
        Regime::Bulk => {
            for i in 0..k {
                g[i] += x[i] / kf;
            }
        }
        Regime::Edge => {
            let c = 2.0 * kf.powf(2.0 / 3.0);
            let s = 2.0 * kf.powf(1.0 / 3.0);
            for i in 0..k {
                g[i] += (x[i] + c) / s;
            }
        }
    }
    Ok(g)
}

/// Minimum eigenvalue of the analytic Hessian of H at w.
pub fn hessian_min_eigenvalue(model: ModelSpec, w: &WeylPoint) -> f64 {
    let x = w.coords();
    let k = x.len();
    let kf = model.k as f64;
    let mut h = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let gap = x[i] - x[j];
            let v = 2.0 / (gap * gap);
            h[(i, i)] += v;
            h[(j, j)] += v;
            h[(i, j)] -= v;
            h[(j, i)] -= v;
        }
    }
    let phi2 = match model.regime {
        Regime::Bulk => 1.0 / kf,
        Regime::Edge => 1.0 / (2.0 * kf.powf(1.0 / 3.0)),
    };
    for i in 0..k {
        h[(i, i)] += phi2;
    }
    nalgebra::SymmetricEigen::new(h)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

fn drift(model: ModelSpec, x: &[f64], cfg: &SdeConfig) -> Result<Vec<f64>, DynError> {
    match cfg.drift {
        DriftKind::FromHamiltonian => {
            let g = grad_hamiltonian_raw(model, x)?;
            let scale = match cfg.speed {
                Speed::Full => -1.0,
                Speed::Half => -0.5,
            };
            Ok(g.into_iter().map(|v| scale * v).collect())
        }
        DriftKind::LiteralDisplay => {
            let k = x.len();
            let kf = model.k as f64;
            let mut d = vec![0.0; k];
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        let gap = x[i] - x[j];
                        if gap == 0.0 {
                            return Err(DynError::Collision { i: i.min(j), j: i.max(j) });
                        }
                        d[i] += 1.0 / gap;
                    }
                }
            }
            match model.regime {
                Regime::Bulk => {
                    for i in 0..k {
                        d[i] -= x[i] / kf;
                    }
                }
                Regime::Edge => {
                    let c = 2.0 * kf.powf(2.0 / 3.0);
                    let s = 2.0 * kf.powf(1.0 / 3.0);
                    for i in 0..k {
                        d[i] -= (x[i] + c) / s;
                    }
                }
            }
            Ok(d)
        }
    }
}

fn noise_scale(cfg: &SdeConfig) -> f64 {
    match cfg.drift {
        DriftKind::LiteralDisplay => 1.0,
        DriftKind::FromHamiltonian => match cfg.speed {
            Speed::Full => std::f64::consts::SQRT_2,
            Speed::Half => 1.0,
        },
    }
}

/// Collision guard: a proposed state is rejected when ordering breaks or
/// the smallest gap shrinks below 10·√dt·k.
fn guard_ok(old: &[f64], new: &[f64], dt: f64, k: usize) -> bool {
    let mut new_min = f64::INFINITY;
    for w in new.windows(2) {
        let gap = w[0] - w[1];
        if gap <= 0.0 {
            return false;
        }
        new_min = new_min.min(gap);
    }
    let g_min = 10.0 * dt.sqrt() * k as f64;
    if new_min >= g_min {
        return true;
    }
    let old_min = old
        .windows(2)
        .map(|w| w[0] - w[1])
        .fold(f64::INFINITY, f64::min);
    new_min >= old_min
}

/// One adaptive Euler–Maruyama step over an increment of length `dt`.
///
/// `noise` is the Brownian increment for the whole interval, scaled as
/// N(0, dt) per coordinate. When the collision guard rejects the update
/// the interval is bisected: the supplied increment is refined by a
/// Brownian bridge (midpoint draws come from `rng`) and both halves are
/// taken recursively, up to `cfg.max_substeps` halvings.
pub fn step<R: Rng + ?Sized>(
    model: ModelSpec,
    w: &WeylPoint,
    dt: f64,
    noise: &[f64],
    cfg: &SdeConfig,
    rng: &mut R,
) -> Result<WeylPoint, DynError> {
    let x = step_raw(model, w.coords(), dt, noise, cfg, rng, cfg.max_substeps)?;
    Ok(WeylPoint::new(x).expect("guard keeps ordering strict"))
}

fn step_raw<R: Rng + ?Sized>(
    model: ModelSpec,
    x: &[f64],
    dt: f64,
    noise: &[f64],
    cfg: &SdeConfig,
    rng: &mut R,
    depth: u32,
) -> Result<Vec<f64>, DynError> {
    let d = drift(model, x, cfg)?;
    let sig = noise_scale(cfg);
    let proposal: Vec<f64> = x
        .iter()
        .zip(&d)
        .zip(noise)
        .map(|((xi, di), ni)| xi + di * dt + sig * ni)
        .collect();
    if guard_ok(x, &proposal, dt, model.k) {
        return Ok(proposal);
    }
    if depth == 0 {
        return Err(DynError::SubstepExhausted(cfg.max_substeps));
    }
    // Brownian bridge refinement of the increment.
    let half = 0.5 * dt;
    let mut first = Vec::with_capacity(noise.len());
    let mut second = Vec::with_capacity(noise.len());
    for &n in noise {
        let z: f64 = StandardNormal.sample(rng);
        let n1 = 0.5 * n + 0.5 * dt.sqrt() * z;
        first.push(n1);
        second.push(n - n1);
    }
    let mid = step_raw(model, x, half, &first, cfg, rng, depth - 1)?;
    step_raw(model, &mid, half, &second, cfg, rng, depth - 1)
}

/// Integrate the SDE to time t from w0.
pub fn evolve<R: Rng + ?Sized>(
    model: ModelSpec,
    w0: &WeylPoint,
    t: f64,
    cfg: &SdeConfig,
    rng: &mut R,
) -> Result<WeylPoint, DynError> {
    assert!(t >= 0.0);
    let mut x = w0.coords().to_vec();
    let mut remaining = t;
    while remaining > 1e-15 {
        let dt = cfg.dt.min(remaining);
        let noise: Vec<f64> = (0..x.len())
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                dt.sqrt() * z
            })
            .collect();
        x = step_raw(model, &x, dt, &noise, cfg, rng, cfg.max_substeps)?;
        remaining -= dt;
    }
    Ok(WeylPoint::new(x).expect("guard keeps ordering strict"))
}

/// Record of a synchronous coupling: ℓ² distance after every coarse step.
#[derive(Debug, Clone)]
pub struct CoupledTrace {
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
    pub terminal: (WeylPoint, WeylPoint),
}

fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Drive two copies with identical noise and record their distance.
///
/// Substeps are shared: when either copy trips the collision guard the
/// interval is bisected for both, so the coupling stays synchronous.
pub fn evolve_coupled<R: Rng + ?Sized>(
    model: ModelSpec,
    w0: &WeylPoint,
    v0: &WeylPoint,
    t: f64,
    cfg: &SdeConfig,
    rng: &mut R,
) -> Result<CoupledTrace, DynError> {
    assert_eq!(w0.k(), v0.k());
    let mut x = w0.coords().to_vec();
    let mut y = v0.coords().to_vec();
    let mut times = vec![0.0];
    let mut distances = vec![l2_dist(&x, &y)];
    let mut elapsed = 0.0;
    while elapsed < t - 1e-15 {
        let dt = cfg.dt.min(t - elapsed);
        let noise: Vec<f64> = (0..x.len())
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                dt.sqrt() * z
            })
            .collect();
        let (nx, ny) = coupled_step(model, &x, &y, dt, &noise, cfg, rng, cfg.max_substeps)?;
        x = nx;
        y = ny;
        elapsed += dt;
        times.push(elapsed);
        distances.push(l2_dist(&x, &y));
    }
    Ok(CoupledTrace {
        times,
        distances,
        terminal: (
            WeylPoint::new(x).expect("ordered"),
            WeylPoint::new(y).expect("ordered"),
        ),
    })
}

#[allow(clippy::too_many_arguments)]
fn coupled_step<R: Rng + ?Sized>(
    model: ModelSpec,
    x: &[f64],
    y: &[f64],
    dt: f64,
    noise: &[f64],
    cfg: &SdeConfig,
    rng: &mut R,
    depth: u32,
) -> Result<(Vec<f64>, Vec<f64>), DynError> {
    let dx = drift(model, x, cfg)?;
    let dy = drift(model, y, cfg)?;
    let sig = noise_scale(cfg);
    let px: Vec<f64> = x
        .iter()
        .zip(&dx)
        .zip(noise)
        .map(|((xi, di), ni)| xi + di * dt + sig * ni)
        .collect();
    let py: Vec<f64> = y
        .iter()
        .zip(&dy)
        .zip(noise)
        .map(|((yi, di), ni)| yi + di * dt + sig * ni)
        .collect();
    if guard_ok(x, &px, dt, model.k) && guard_ok(y, &py, dt, model.k) {
        return Ok((px, py));
    }
    if depth == 0 {
        return Err(DynError::SubstepExhausted(cfg.max_substeps));
    }
    let mut first = Vec::with_capacity(noise.len());
    let mut second = Vec::with_capacity(noise.len());
    for &n in noise {
        let z: f64 = StandardNormal.sample(rng);
        let n1 = 0.5 * n + 0.5 * dt.sqrt() * z;
        first.push(n1);
        second.push(n - n1);
    }
    let (mx, my) = coupled_step(model, x, y, 0.5 * dt, &first, cfg, rng, depth - 1)?;
    coupled_step(model, &mx, &my, 0.5 * dt, &second, cfg, rng, depth - 1)
}

/// Evolve every member independently; member i uses stream_index
/// `base.stream_index + i`, so results are reproducible and order-free.
pub fn evolve_ensemble(
    model: ModelSpec,
    members: &[WeylPoint],
    t: f64,
    cfg: &SdeConfig,
    base: RngStream,
) -> Result<Vec<WeylPoint>, DynError> {
    members
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let mut rng = base.substream(i as u64).rng();
            evolve(model, w, t, cfg, &mut rng)
        })
        .collect()
}
