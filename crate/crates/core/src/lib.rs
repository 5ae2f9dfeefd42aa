//! Desk-scale numerical laboratory for Dyson-type interacting Brownian
//! motions and their optimal-transport structure.
//!
//! The crate has three layers:
//!
//! * configuration-space geometry: finite point configurations, the
//!   ℓ²-matching distance, the window-localised partial matching
//!   pseudo-distance built on the glued metric, and matching geodesics
//!   ([`configspace`], [`matching`], [`transport`]);
//! * models: sine₂/Airy₂ determinantal kernels with Nyström/Fredholm
//!   machinery, random-matrix and MCMC samplers for the finite-k invariant
//!   densities, and adaptive Euler–Maruyama integration of the bulk/edge
//!   Dyson SDEs ([`dpp`], [`sampling`], [`dynamics`]);
//! * verification: exact k=1 Ornstein–Uhlenbeck/Gaussian calculus, a
//!   quantile-space JKO solver, the parallel extension operator on the
//!   glued interval, and a harness that turns the functional inequalities
//!   (EVI, contraction, Harnack, Bakry–Émery, HWI, Brunn–Minkowski) into
//!   pass/fail checks ([`functionals`], [`jko`], [`extension`],
//!   [`harness`]).

pub mod assignment;
pub mod configspace;
pub mod dpp;
pub mod dynamics;
pub mod extension;
pub mod functionals;
pub mod harness;
pub mod jko;
pub mod matching;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod special;
pub mod transport;
pub mod tridiag;

pub use configspace::{Configuration, EmpiricalLaw, Window, WeylPoint};
pub use functionals::GaussianLaw;
