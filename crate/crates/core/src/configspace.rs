//! Core configuration-space data types and elementary set operations.
//!
//! A [`Configuration`] is a finite multiset of real positions held in
//! nondecreasing order; it stands in for a locally finite point measure
//! restricted to a bounded window. [`WeylPoint`] is the labelled state of a
//! k-particle system, kept strictly ordered (the open Weyl chamber).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("non-finite coordinate at position {0}")]
    NonFiniteInput(usize),
    #[error("invalid interval: a={a} > b={b}")]
    InvalidInterval { a: f64, b: f64 },
    #[error("window radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("empirical law must contain at least one configuration")]
    EmptyLaw,
    #[error("Weyl point must be strictly decreasing at position {0}")]
    NotStrictlyOrdered(usize),
}

/// A finite multiset of real positions, stored sorted nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Configuration {
    points: Vec<f64>,
}

impl Configuration {
    /// Builds a configuration from arbitrary finite values; sorts them.
    pub fn from_points(values: &[f64]) -> Result<Self, ConfigError> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(ConfigError::NonFiniteInput(i));
        }
        let mut points = values.to_vec();
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { points })
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sub-multiset of points with |x| < r (open window).
    pub fn restrict(&self, w: Window) -> Configuration {
        let points = self
            .points
            .iter()
            .copied()
            .filter(|x| x.abs() < w.radius())
            .collect();
        Configuration { points }
    }

    /// Number of points in the half-open interval [a, b).
    pub fn count(&self, a: f64, b: f64) -> Result<usize, ConfigError> {
        if a > b {
            return Err(ConfigError::InvalidInterval { a, b });
        }
        Ok(self.points.iter().filter(|&&x| a <= x && x < b).count())
    }
}

impl TryFrom<Vec<f64>> for Configuration {
    type Error = ConfigError;
    fn try_from(values: Vec<f64>) -> Result<Self, ConfigError> {
        Configuration::from_points(&values)
    }
}

impl From<Configuration> for Vec<f64> {
    fn from(c: Configuration) -> Vec<f64> {
        c.points
    }
}

/// An open symmetric window B_r = (−r, r).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    radius: f64,
}

impl Window {
    pub fn new(radius: f64) -> Result<Self, ConfigError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ConfigError::NonPositiveRadius(radius));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// A uniformly weighted finite family of configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Configuration>", into = "Vec<Configuration>")]
pub struct EmpiricalLaw {
    members: Vec<Configuration>,
}

impl EmpiricalLaw {
    pub fn new(members: Vec<Configuration>) -> Result<Self, ConfigError> {
        if members.is_empty() {
            return Err(ConfigError::EmptyLaw);
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Configuration] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<Configuration>> for EmpiricalLaw {
    type Error = ConfigError;
    fn try_from(members: Vec<Configuration>) -> Result<Self, ConfigError> {
        EmpiricalLaw::new(members)
    }
}

impl From<EmpiricalLaw> for Vec<Configuration> {
    fn from(law: EmpiricalLaw) -> Vec<Configuration> {
        law.members
    }
}

/// Labelled k-particle state x₁ > x₂ > … > x_k in the open Weyl chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylPoint {
    coords: Vec<f64>,
}

impl WeylPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, ConfigError> {
        if coords.is_empty() {
            return Err(ConfigError::NotStrictlyOrdered(0));
        }
        if let Some(i) = coords.iter().position(|v| !v.is_finite()) {
            return Err(ConfigError::NonFiniteInput(i));
        }
        for i in 1..coords.len() {
            if coords[i - 1] <= coords[i] {
                return Err(ConfigError::NotStrictlyOrdered(i));
            }
        }
        Ok(Self { coords })
    }

    /// Sorts arbitrary values into the chamber. Fails on exact collisions.
    pub fn from_unsorted(values: &[f64]) -> Result<Self, ConfigError> {
        let mut v = values.to_vec();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self::new(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    /// Smallest gap x_i − x_{i+1}; +∞ for k = 1.
    pub fn min_gap(&self) -> f64 {
        self.coords
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::from_points(&self.coords).expect("weyl coords are finite")
    }
}
