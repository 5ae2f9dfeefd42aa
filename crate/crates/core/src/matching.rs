//! ℓ²-matching distance between configurations, the window-localised
//! partial matching pseudo-distance, and matching-based geodesics.
//!
//! The partial distance subjected to a window B_r works on the window with
//! its whole boundary glued to a single point: a matched pair may either
//! travel directly at cost |x−y| or die jointly at the boundary at cost
//! (r−|x|) + (r−|y|), whichever is cheaper (the glued distance), while an
//! excess point on the larger side dies alone at cost r−|x|. Equal-count
//! instances therefore reduce to the permutation-minimised glued product
//! distance.

use crate::assignment;
use crate::configspace::{Configuration, Window};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatchingError {
    #[error("point {value} lies outside the window of radius {radius}")]
    OutOfWindow { value: f64, radius: f64 },
    #[error("cardinalities differ ({left} vs {right}); matching distance is infinite")]
    InfiniteDistance { left: usize, right: usize },
    #[error("brute-force oracle limited to {limit} points per side, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("exponent must satisfy p >= 1, got {0}")]
    BadExponent(f64),
}

/// A nonnegative distance that may be infinite (across unequal masses).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedDistance {
    Finite(f64),
    Infinite,
}

impl ExtendedDistance {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedDistance::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtendedDistance::Finite(v) => Some(*v),
            ExtendedDistance::Infinite => None,
        }
    }

    /// Panics on the infinite value; for contexts that established finiteness.
    pub fn expect_finite(&self) -> f64 {
        self.finite().expect("extended distance is infinite")
    }
}

/// Distance on the window with the whole boundary glued to one point:
/// min(|x−y|, (r−|x|) + (r−|y|)).
pub fn glued_distance(x: f64, y: f64, w: Window) -> Result<f64, MatchingError> {
    let r = w.radius();
    for v in [x, y] {
        if v.abs() > r {
            return Err(MatchingError::OutOfWindow { value: v, radius: r });
        }
    }
    Ok((x - y).abs().min((r - x.abs()) + (r - y.abs())))
}

/// ℓᵖ-matching extended distance between two configurations on ℝ.
///
/// Infinite across different cardinalities; otherwise the minimum over
/// permutations of (Σ|x_{σ(i)}−y_i|ᵖ)^{1/p}. For p = 2 the sorted identity
/// matching is optimal in one dimension and used directly.
pub fn matching_distance(
    gamma: &Configuration,
    eta: &Configuration,
    p: f64,
) -> Result<ExtendedDistance, MatchingError> {
    if p < 1.0 {
        return Err(MatchingError::BadExponent(p));
    }
    if gamma.len() != eta.len() {
        return Ok(ExtendedDistance::Infinite);
    }
    if gamma.is_empty() {
        return Ok(ExtendedDistance::Finite(0.0));
    }
    let xs = gamma.points();
    let ys = eta.points();
    if p == 2.0 {
        let sum: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        return Ok(ExtendedDistance::Finite(sum.sqrt()));
    }
    let cost: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| ys.iter().map(|y| (x - y).abs().powf(p)).collect())
        .collect();
    let (_, total) = assignment::solve(&cost);
    Ok(ExtendedDistance::Finite(total.powf(1.0 / p)))
}

/// ℓᵖ-matching distance between d-dimensional point clouds (ℓ² ground
/// metric between points). The one place the crate accepts d > 1.
pub fn matching_distance_nd(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    p: f64,
) -> Result<ExtendedDistance, MatchingError> {
    if p < 1.0 {
        return Err(MatchingError::BadExponent(p));
    }
    if xs.len() != ys.len() {
        return Ok(ExtendedDistance::Infinite);
    }
    if xs.is_empty() {
        return Ok(ExtendedDistance::Finite(0.0));
    }
    let cost: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| {
            ys.iter()
                .map(|y| {
                    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                    d2.sqrt().powf(p)
                })
                .collect()
        })
        .collect();
    let (_, total) = assignment::solve(&cost);
    Ok(ExtendedDistance::Finite(total.powf(1.0 / p)))
}

/// How a partial matching inside the window resolved each point.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchPlan {
    /// (index in restrict(γ), index in restrict(η)) travelling directly.
    pub pairs: Vec<(usize, usize)>,
    /// Indices of restrict(γ) dying at the boundary.
    pub killed_left: Vec<usize>,
    /// Indices of restrict(η) dying at the boundary.
    pub killed_right: Vec<usize>,
}

/// Partial ℓ²-matching pseudo-distance subjected to the window.
pub fn partial_matching_distance(gamma: &Configuration, eta: &Configuration, w: Window) -> f64 {
    partial_matching(gamma, eta, w).0
}

/// Partial matching distance together with the realising plan.
pub fn partial_matching(gamma: &Configuration, eta: &Configuration, w: Window) -> (f64, MatchPlan) {
    let r = w.radius();
    let g = gamma.restrict(w);
    let e = eta.restrict(w);
    let xs = g.points();
    let ys = e.points();
    let (n, m) = (xs.len(), ys.len());
    let size = n.max(m);
    if size == 0 {
        return (
            0.0,
            MatchPlan { pairs: vec![], killed_left: vec![], killed_right: vec![] },
        );
    }
    // Rows: points of γ then pads; columns: points of η then pads. Only the
    // smaller side is padded, so a pad row meets only real columns (and vice
    // versa): the excess of the larger side dies alone, everything else is
    // routed through the glued distance.
    let mut cost = vec![vec![0.0_f64; size]; size];
    for i in 0..size {
        for j in 0..size {
            cost[i][j] = if i < n && j < m {
                let gd = glued_distance(xs[i], ys[j], w).expect("restricted inside window");
                gd * gd
            } else if i < n {
                let a = r - xs[i].abs();
                a * a
            } else if j < m {
                let b = r - ys[j].abs();
                b * b
            } else {
                0.0
            };
        }
    }
    let (assign, total) = assignment::solve(&cost);
    let mut plan = MatchPlan { pairs: vec![], killed_left: vec![], killed_right: vec![] };
    for (i, &j) in assign.iter().enumerate() {
        if i < n && j < m {
            let direct = (xs[i] - ys[j]).abs();
            let joint = (r - xs[i].abs()) + (r - ys[j].abs());
            if direct <= joint {
                plan.pairs.push((i, j));
            } else {
                plan.killed_left.push(i);
                plan.killed_right.push(j);
            }
        } else if i < n {
            plan.killed_left.push(i);
        } else if j < m {
            plan.killed_right.push(j);
        }
    }
    plan.killed_left.sort_unstable();
    plan.killed_right.sort_unstable();
    (total.max(0.0).sqrt(), plan)
}

const BRUTE_FORCE_LIMIT: usize = 8;

/// Exhaustive minimum over all partial injections and kill assignments.
/// Independent oracle for [`partial_matching_distance`] on small instances.
pub fn brute_force_partial(
    gamma: &Configuration,
    eta: &Configuration,
    w: Window,
) -> Result<f64, MatchingError> {
    let r = w.radius();
    let g = gamma.restrict(w);
    let e = eta.restrict(w);
    for side in [&g, &e] {
        if side.len() > BRUTE_FORCE_LIMIT {
            return Err(MatchingError::TooLarge { limit: BRUTE_FORCE_LIMIT, got: side.len() });
        }
    }
    // Arrange so the left side is the smaller one; the value is symmetric.
    let (xs, ys) = if g.len() <= e.len() {
        (g.points().to_vec(), e.points().to_vec())
    } else {
        (e.points().to_vec(), g.points().to_vec())
    };
    let (n, m) = (xs.len(), ys.len());
    if m == 0 {
        return Ok(0.0);
    }
    let kill = |v: f64| (r - v.abs()) * (r - v.abs());
    let mut best = f64::INFINITY;
    // Choose which n of the m right points are met by left points, in every
    // order; each met pair goes direct or dies jointly, the rest die alone.
    for subset in subsets_of_size(m, n) {
        let base: f64 = (0..m)
            .filter(|j| !subset.contains(j))
            .map(|j| kill(ys[j]))
            .sum();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut tot = base;
            for (i, &slot) in perm.iter().enumerate() {
                let y = ys[subset[slot]];
                let direct = (xs[i] - y) * (xs[i] - y);
                let joint = (r - xs[i].abs()) + (r - y.abs());
                tot += direct.min(joint * joint);
            }
            best = best.min(tot);
            if !assignment::next_permutation(&mut perm) {
                break;
            }
        }
    }
    Ok(best.sqrt())
}

fn subsets_of_size(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for j in start..m {
            cur.push(j);
            rec(j + 1, m, n, cur, out);
            cur.pop();
        }
    }
    rec(0, m, n, &mut cur, &mut out);
    out
}

/// Constant-speed geodesic between configurations of equal cardinality:
/// points travel linearly along the optimal ℓ²-matching.
pub fn interpolate(
    gamma: &Configuration,
    eta: &Configuration,
    t: f64,
) -> Result<Configuration, MatchingError> {
    if gamma.len() != eta.len() {
        return Err(MatchingError::InfiniteDistance { left: gamma.len(), right: eta.len() });
    }
    let pts: Vec<f64> = gamma
        .points()
        .iter()
        .zip(eta.points())
        .map(|(x, y)| (1.0 - t) * x + t * y)
        .collect();
    Ok(Configuration::from_points(&pts).expect("finite interpolants"))
}
