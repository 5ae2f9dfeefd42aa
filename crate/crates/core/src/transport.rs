//! Wasserstein distances W_{p,d_Υ} between equal-size uniform empirical
//! laws on configuration space, optimal couplings, and displacement
//! interpolation.

use crate::assignment;
use crate::configspace::EmpiricalLaw;
use crate::matching::{self, ExtendedDistance};
use crate::configspace::Window;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TransportError {
    #[error("empirical laws must have equal size ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
    #[error("no finite-cost assignment exists")]
    InfiniteDistance,
    #[error("exponent must satisfy p >= 1, got {0}")]
    BadExponent(f64),
}

/// Ground distance on configurations: full d_Υ or the partial d^{(r)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ground {
    Full,
    Partial(Window),
}

/// An optimal coupling of two equal-size uniform laws.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// assignment[a] = index in B matched to member a of A.
    pub assignment: Vec<usize>,
    pub cost: f64,
}

fn ground_cost(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    p: f64,
    ground: Ground,
) -> Result<(Vec<Vec<f64>>, bool), TransportError> {
    if p < 1.0 {
        return Err(TransportError::BadExponent(p));
    }
    if a.len() != b.len() {
        return Err(TransportError::SizeMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    let mut cost = vec![vec![0.0_f64; n]; n];
    let mut any_infinite = false;
    for (i, ga) in a.members().iter().enumerate() {
        for (j, gb) in b.members().iter().enumerate() {
            cost[i][j] = match ground {
                Ground::Full => match matching::matching_distance(ga, gb, 2.0).unwrap() {
                    ExtendedDistance::Finite(d) => d.powf(p),
                    ExtendedDistance::Infinite => {
                        any_infinite = true;
                        f64::INFINITY
                    }
                },
                Ground::Partial(w) => matching::partial_matching_distance(ga, gb, w).powf(p),
            };
        }
    }
    Ok((cost, any_infinite))
}

/// Hopcroft–Karp-free feasibility scan: is there a perfect matching using
/// only finite-cost edges?
fn feasible(cost: &[Vec<f64>]) -> bool {
    let n = cost.len();
    let mut matched = vec![usize::MAX; n];
    fn augment(
        i: usize,
        cost: &[Vec<f64>],
        matched: &mut [usize],
        seen: &mut [bool],
    ) -> bool {
        let n = cost.len();
        for j in 0..n {
            if cost[i][j].is_finite() && !seen[j] {
                seen[j] = true;
                if matched[j] == usize::MAX || augment(matched[j], cost, matched, seen) {
                    matched[j] = i;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, cost, &mut matched, &mut seen) {
            return false;
        }
    }
    true
}

/// W_{p,d_Υ} between equal-size uniform empirical laws.
pub fn wasserstein(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    p: f64,
    ground: Ground,
) -> Result<ExtendedDistance, TransportError> {
    match optimal_plan_impl(a, b, p, ground)? {
        Some(plan) => Ok(ExtendedDistance::Finite(plan.cost)),
        None => Ok(ExtendedDistance::Infinite),
    }
}

/// The argmin coupling (lexicographic tie-break inherited from the solver).
pub fn optimal_plan(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    p: f64,
    ground: Ground,
) -> Result<TransportPlan, TransportError> {
    optimal_plan_impl(a, b, p, ground)?.ok_or(TransportError::InfiniteDistance)
}

fn optimal_plan_impl(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    p: f64,
    ground: Ground,
) -> Result<Option<TransportPlan>, TransportError> {
    let (mut cost, any_infinite) = ground_cost(a, b, p, ground)?;
    let n = cost.len();
    if any_infinite {
        if !feasible(&cost) {
            return Ok(None);
        }
        // Big-M keeps the solver finite; feasibility guarantees the optimum
        // avoids the replaced edges.
        let max_finite = cost
            .iter()
            .flatten()
            .filter(|c| c.is_finite())
            .fold(0.0_f64, |m, &c| m.max(c));
        let big = (max_finite + 1.0) * (n as f64 + 1.0);
        for row in &mut cost {
            for c in row.iter_mut() {
                if !c.is_finite() {
                    *c = big;
                }
            }
        }
    }
    let (assignment, total) = assignment::solve(&cost);
    let value = (total / n as f64).powf(1.0 / p);
    Ok(Some(TransportPlan { assignment, cost: value }))
}

/// Member-wise matching geodesic along the optimal plan at outer p = 2.
pub fn displacement(
    a: &EmpiricalLaw,
    b: &EmpiricalLaw,
    t: f64,
) -> Result<EmpiricalLaw, TransportError> {
    let plan = optimal_plan(a, b, 2.0, Ground::Full)?;
    let members = a
        .members()
        .iter()
        .enumerate()
        .map(|(i, ga)| {
            let gb = &b.members()[plan.assignment[i]];
            matching::interpolate(ga, gb, t).map_err(|_| TransportError::InfiniteDistance)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EmpiricalLaw::new(members).expect("same size as input law"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::Configuration;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(v: &[f64]) -> Configuration {
        Configuration::from_points(v).unwrap()
    }

    fn law(members: Vec<Configuration>) -> EmpiricalLaw {
        EmpiricalLaw::new(members).unwrap()
    }

    #[test]
    fn identical_laws_and_singletons() {
        let a = law(vec![cfg(&[0.0, 1.0]), cfg(&[2.0])]);
        let d = wasserstein(&a, &a, 2.0, Ground::Full).unwrap();
        assert_eq!(d.expect_finite(), 0.0);

        let s1 = law(vec![cfg(&[0.0, 1.0])]);
        let s2 = law(vec![cfg(&[0.1, 0.9])]);
        let d = wasserstein(&s1, &s2, 2.0, Ground::Full).unwrap();
        let ground = matching::matching_distance(&cfg(&[0.0, 1.0]), &cfg(&[0.1, 0.9]), 2.0)
            .unwrap()
            .expect_finite();
        assert!((d.expect_finite() - ground).abs() < 1e-15);
    }

    #[test]
    fn matches_exhaustive_assignment_at_n4() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..40 {
            let k = rng.gen_range(1..=3);
            let mk = |rng: &mut ChaCha8Rng| {
                let pts: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
                cfg(&pts)
            };
            let a = law((0..4).map(|_| mk(&mut rng)).collect());
            let b = law((0..4).map(|_| mk(&mut rng)).collect());
            for &p in &[1.0, 2.0] {
                let fast = wasserstein(&a, &b, p, Ground::Full)
                    .unwrap()
                    .expect_finite();
                // brute force over all 24 assignments
                let mut perm: Vec<usize> = (0..4).collect();
                let mut best = f64::INFINITY;
                loop {
                    let mut tot = 0.0;
                    for (i, &j) in perm.iter().enumerate() {
                        let d = matching::matching_distance(
                            &a.members()[i],
                            &b.members()[j],
                            2.0,
                        )
                        .unwrap()
                        .expect_finite();
                        tot += d.powf(p);
                    }
                    best = best.min(tot);
                    if !crate::assignment::next_permutation(&mut perm) {
                        break;
                    }
                }
                let slow = (best / 4.0).powf(1.0 / p);
                assert!((fast - slow).abs() < 1e-12, "p={p}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn infinite_propagation_and_feasibility() {
        // Mixed cardinalities: feasible only by matching like with like.
        let a = law(vec![cfg(&[0.0]), cfg(&[0.0, 1.0])]);
        let b = law(vec![cfg(&[5.0, 6.0]), cfg(&[2.0])]);
        let d = wasserstein(&a, &b, 2.0, Ground::Full).unwrap();
        assert!(d.is_finite());
        let plan = optimal_plan(&a, &b, 2.0, Ground::Full).unwrap();
        assert_eq!(plan.assignment, vec![1, 0]);

        // Eliminating the feasible pairing leaves only infinite assignments.
        let b_bad = law(vec![cfg(&[5.0, 6.0]), cfg(&[2.0, 3.0])]);
        let d = wasserstein(&a, &b_bad, 2.0, Ground::Full).unwrap();
        assert_eq!(d, ExtendedDistance::Infinite);
        assert_eq!(
            optimal_plan(&a, &b_bad, 2.0, Ground::Full),
            Err(TransportError::InfiniteDistance)
        );

        let mismatched = law(vec![cfg(&[0.0])]);
        assert!(matches!(
            wasserstein(&a, &mismatched, 2.0, Ground::Full),
            Err(TransportError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn partial_ground_is_monotone_and_limits_to_full() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for _ in 0..20 {
            let k = rng.gen_range(1..=3);
            let mk = |rng: &mut ChaCha8Rng| {
                let pts: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
                cfg(&pts)
            };
            let a = law((0..3).map(|_| mk(&mut rng)).collect());
            let b = law((0..3).map(|_| mk(&mut rng)).collect());
            let mut prev = 0.0;
            for &r in &[0.5, 1.0, 2.0, 4.0, 50.0] {
                let w = Window::new(r).unwrap();
                let d = wasserstein(&a, &b, 2.0, Ground::Partial(w))
                    .unwrap()
                    .expect_finite();
                assert!(d >= prev - 1e-12);
                prev = d;
            }
            let full = wasserstein(&a, &b, 2.0, Ground::Full)
                .unwrap()
                .expect_finite();
            assert!((prev - full).abs() < 1e-12);
        }
    }

    #[test]
    fn pseudo_metric_properties_of_w2() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..100 {
            let k = rng.gen_range(1..=2);
            let mk = |rng: &mut ChaCha8Rng| {
                let pts: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
                cfg(&pts)
            };
            let a = law((0..3).map(|_| mk(&mut rng)).collect());
            let b = law((0..3).map(|_| mk(&mut rng)).collect());
            let c = law((0..3).map(|_| mk(&mut rng)).collect());
            let dab = wasserstein(&a, &b, 2.0, Ground::Full).unwrap().expect_finite();
            let dba = wasserstein(&b, &a, 2.0, Ground::Full).unwrap().expect_finite();
            assert!((dab - dba).abs() < 1e-12);
            let dac = wasserstein(&a, &c, 2.0, Ground::Full).unwrap().expect_finite();
            let dcb = wasserstein(&c, &b, 2.0, Ground::Full).unwrap().expect_finite();
            assert!(dab <= dac + dcb + 1e-10);
        }
    }

    #[test]
    fn displacement_is_a_geodesic() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let k = 2;
        let mk = |rng: &mut ChaCha8Rng| {
            let pts: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
            cfg(&pts)
        };
        let a = law((0..4).map(|_| mk(&mut rng)).collect());
        let b = law((0..4).map(|_| mk(&mut rng)).collect());
        let w = wasserstein(&a, &b, 2.0, Ground::Full).unwrap().expect_finite();
        assert_eq!(displacement(&a, &b, 0.0).unwrap(), a);
        assert_eq!(displacement(&a, &b, 1.0).unwrap(), b);
        for &(s, t) in &[(0.2, 0.7), (0.0, 0.5), (0.3, 1.0)] {
            let gs = displacement(&a, &b, s).unwrap();
            let gt = displacement(&a, &b, t).unwrap();
            let d = wasserstein(&gs, &gt, 2.0, Ground::Full)
                .unwrap()
                .expect_finite();
            assert!((d - (t - s).abs() * w).abs() < 1e-10, "s={s} t={t}");
        }
        // midpoint of singleton laws is the configuration midpoint
        let s1 = law(vec![cfg(&[0.0])]);
        let s2 = law(vec![cfg(&[1.0])]);
        let mid = displacement(&s1, &s2, 0.5).unwrap();
        assert_eq!(mid.members()[0].points(), &[0.5]);
    }
}
