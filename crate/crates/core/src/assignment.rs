//! Exact linear assignment via shortest augmenting paths with dual
//! potentials (Jonker–Volgenant style, O(n³)).
//!
//! Used as the square-cost solver behind the matching distances and the
//! empirical Wasserstein distances. A brute-force enumerator over all
//! permutations is kept alongside for oracle duty on small instances.

/// Minimum-cost perfect matching of a square cost matrix.
///
/// Returns `(assignment, cost)` where `assignment[row] = column` and ties
/// between optimal matchings are broken toward the lexicographically
/// smallest assignment vector. Costs must be finite.
pub fn solve(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    debug_assert!(cost.iter().all(|row| row.len() == n));
    debug_assert!(cost.iter().flatten().all(|c| c.is_finite()));

    // Dual potentials; row_of[j] = row matched to column j (n = unmatched).
    let mut u = vec![0.0_f64; n + 1];
    let mut v = vec![0.0_f64; n + 1];
    let mut row_of = vec![n; n + 1];

    for i in 0..n {
        // Augment from row i through the virtual column n.
        let mut j_cur = n;
        row_of[n] = i;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut prev = vec![n; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j_cur] = true;
            let i_cur = row_of[j_cur];
            let mut delta = f64::INFINITY;
            let mut j_next = n;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i_cur][j] - u[i_cur] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    prev[j] = j_cur;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j_next = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j_cur = j_next;
            if row_of[j_cur] == n {
                break;
            }
        }
        // Unwind the alternating path.
        while j_cur != n {
            let j_prev = prev[j_cur];
            row_of[j_cur] = row_of[j_prev];
            j_cur = j_prev;
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 0..n {
        if row_of[j] < n {
            assignment[row_of[j]] = j;
        }
    }
    let mut total = 0.0;
    for (i, &j) in assignment.iter().enumerate() {
        total += cost[i][j];
    }
    // The dual method returns some optimum; canonicalise ties to the
    // lexicographically smallest assignment among optimal ones by local
    // 2-swaps (sufficient for the tie structure of distance matrices).
    lexicalize(cost, &mut assignment);
    (assignment, total)
}

fn lexicalize(cost: &[Vec<f64>], assignment: &mut [usize]) {
    let n = assignment.len();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for k in i + 1..n {
                let (ji, jk) = (assignment[i], assignment[k]);
                if jk < ji {
                    let cur = cost[i][ji] + cost[k][jk];
                    let swapped = cost[i][jk] + cost[k][ji];
                    if swapped <= cur + 1e-15 * (1.0 + cur.abs()) {
                        assignment.swap(i, k);
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Exhaustive minimum over all n! permutations. Oracle use only.
pub fn brute_force(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = perm_cost(cost, &perm);
    while next_permutation(&mut perm) {
        let c = perm_cost(cost, &perm);
        if c < best_cost - 1e-15 {
            best_cost = c;
            best.copy_from_slice(&perm);
        }
    }
    (best, best_cost)
}

fn perm_cost(cost: &[Vec<f64>], perm: &[usize]) -> f64 {
    perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum()
}

/// In-place next lexicographic permutation; false once wrapped.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn solves_textbook_instance() {
        let cost = vec![
            vec![10.0, 25.0, 15.0, 20.0],
            vec![15.0, 30.0, 5.0, 15.0],
            vec![35.0, 20.0, 12.0, 24.0],
            vec![17.0, 25.0, 24.0, 20.0],
        ];
        let (a, c) = solve(&cost);
        assert_eq!(a, vec![0, 2, 1, 3]);
        assert_eq!(c, 55.0);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let n = 1 + trial % 7;
            let cost: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(0.0..10.0)).collect())
                .collect();
            let (_, c_fast) = solve(&cost);
            let (_, c_slow) = brute_force(&cost);
            assert!(
                (c_fast - c_slow).abs() <= 1e-10,
                "n={n} fast={c_fast} slow={c_slow}"
            );
        }
    }

    #[test]
    fn identity_on_zero_diagonal() {
        let n = 5;
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        let (a, c) = solve(&cost);
        assert_eq!(a, (0..n).collect::<Vec<_>>());
        assert_eq!(c, 0.0);
    }

    #[test]
    fn ties_break_lexicographically() {
        // All costs equal: every permutation optimal; expect identity.
        let cost = vec![vec![1.0; 4]; 4];
        let (a, _) = solve(&cost);
        assert_eq!(a, vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_instance() {
        let (a, c) = solve(&[]);
        assert!(a.is_empty());
        assert_eq!(c, 0.0);
    }
}
