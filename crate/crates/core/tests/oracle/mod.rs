//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the solvers under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use netfba::{Edge, Problem};
use rand::seq::SliceRandom;
use rand::Rng;

/// Feasibility of `chosen` for `p`, checked from first principles.
pub fn feasible(p: &Problem, chosen: &[Edge]) -> bool {
    let candidates: BTreeSet<Edge> = p.variables().iter().map(|v| v.edge).collect();
    let unique: BTreeSet<Edge> = chosen.iter().copied().collect();
    if unique.len() != chosen.len() || !unique.iter().all(|e| candidates.contains(e)) {
        return false;
    }
    let mut deg = vec![0usize; p.n() + 1];
    for &(i, j) in chosen {
        deg[i] += 1;
        deg[j] += 1;
    }
    let degree_ok = (1..=p.n()).all(|v| deg[v] <= p.degree_bound()[v - 1]);
    degree_ok && p.total_bound().is_none_or(|m| chosen.len() <= m)
}

/// Best objective over all feasible subsets, summed in candidate order, and
/// the number of feasible nonempty subsets.
pub fn brute_force(p: &Problem) -> (f64, u64) {
    let vars: Vec<(usize, usize, f64)> = p.variables().iter().map(|v| (v.edge.0, v.edge.1, v.weight)).collect();
    let mut residual = p.degree_bound().to_vec();
    let total = p.total_bound().unwrap_or(usize::MAX);
    let mut best = 0.0;
    let mut count = 0u64;
    walk(&vars, 0, &mut residual, total, 0.0, &mut best, &mut count);
    (best, count - 1)
}

fn walk(
    vars: &[(usize, usize, f64)],
    k: usize,
    residual: &mut [usize],
    total: usize,
    value: f64,
    best: &mut f64,
    count: &mut u64,
) {
    if k == vars.len() {
        *count += 1;
        if value > *best {
            *best = value;
        }
        return;
    }
    walk(vars, k + 1, residual, total, value, best, count);
    let (i, j, w) = vars[k];
    if total > 0 && residual[i - 1] > 0 && residual[j - 1] > 0 {
        residual[i - 1] -= 1;
        residual[j - 1] -= 1;
        walk(vars, k + 1, residual, total - 1, value + w, best, count);
        residual[i - 1] += 1;
        residual[j - 1] += 1;
    }
}

/// Objective of `chosen`, summed in candidate (column) order.
pub fn objective(p: &Problem, chosen: &[Edge]) -> f64 {
    let set: BTreeSet<Edge> = chosen.iter().copied().collect();
    p.variables()
        .iter()
        .filter(|v| set.contains(&v.edge))
        .map(|v| v.weight)
        .fold(0.0, |a, w| a + w)
}

/// Random instance: `n` nodes, up to `max_vars` distinct candidate pairs,
/// bounds in `0..=max_bound`, weights uniform in [0, 1], and under F2 a
/// random total bound.
pub fn random_instance<R: Rng>(rng: &mut R, n: usize, max_vars: usize, max_bound: usize, f2: bool) -> Problem {
    let mut pairs: Vec<Edge> = (1..n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=max_vars.min(pairs.len()));
    pairs.truncate(m);
    let bounds: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=max_bound)).collect();
    let total = f2.then(|| rng.gen_range(0..=m));
    Problem::new(n, pairs.into_iter().map(|e| (e, rng.gen::<f64>())), bounds, total).unwrap()
}
