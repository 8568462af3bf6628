//! Depth-first branch and bound.
//!
//! Variables are visited by weight descending then column ascending, the
//! include branch first. A node is pruned when even the best remaining
//! weights allowed by the edge budget cannot beat the incumbent, and the
//! incumbent is only replaced on strict improvement, so the first optimum
//! found in that order is the one returned.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Optimality, ProblemInstance, Solution};

pub const DEFAULT_EXACT_LIMIT: usize = 30;

struct Search<'a, T> {
    weights: Vec<T>,
    ends: Vec<(usize, usize)>,
    /// prefix[k] = weights[0] + ... + weights[k - 1]
    prefix: Vec<T>,
    residual: Vec<usize>,
    residual_sum: usize,
    total_left: usize,
    current: Vec<usize>,
    value: T,
    best: Vec<usize>,
    best_value: T,
    slack: T,
    order: &'a [usize],
}

impl<T: Scalar> Search<'_, T> {
    fn bound(&self, pos: usize) -> T {
        let left = self.weights.len() - pos;
        let budget = left.min(self.total_left).min(self.residual_sum / 2);
        self.value + (self.prefix[pos + budget] - self.prefix[pos])
    }

    fn visit(&mut self, pos: usize) {
        if self.value > self.best_value + self.slack {
            self.best_value = self.value;
            self.best = self.current.clone();
        }
        if pos == self.weights.len() || self.bound(pos) <= self.best_value + self.slack {
            return;
        }
        let (a, b) = self.ends[pos];
        if self.total_left > 0 && self.residual[a] > 0 && self.residual[b] > 0 {
            self.residual[a] -= 1;
            self.residual[b] -= 1;
            self.residual_sum -= 2;
            self.total_left -= 1;
            self.current.push(self.order[pos]);
            let before = self.value;
            self.value = self.value + self.weights[pos];

            self.visit(pos + 1);

            self.value = before;
            self.current.pop();
            self.total_left += 1;
            self.residual_sum += 2;
            self.residual[a] += 1;
            self.residual[b] += 1;
        }
        self.visit(pos + 1);
    }
}

/// Proved-optimal solution for instances with at most `limit` variables.
pub fn solve_exact<T: Scalar>(p: &ProblemInstance<T>, limit: usize) -> Result<Solution<T>> {
    let vars = p.variables();
    if vars.len() > limit {
        return Err(Error::TooLarge {
            vars: vars.len(),
            limit,
        });
    }
    // zero-weight edges never improve the objective and are left out
    let order: Vec<usize> = p
        .priority_order()
        .into_iter()
        .filter(|&k| vars[k].weight > T::zero())
        .collect();
    let weights: Vec<T> = order.iter().map(|&k| vars[k].weight).collect();
    let ends = order
        .iter()
        .map(|&k| (vars[k].edge.0 - 1, vars[k].edge.1 - 1))
        .collect();
    let mut prefix = Vec::with_capacity(weights.len() + 1);
    prefix.push(T::zero());
    for &w in &weights {
        prefix.push(*prefix.last().unwrap() + w);
    }
    let scale = prefix.last().copied().unwrap_or(T::zero()).max(T::one());
    let residual = p.degree_bound().to_vec();
    let residual_sum = residual.iter().sum();

    let mut search = Search {
        weights,
        ends,
        prefix,
        residual,
        residual_sum,
        total_left: p.total_bound().unwrap_or(usize::MAX),
        current: Vec::new(),
        value: T::zero(),
        best: Vec::new(),
        best_value: T::zero(),
        slack: T::of(64.0) * T::epsilon() * scale,
        order: &order,
    };
    search.visit(0);
    Ok(p.solution_from(&search.best, Optimality::Proved))
}
