//! Greedy construction followed by swap-based local search.

use crate::scalar::Scalar;

use super::{Optimality, ProblemInstance, Solution};

struct State<'a, T> {
    p: &'a ProblemInstance<T>,
    chosen: Vec<bool>,
    residual: Vec<usize>,
    total_left: usize,
    /// variable indices incident to each node (0-based node)
    incident: Vec<Vec<usize>>,
}

impl<'a, T: Scalar> State<'a, T> {
    fn new(p: &'a ProblemInstance<T>) -> Self {
        let mut incident = vec![Vec::new(); p.n()];
        for (k, v) in p.variables().iter().enumerate() {
            incident[v.edge.0 - 1].push(k);
            incident[v.edge.1 - 1].push(k);
        }
        State {
            p,
            chosen: vec![false; p.variables().len()],
            residual: p.degree_bound().to_vec(),
            total_left: p.total_bound().unwrap_or(usize::MAX),
            incident,
        }
    }

    fn ends(&self, k: usize) -> (usize, usize) {
        let (i, j) = self.p.variables()[k].edge;
        (i - 1, j - 1)
    }

    fn weight(&self, k: usize) -> T {
        self.p.variables()[k].weight
    }

    fn addable(&self, k: usize) -> bool {
        let (a, b) = self.ends(k);
        !self.chosen[k]
            && self.weight(k) > T::zero()
            && self.total_left > 0
            && self.residual[a] > 0
            && self.residual[b] > 0
    }

    fn add(&mut self, k: usize) {
        let (a, b) = self.ends(k);
        self.chosen[k] = true;
        self.residual[a] -= 1;
        self.residual[b] -= 1;
        self.total_left -= 1;
    }

    fn remove(&mut self, k: usize) {
        let (a, b) = self.ends(k);
        self.chosen[k] = false;
        self.residual[a] += 1;
        self.residual[b] += 1;
        self.total_left += 1;
    }

    /// Add every addable variable in priority order.
    fn fill(&mut self, order: &[usize]) {
        for &k in order {
            if self.addable(k) {
                self.add(k);
            }
        }
    }

    /// Whether `x` and `y` can be added together to the current state.
    fn pair_addable(&self, x: usize, y: usize) -> bool {
        if self.total_left < 2 {
            return false;
        }
        let mut need = [self.ends(x).0, self.ends(x).1, self.ends(y).0, self.ends(y).1];
        need.sort_unstable();
        let mut k = 0;
        while k < 4 {
            let node = need[k];
            let count = need[k..].iter().take_while(|&&m| m == node).count();
            if self.residual[node] < count {
                return false;
            }
            k += count;
        }
        true
    }

    /// Try to replace chosen variable `r` by one or two unchosen variables of
    /// larger total weight. Applies the best such move and reports success.
    fn try_swap(&mut self, r: usize, pos_of: &[usize]) -> bool {
        let was_binding = self.total_left == 0;
        let w_r = self.weight(r);
        self.remove(r);

        let (a, b) = self.ends(r);
        let mut cands: Vec<usize> = self.incident[a]
            .iter()
            .chain(&self.incident[b])
            .copied()
            .filter(|&k| k != r && self.addable(k))
            .collect();
        // priority order, deduplicated
        cands.sort_unstable_by_key(|&k| pos_of[k]);
        cands.dedup();
        if was_binding {
            // the freed budget slot can go to any edge with spare degree on
            // both ends; only one edge fits, so the best such edge suffices
            let global = (0..self.chosen.len())
                .filter(|&k| k != r && self.addable(k))
                .min_by_key(|&k| pos_of[k]);
            if let Some(g) = global {
                if cands.first().is_none_or(|&c| pos_of[g] < pos_of[c]) {
                    cands.insert(0, g);
                }
            }
        }

        let eps = T::of(16.0) * T::epsilon() * (T::one() + w_r);
        let mut best: Option<(T, usize, Option<usize>)> = None;
        if let Some(&first) = cands.first() {
            let w = self.weight(first);
            if w > w_r + eps {
                best = Some((w, first, None));
            }
        }
        for (x_pos, &x) in cands.iter().enumerate() {
            let wx = self.weight(x);
            // candidates are sorted by weight: stop once no pair can win
            let ceiling = best.map_or(w_r + eps, |(g, _, _)| g);
            if wx + wx <= ceiling {
                break;
            }
            for &y in &cands[x_pos + 1..] {
                let g = wx + self.weight(y);
                if g <= best.map_or(w_r + eps, |(bg, _, _)| bg) {
                    break;
                }
                if self.pair_addable(x, y) {
                    best = Some((g, x, Some(y)));
                    break;
                }
            }
        }

        match best {
            Some((_, x, y)) => {
                self.add(x);
                if let Some(y) = y {
                    self.add(y);
                }
                true
            }
            None => {
                self.add(r);
                false
            }
        }
    }
}

fn selected<T: Scalar>(state: &State<'_, T>) -> Vec<usize> {
    (0..state.chosen.len()).filter(|&k| state.chosen[k]).collect()
}

/// Plain greedy pass in priority order: weight descending, column ascending.
pub fn greedy<T: Scalar>(p: &ProblemInstance<T>) -> Solution<T> {
    let mut state = State::new(p);
    state.fill(&p.priority_order());
    p.solution_from(&selected(&state), Optimality::Heuristic)
}

/// Greedy construction improved by local search: drop one chosen edge and add
/// up to two unchosen ones whenever that strictly raises the objective.
/// Always feasible.
pub fn solve_heuristic<T: Scalar>(p: &ProblemInstance<T>) -> Solution<T> {
    let order = p.priority_order();
    let mut pos_of = vec![0; order.len()];
    for (pos, &k) in order.iter().enumerate() {
        pos_of[k] = pos;
    }
    let mut state = State::new(p);
    state.fill(&order);

    loop {
        let mut improved = false;
        // weakest chosen edges first
        for &r in order.iter().rev() {
            if state.chosen[r] && state.try_swap(r, &pos_of) {
                state.fill(&order);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    p.solution_from(&selected(&state), Optimality::Heuristic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::{check_feasible, solve_exact};

    #[test]
    fn uniform_unbounded_takes_everything() {
        let edges = [(1, 2), (1, 3), (2, 3), (3, 4), (2, 4)];
        let p = ProblemInstance::new(4, edges.iter().map(|&e| (e, 0.5_f64)), vec![3; 4], None).unwrap();
        let sol = solve_heuristic(&p);
        assert_eq!(sol.chosen.len(), 5);
        assert_eq!(sol.objective, 2.5);
    }

    #[test]
    fn path_with_capacity_one_in_the_middle() {
        let p = ProblemInstance::new(3, [((1, 2), 0.9_f64), ((2, 3), 0.8)], vec![1, 1, 1], None).unwrap();
        let sol = solve_heuristic(&p);
        assert_eq!(sol.chosen, vec![(1, 2)]);
        assert_eq!(sol.objective, 0.9);
        assert_eq!(sol.optimality, Optimality::Heuristic);
    }

    #[test]
    fn empty_instance() {
        let p = ProblemInstance::<f64>::new(3, [], vec![2; 3], None).unwrap();
        assert!(solve_heuristic(&p).chosen.is_empty());
    }

    #[test]
    fn swap_escapes_greedy_trap() {
        let p = ProblemInstance::new(
            4,
            [((1, 2), 0.6_f64), ((2, 3), 0.9), ((3, 4), 0.6)],
            vec![1, 1, 1, 1],
            None,
        )
        .unwrap();
        assert_eq!(greedy(&p).chosen, vec![(2, 3)]);
        let sol = solve_heuristic(&p);
        assert_eq!(sol.chosen, vec![(1, 2), (3, 4)]);
        assert!(check_feasible(&p, &sol.chosen).is_ok());
    }

    #[test]
    fn single_swap_under_total_bound() {
        // total bound 1; greedy takes (1,2) with weight 0.7 ... no better single edge
        let p = ProblemInstance::new(
            4,
            [((1, 2), 0.7_f64), ((3, 4), 0.5), ((2, 3), 0.2)],
            vec![1, 1, 1, 1],
            Some(1),
        )
        .unwrap();
        let sol = solve_heuristic(&p);
        assert_eq!(sol.chosen, vec![(1, 2)]);
        assert_eq!(sol.objective, solve_exact(&p, 30).unwrap().objective);
    }
}
