//! Degree-bounded binary edge selection.
//!
//! One 0/1 variable per candidate edge; maximise `Σ ξ_e x_e` subject to
//! `Σ_{e ∋ i} x_e <= b_i` for every node (F1) and optionally
//! `Σ_e x_e <= M` (F2).

mod exact;
mod heuristic;

use std::fmt;
use std::str::FromStr;

pub use exact::{solve_exact, DEFAULT_EXACT_LIMIT};
pub use heuristic::{greedy, solve_heuristic};

use crate::coefficients::CoefficientMap;
use crate::error::{Error, Result};
use crate::forecast::{upper_bound, ForecastPoint};
use crate::graph::{edge_column_index, CandidateGraph, Edge, Graph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Per-node degree bounds only.
    F1,
    /// Degree bounds plus a bound on the total edge count.
    F2,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::F1 => "F1",
            Formulation::F2 => "F2",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F1" => Ok(Formulation::F1),
            "F2" => Ok(Formulation::F2),
            _ => Err(Error::param("formulation", format!("unknown formulation `{s}`, expected F1 or F2"))),
        }
    }
}

/// One decision variable: a candidate edge, its incidence column and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variable<T> {
    pub edge: Edge,
    pub column: usize,
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance<T> {
    n: usize,
    variables: Vec<Variable<T>>,
    degree_bound: Vec<usize>,
    total_bound: Option<usize>,
}

impl<T: Scalar> ProblemInstance<T> {
    /// `degree_bound[i - 1]` bounds node `i`. A `total_bound` makes this an F2
    /// instance.
    pub fn new<I>(
        n: usize,
        weighted_edges: I,
        degree_bound: Vec<usize>,
        total_bound: Option<usize>,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Edge, T)>,
    {
        if degree_bound.len() != n {
            return Err(Error::param(
                "degree_bound",
                format!("expected {n} bounds, got {}", degree_bound.len()),
            ));
        }
        let mut variables = Vec::new();
        for ((i, j), weight) in weighted_edges {
            let column = edge_column_index(i, j, n)?;
            if !(weight >= T::zero() && weight <= T::one()) {
                return Err(Error::param(
                    "coefficients",
                    format!("weight {weight} of edge ({i}, {j}) outside [0, 1]"),
                ));
            }
            variables.push(Variable {
                edge: (i, j),
                column,
                weight,
            });
        }
        variables.sort_by_key(|v| v.column);
        if variables.windows(2).any(|w| w[0].column == w[1].column) {
            return Err(Error::param("variables", "duplicate candidate edge"));
        }
        Ok(ProblemInstance {
            n,
            variables,
            degree_bound,
            total_bound,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Variables in column order.
    pub fn variables(&self) -> &[Variable<T>] {
        &self.variables
    }

    pub fn degree_bound(&self) -> &[usize] {
        &self.degree_bound
    }

    pub fn total_bound(&self) -> Option<usize> {
        self.total_bound
    }

    pub fn formulation(&self) -> Formulation {
        if self.total_bound.is_some() {
            Formulation::F2
        } else {
            Formulation::F1
        }
    }

    /// Same instance with a different total bound.
    pub fn with_total_bound(&self, total_bound: Option<usize>) -> Self {
        ProblemInstance {
            total_bound,
            ..self.clone()
        }
    }

    /// Variable indices ordered by weight descending, then column ascending.
    pub(crate) fn priority_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.variables.len()).collect();
        order.sort_by(|&a, &b| {
            let (va, vb) = (&self.variables[a], &self.variables[b]);
            vb.weight
                .partial_cmp(&va.weight)
                .expect("finite weights")
                .then(va.column.cmp(&vb.column))
        });
        order
    }

    /// Objective of a set of variable indices, summed in column order.
    pub(crate) fn objective_of(&self, chosen: &[usize]) -> T {
        let mut idx = chosen.to_vec();
        idx.sort_unstable();
        idx.into_iter().map(|k| self.variables[k].weight).sum()
    }

    pub(crate) fn solution_from(&self, chosen: &[usize], optimality: Optimality) -> Solution<T> {
        let mut edges: Vec<Edge> = chosen.iter().map(|&k| self.variables[k].edge).collect();
        edges.sort_unstable();
        Solution {
            chosen: edges,
            objective: self.objective_of(chosen),
            optimality,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimality {
    Proved,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    /// Chosen edges in lexicographic order.
    pub chosen: Vec<Edge>,
    /// Sum of the chosen weights, in column order.
    pub objective: T,
    pub optimality: Optimality,
}

impl<T: Scalar> Solution<T> {
    pub fn empty(optimality: Optimality) -> Self {
        Solution {
            chosen: Vec::new(),
            objective: T::zero(),
            optimality,
        }
    }
}

/// Check `chosen` against every constraint of `p` without reference to any
/// solver state. Returns a description of the first violation.
pub fn check_feasible<T: Scalar>(p: &ProblemInstance<T>, chosen: &[Edge]) -> std::result::Result<(), String> {
    let mut sorted = chosen.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("an edge is chosen twice".into());
    }
    let mut deg = vec![0usize; p.n()];
    for &(i, j) in &sorted {
        if !p.variables().iter().any(|v| v.edge == (i, j)) {
            return Err(format!("edge ({i}, {j}) is not a candidate"));
        }
        deg[i - 1] += 1;
        deg[j - 1] += 1;
    }
    for (k, (&d, &b)) in deg.iter().zip(p.degree_bound()).enumerate() {
        if d > b {
            return Err(format!("node {} has degree {d} above its bound {b}", k + 1));
        }
    }
    if let Some(m) = p.total_bound() {
        if sorted.len() > m {
            return Err(format!("{} edges exceed the total bound {m}", sorted.len()));
        }
    }
    Ok(())
}

/// Degree bound `floor(f_u(d̂))`, clamped to `[0, n - 1]`.
pub fn degree_bound_from<T: Scalar>(f: &ForecastPoint<T>, u: T, n: usize) -> Result<usize> {
    let ub = upper_bound(f, u)?;
    let cap = n.saturating_sub(1);
    Ok(ub.floor().to_usize().unwrap_or(cap).min(cap))
}

/// Assemble the optimisation instance for `candidate`.
///
/// `degree_forecasts[i - 1]` is the forecast for node `i` of the candidate,
/// new nodes included. F2 requires `edge_forecast`; its bound is
/// `floor(f_u(m̂))`.
pub fn build_problem<T: Scalar>(
    candidate: &CandidateGraph,
    coeffs: &CoefficientMap<T>,
    degree_forecasts: &[ForecastPoint<T>],
    u: T,
    formulation: Formulation,
    edge_forecast: Option<&ForecastPoint<T>>,
) -> Result<ProblemInstance<T>> {
    let n = candidate.n_total();
    if degree_forecasts.len() < n {
        return Err(Error::MissingForecast(degree_forecasts.len() + 1));
    }
    let bounds = degree_forecasts[..n]
        .iter()
        .map(|f| degree_bound_from(f, u, n))
        .collect::<Result<Vec<_>>>()?;
    let total_bound = match formulation {
        Formulation::F1 => None,
        Formulation::F2 => {
            let f = edge_forecast.ok_or_else(|| Error::param("edge_forecast", "required for F2"))?;
            let ub = upper_bound(f, u)?;
            Some(ub.floor().to_usize().unwrap_or(usize::MAX))
        }
    };
    let mut weighted = Vec::with_capacity(candidate.n_edges());
    for e in candidate.edges() {
        let w = coeffs
            .get(e)
            .ok_or_else(|| Error::param("coefficients", format!("no weight for candidate edge {e:?}")))?;
        weighted.push((e, w));
    }
    if weighted.len() != coeffs.len() {
        return Err(Error::param("coefficients", "domain differs from the candidate edge set"));
    }
    ProblemInstance::new(n, weighted, bounds, total_bound)
}

/// Solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    Heuristic,
    /// Exact up to the size limit, heuristic above it.
    Auto,
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(SolverKind::Exact),
            "heuristic" => Ok(SolverKind::Heuristic),
            "auto" => Ok(SolverKind::Auto),
            _ => Err(Error::param("solver", format!("unknown solver `{s}`, expected exact|heuristic|auto"))),
        }
    }
}

pub fn solve<T: Scalar>(p: &ProblemInstance<T>, kind: SolverKind, exact_limit: usize) -> Result<Solution<T>> {
    match kind {
        SolverKind::Exact => solve_exact(p, exact_limit),
        SolverKind::Heuristic => Ok(solve_heuristic(p)),
        SolverKind::Auto if p.variables().len() <= exact_limit => solve_exact(p, exact_limit),
        SolverKind::Auto => Ok(solve_heuristic(p)),
    }
}

/// The forecast graph: all `n_total` candidate nodes and the chosen edges.
pub fn assemble_forecast_graph<T: Scalar>(candidate: &CandidateGraph, sol: &Solution<T>) -> Result<Graph> {
    Graph::from_edges(candidate.n_total(), sol.chosen.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{compute_coefficients, Scheme};
    use crate::forecast::Model;
    use crate::graph::{build_candidate, GraphSeries};

    fn triangle(bounds: Vec<usize>, total: Option<usize>) -> ProblemInstance<f64> {
        ProblemInstance::new(3, [((1, 2), 1.0), ((1, 3), 1.0), ((2, 3), 1.0)], bounds, total).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(ProblemInstance::<f64>::new(3, [((1, 2), 1.0)], vec![1, 1], None).is_err());
        assert!(ProblemInstance::<f64>::new(3, [((1, 4), 1.0)], vec![1; 3], None).is_err());
        assert!(ProblemInstance::<f64>::new(3, [((1, 2), 1.5)], vec![1; 3], None).is_err());
        assert!(ProblemInstance::<f64>::new(3, [((1, 2), 0.5), ((1, 2), 0.2)], vec![1; 3], None).is_err());
        let p = triangle(vec![1; 3], Some(2));
        assert_eq!(p.formulation(), Formulation::F2);
        assert_eq!(p.variables().iter().map(|v| v.column).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn feasibility_checker() {
        let p = triangle(vec![2, 2, 1], None);
        assert!(check_feasible(&p, &[(1, 2), (1, 3)]).is_ok());
        assert!(check_feasible(&p, &[(1, 3), (2, 3)]).is_err());
        assert!(check_feasible(&p, &[(1, 2), (1, 2)]).is_err());
        let p2 = triangle(vec![2, 2, 2], Some(1));
        assert!(check_feasible(&p2, &[(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn triangle_with_bounds_221_allows_two_edges() {
        let p = triangle(vec![2, 2, 1], None);
        let edges = [(1, 2), (1, 3), (2, 3)];
        let max_feasible = (0u32..8)
            .filter_map(|mask| {
                let s: Vec<Edge> = (0..3).filter(|b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
                check_feasible(&p, &s).ok().map(|_| s.len())
            })
            .max()
            .unwrap();
        assert_eq!(max_feasible, 2);
        assert_eq!(solve_exact(&p, 30).unwrap().chosen.len(), 2);
    }

    #[test]
    fn bound_from_forecast_is_floored_and_clamped() {
        let f = ForecastPoint::new(3.7, 0.0, 1, Model::Mean);
        assert_eq!(degree_bound_from(&f, 0.55, 10).unwrap(), 3);
        let f = ForecastPoint::new(30.0, 0.0, 1, Model::Mean);
        assert_eq!(degree_bound_from(&f, 0.55, 10).unwrap(), 9);
        let f = ForecastPoint::new(-2.0, 1.0, 1, Model::Trend);
        assert_eq!(degree_bound_from(&f, 0.55, 10).unwrap(), 0);
    }

    #[test]
    fn build_problem_from_candidate() {
        let tri = Graph::from_edges(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let s = GraphSeries::new(vec![tri.clone(), tri]).unwrap();
        let c = build_candidate(&s, 1, 2).unwrap();
        let coeffs = compute_coefficients::<f64>(Scheme::C6, &s, &c).unwrap();
        let fc: Vec<_> = [2.0, 2.0, 2.0, 1.0]
            .iter()
            .map(|&d| ForecastPoint::new(d, 0.0, 1, Model::Mean))
            .collect();
        let m = ForecastPoint::new(3.0, 0.0, 1, Model::Mean);
        let p = build_problem(&c, &coeffs, &fc, 0.5, Formulation::F2, Some(&m)).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.degree_bound(), &[2, 2, 2, 1]);
        assert_eq!(p.total_bound(), Some(3));
        assert_eq!(p.variables().len(), 5);

        assert!(build_problem(&c, &coeffs, &fc[..3], 0.5, Formulation::F1, None).is_err());
        assert!(build_problem(&c, &coeffs, &fc, 0.5, Formulation::F2, None).is_err());

        let zero: Vec<_> = (0..4).map(|_| ForecastPoint::new(0.0, 0.0, 1, Model::Mean)).collect();
        let p = build_problem(&c, &coeffs, &zero, 0.5, Formulation::F1, None).unwrap();
        let sol = solve_exact(&p, 30).unwrap();
        assert!(sol.chosen.is_empty());
        assert_eq!(solve_heuristic(&p).chosen, Vec::<Edge>::new());
    }

    #[test]
    fn assemble_keeps_isolated_new_nodes() {
        let path = Graph::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        let s = GraphSeries::new(vec![path]).unwrap();
        let c = build_candidate(&s, 2, 2).unwrap();

        let empty = Solution::<f64>::empty(Optimality::Proved);
        let g = assemble_forecast_graph(&c, &empty).unwrap();
        assert_eq!((g.n_nodes(), g.n_edges()), (5, 0));

        let all = Solution::<f64> {
            chosen: c.edges(),
            objective: 0.0,
            optimality: Optimality::Heuristic,
        };
        assert_eq!(assemble_forecast_graph(&c, &all).unwrap(), c.to_graph());

        let mut dropped = c.edges();
        dropped.retain(|&e| e != (2, 5));
        let sol = Solution::<f64> {
            chosen: dropped,
            objective: 0.0,
            optimality: Optimality::Heuristic,
        };
        let g = assemble_forecast_graph(&c, &sol).unwrap();
        assert_eq!(g.degree(5), c.kappa().len() - 1);
    }

    #[test]
    fn parse_formulation_and_solver() {
        assert_eq!("f2".parse::<Formulation>().unwrap(), Formulation::F2);
        assert!("F3".parse::<Formulation>().is_err());
        assert_eq!("auto".parse::<SolverKind>().unwrap(), SolverKind::Auto);
        assert!("simplex".parse::<SolverKind>().is_err());
    }
}
