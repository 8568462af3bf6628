//! Full forecasting pipeline: counts and degrees are forecast, the candidate
//! graph is built around the most popular nodes, edges are weighted and the
//! degree-bounded selection problem is solved.

use rayon::prelude::*;

use crate::coefficients::{compute_coefficients, Scheme};
use crate::error::{Error, Result};
use crate::forecast::{
    average_new_node_degree, check_level, extract_all_degree_series, extract_count_series, CountKind,
    ForecastPoint, Forecaster, ForecasterKind, Model,
};
use crate::graph::{build_candidate, CandidateGraph, Graph, GraphSeries};
use crate::optimizer::{
    assemble_forecast_graph, build_problem, solve, Formulation, Optimality, ProblemInstance, SolverKind,
    DEFAULT_EXACT_LIMIT,
};
use crate::scalar::Scalar;

/// Knobs of [`forecast_graph`].
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastParams<T> {
    pub scheme: Scheme,
    pub formulation: Formulation,
    /// Quantile level of the node-count forecast.
    pub gamma: T,
    /// Quantile level of the degree and edge-count upper bounds.
    pub u: T,
    /// Size of the popular set κ; `None` means every node of `G_T`.
    pub k: Option<usize>,
    pub solver: SolverKind,
    pub exact_limit: usize,
    /// Overrides the average degree of arriving nodes taken from history.
    pub d_avg: Option<T>,
    /// Univariate model used by [`forecast_graph`].
    pub model: ForecasterKind,
}

impl<T: Scalar> Default for ForecastParams<T> {
    fn default() -> Self {
        ForecastParams {
            scheme: Scheme::C5,
            formulation: Formulation::F2,
            gamma: T::of(0.5),
            u: T::of(0.55),
            k: None,
            solver: SolverKind::Auto,
            exact_limit: DEFAULT_EXACT_LIMIT,
            d_avg: None,
            model: ForecasterKind::Trend,
        }
    }
}

impl<T: Scalar> ForecastParams<T> {
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_formulation(mut self, formulation: Formulation) -> Self {
        self.formulation = formulation;
        self
    }

    pub fn with_u(mut self, u: T) -> Self {
        self.u = u;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_solver(mut self, solver: SolverKind) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_exact_limit(mut self, limit: usize) -> Self {
        self.exact_limit = limit;
        self
    }

    pub fn with_model(mut self, model: ForecasterKind) -> Self {
        self.model = model;
        self
    }

    pub fn with_d_avg(mut self, d_avg: T) -> Self {
        self.d_avg = Some(d_avg);
        self
    }
}

/// Forecast graph together with the intermediate quantities that shaped it.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphForecast<T> {
    pub graph: Graph,
    pub n_hat: usize,
    pub n_new: usize,
    pub d_avg: Option<T>,
    pub kappa: Vec<usize>,
    pub degree_bounds: Vec<usize>,
    pub total_bound: Option<usize>,
    pub objective: T,
    pub optimality: Optimality,
}

/// Forecast `G_{T+h}` from `series` with the model named in `params`.
pub fn forecast_graph<T: Scalar>(series: &GraphSeries, h: usize, params: &ForecastParams<T>) -> Result<Graph> {
    forecast_graph_with(series, h, params, &params.model).map(|f| f.graph)
}

/// Candidate graph and selection problem for one forecast, before solving.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedForecast<T> {
    pub candidate: CandidateGraph,
    pub problem: ProblemInstance<T>,
    pub n_hat: usize,
    pub n_new: usize,
    pub d_avg: Option<T>,
}

/// Run every step up to, but not including, the solver.
pub fn prepare_forecast<T: Scalar, F: Forecaster<T>>(
    series: &GraphSeries,
    h: usize,
    params: &ForecastParams<T>,
    forecaster: &F,
) -> Result<PreparedForecast<T>> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: series.len(),
        });
    }
    if h == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    check_level("gamma", params.gamma)?;
    check_level("u", params.u)?;

    let n_last = series.last().n_nodes();
    let node_fc = forecaster.forecast(&extract_count_series(series, CountKind::Nodes), h)?;
    let n_hat = node_fc
        .quantile(params.gamma)
        .round()
        .to_usize()
        .unwrap_or(n_last)
        .max(n_last);
    let n_new = n_hat - n_last;

    let d_avg = match params.d_avg {
        Some(d) if d >= T::zero() && d.is_finite() => Some(d),
        Some(d) => return Err(Error::param("d_avg", format!("{d} is not a non-negative degree"))),
        None => match average_new_node_degree::<T>(series) {
            Ok(d) => Some(d),
            Err(Error::NoNewNodes) if n_new == 0 => None,
            Err(e) => return Err(e),
        },
    };
    let new_degree = d_avg.map_or(T::zero(), |d| d.ceil());
    let k = match params.k {
        Some(0) => return Err(Error::param("K", "must be at least 1")),
        Some(k) => k,
        None => n_last.max(1),
    };

    let candidate = build_candidate(series, n_new, k)?;
    let mut degree_fc: Vec<ForecastPoint<T>> = extract_all_degree_series::<T>(series)
        .par_iter()
        .map(|s| forecaster.forecast(s, h))
        .collect::<Result<_>>()?;
    degree_fc.extend((0..n_new).map(|_| ForecastPoint::new(new_degree, T::zero(), h, Model::Naive)));

    let coeffs = compute_coefficients::<T>(params.scheme, series, &candidate)?;
    let edge_fc = match params.formulation {
        Formulation::F1 => None,
        Formulation::F2 => Some(forecaster.forecast(&extract_count_series(series, CountKind::Edges), h)?),
    };
    let problem = build_problem(
        &candidate,
        &coeffs,
        &degree_fc,
        params.u,
        params.formulation,
        edge_fc.as_ref(),
    )?;
    Ok(PreparedForecast {
        candidate,
        problem,
        n_hat,
        n_new,
        d_avg,
    })
}

/// Forecast `G_{T+h}` with a caller-supplied univariate model.
pub fn forecast_graph_with<T: Scalar, F: Forecaster<T>>(
    series: &GraphSeries,
    h: usize,
    params: &ForecastParams<T>,
    forecaster: &F,
) -> Result<GraphForecast<T>> {
    let prep = prepare_forecast(series, h, params, forecaster)?;
    let solution = solve(&prep.problem, params.solver, params.exact_limit)?;
    let graph = assemble_forecast_graph(&prep.candidate, &solution)?;

    Ok(GraphForecast {
        graph,
        n_hat: prep.n_hat,
        n_new: prep.n_new,
        d_avg: prep.d_avg,
        kappa: prep.candidate.kappa().to_vec(),
        degree_bounds: prep.problem.degree_bound().to_vec(),
        total_bound: prep.problem.total_bound(),
        objective: solution.objective,
        optimality: solution.optimality,
    })
}
