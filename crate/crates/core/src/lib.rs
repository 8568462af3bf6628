//! Forecast the structure of a growing graph.
//!
//! Node, edge and per-node degree series are extracted from a sequence of
//! snapshots and forecast; new nodes are attached to the most popular existing
//! nodes, and a maximum-weight edge subset is selected subject to the forecast
//! degree bounds (and optionally a bound on the total edge count).
//!
//! ```
//! use netfba::{forecast_graph, Graph, GraphSeries, Params};
//!
//! let g = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
//! let series = GraphSeries::new(vec![g.clone(); 5]).unwrap();
//! let params = Params::default().with_scheme("C6".parse().unwrap()).with_u(0.5);
//! assert_eq!(forecast_graph(&series, 2, &params).unwrap(), g);
//! ```
//!
//! All real-valued code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, with `*32` variants for `f32`.

pub mod bounds;
pub mod coefficients;
pub mod error;
pub mod evaluation;
pub mod forecast;
pub mod graph;
pub mod io;
pub mod optimizer;
pub mod pipeline;
pub mod scalar;
pub mod synthetic;

pub use bounds::{bounds_report, count_lower_bound, count_upper_bound, enumerate_solutions, BoundsReport};
pub use coefficients::{compute_coefficients, CoefficientMap, Scheme};
pub use error::{Error, Result};
pub use evaluation::{
    aggregate, density_error, edge_error, last_seen_baseline, node_error, run_experiment, ExperimentConfig,
    Method, MetricRow, SummaryRow,
};
pub use forecast::{DriftForecaster, ForecastPoint, Forecaster, ForecasterKind, TrendForecaster, UnivariateSeries};
pub use graph::{build_candidate, union_graphs, CandidateGraph, Edge, Graph, GraphSeries};
pub use optimizer::{
    check_feasible, greedy, solve, solve_exact, solve_heuristic, Formulation, Optimality, ProblemInstance, Solution,
    SolverKind,
};
pub use pipeline::{forecast_graph, forecast_graph_with, prepare_forecast, ForecastParams, GraphForecast, PreparedForecast};
pub use scalar::Scalar;
pub use synthetic::{generate_pa_series, PaConfig};

pub type Params = ForecastParams<f64>;
pub type Params32 = ForecastParams<f32>;
pub type Problem = ProblemInstance<f64>;
pub type Problem32 = ProblemInstance<f32>;
pub type EdgeSelection = Solution<f64>;
pub type EdgeSelection32 = Solution<f32>;
pub type Forecast = ForecastPoint<f64>;
pub type Forecast32 = ForecastPoint<f32>;
pub type Coefficients = CoefficientMap<f64>;
pub type Coefficients32 = CoefficientMap<f32>;
pub type Series = UnivariateSeries<f64>;
pub type Series32 = UnivariateSeries<f32>;
pub type Experiment = ExperimentConfig<f64>;
pub type Metrics = MetricRow<f64>;
