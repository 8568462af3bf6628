//! Error metrics, the last-seen baseline and the rolling-origin harness.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coefficients::Scheme;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphSeries};
use crate::pipeline::{forecast_graph, ForecastParams};
use crate::scalar::Scalar;

/// `|n̂ − n| / n`.
pub fn node_error<T: Scalar>(pred: &Graph, actual: &Graph) -> Result<T> {
    if actual.n_nodes() == 0 {
        return Err(Error::param("actual", "graph has no nodes"));
    }
    Ok(T::of_usize(pred.n_nodes().abs_diff(actual.n_nodes())) / T::of_usize(actual.n_nodes()))
}

/// `|m̂ − m| / m`.
pub fn edge_error<T: Scalar>(pred: &Graph, actual: &Graph) -> Result<T> {
    if actual.n_edges() == 0 {
        return Err(Error::param("actual", "graph has no edges"));
    }
    Ok(T::of_usize(pred.n_edges().abs_diff(actual.n_edges())) / T::of_usize(actual.n_edges()))
}

/// Absolute difference of the two densities.
pub fn density_error<T: Scalar>(pred: &Graph, actual: &Graph) -> Result<T> {
    Ok((pred.density::<T>()? - actual.density::<T>()?).abs())
}

/// Edge-set overlap `|E ∩ Ê| / |E ∪ Ê|`; 1 when both are empty. A
/// diagnostic only, the three errors above compare counts.
pub fn jaccard<T: Scalar>(pred: &Graph, actual: &Graph) -> T {
    let common = pred.edge_set().intersection(actual.edge_set()).count();
    let union = pred.n_edges() + actual.n_edges() - common;
    if union == 0 {
        T::one()
    } else {
        T::of_usize(common) / T::of_usize(union)
    }
}

/// Predict `G_T` for every horizon.
pub fn last_seen_baseline(series: &GraphSeries, _h: usize) -> Graph {
    series.last().clone()
}

/// Forecasting method evaluated by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Scheme(Scheme),
    LastSeen,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Scheme(s) => write!(f, "{s}"),
            Method::LastSeen => f.write_str("LS"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("ls") {
            Ok(Method::LastSeen)
        } else {
            s.parse().map(Method::Scheme)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T> {
    pub origins: Vec<usize>,
    pub horizons: Vec<usize>,
    pub methods: Vec<Method>,
    /// Shared forecast settings; the scheme is overridden per method.
    pub params: ForecastParams<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow<T> {
    pub method: Method,
    pub origin: usize,
    pub horizon: usize,
    pub seed: u64,
    pub node_err: T,
    pub edge_err: T,
    pub dens_err: T,
    pub jaccard: T,
}

/// Score one forecast against the truth.
pub fn score<T: Scalar>(pred: &Graph, actual: &Graph) -> Result<(T, T, T, T)> {
    Ok((
        node_error(pred, actual)?,
        edge_error(pred, actual)?,
        density_error(pred, actual)?,
        jaccard(pred, actual),
    ))
}

/// Truncate each run at every origin, forecast every horizon with every
/// method and score against the held-out snapshot. Cells run in parallel;
/// rows come back ordered by run, origin, horizon and method.
pub fn run_experiment<T: Scalar>(runs: &[(u64, GraphSeries)], cfg: &ExperimentConfig<T>) -> Result<Vec<MetricRow<T>>> {
    if cfg.origins.is_empty() || cfg.horizons.is_empty() || cfg.methods.is_empty() {
        return Err(Error::param("experiment", "origins, horizons and methods must be non-empty"));
    }
    if cfg.horizons.contains(&0) {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    let reach = cfg.origins.iter().max().unwrap() + cfg.horizons.iter().max().unwrap();
    for (seed, s) in runs {
        if reach > s.len() {
            return Err(Error::param(
                "origins",
                format!("origin + horizon reaches {reach} but run {seed} has {} snapshots", s.len()),
            ));
        }
    }

    let mut cells = Vec::new();
    for (run, _) in runs.iter().enumerate() {
        for &t in &cfg.origins {
            for &h in &cfg.horizons {
                for &m in &cfg.methods {
                    cells.push((run, t, h, m));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(run, t, h, method)| {
            let (seed, series) = &runs[run];
            let train = series.truncated(t)?;
            let actual = series.at(t + h).expect("checked above");
            let pred = match method {
                Method::LastSeen => last_seen_baseline(&train, h),
                Method::Scheme(s) => forecast_graph(&train, h, &cfg.params.clone().with_scheme(s))?,
            };
            let (node_err, edge_err, dens_err, jaccard) = score(&pred, actual)?;
            Ok(MetricRow {
                method,
                origin: t,
                horizon: h,
                seed: *seed,
                node_err,
                edge_err,
                dens_err,
                jaccard,
            })
        })
        .collect()
}

/// Mean and sample standard deviation of one metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat<T> {
    pub mean: T,
    pub sd: T,
}

fn stat<T: Scalar>(xs: &[T]) -> Stat<T> {
    let n = T::of_usize(xs.len());
    let mean = xs.iter().copied().sum::<T>() / n;
    let sd = if xs.len() < 2 {
        T::zero()
    } else {
        (xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / (n - T::one())).sqrt()
    };
    Stat { mean, sd }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow<T> {
    pub method: Method,
    pub horizon: usize,
    pub count: usize,
    pub node_err: Stat<T>,
    pub edge_err: Stat<T>,
    pub dens_err: Stat<T>,
    pub jaccard: Stat<T>,
}

/// Aggregate rows per (method, horizon), in order of first appearance of the
/// method and ascending horizon.
pub fn aggregate<T: Scalar>(rows: &[MetricRow<T>]) -> Vec<SummaryRow<T>> {
    let mut methods: Vec<Method> = Vec::new();
    let mut horizons: Vec<usize> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
        if !horizons.contains(&r.horizon) {
            horizons.push(r.horizon);
        }
    }
    horizons.sort_unstable();

    let mut out = Vec::new();
    for &m in &methods {
        for &h in &horizons {
            let cell: Vec<&MetricRow<T>> = rows.iter().filter(|r| r.method == m && r.horizon == h).collect();
            if cell.is_empty() {
                continue;
            }
            let pick = |f: fn(&MetricRow<T>) -> T| stat(&cell.iter().map(|r| f(r)).collect::<Vec<_>>());
            out.push(SummaryRow {
                method: m,
                horizon: h,
                count: cell.len(),
                node_err: pick(|r| r.node_err),
                edge_err: pick(|r| r.edge_err),
                dens_err: pick(|r| r.dens_err),
                jaccard: pick(|r| r.jaccard),
            });
        }
    }
    out
}

pub const DETAIL_HEADER: [&str; 8] = ["scheme", "T", "h", "seed", "node_err", "edge_err", "dens_err", "jaccard"];

pub const SUMMARY_HEADER: [&str; 11] = [
    "scheme",
    "h",
    "count",
    "node_err_mean",
    "node_err_sd",
    "edge_err_mean",
    "edge_err_sd",
    "dens_err_mean",
    "dens_err_sd",
    "jaccard_mean",
    "jaccard_sd",
];

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.into())
}

pub fn write_detail_csv<T: Scalar, W: Write>(out: W, rows: &[MetricRow<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DETAIL_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.origin.to_string(),
            r.horizon.to_string(),
            r.seed.to_string(),
            r.node_err.to_string(),
            r.edge_err.to_string(),
            r.dens_err.to_string(),
            r.jaccard.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<T: Scalar, W: Write>(out: W, rows: &[SummaryRow<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.method.to_string(), r.horizon.to_string(), r.count.to_string()];
        for s in [r.node_err, r.edge_err, r.dens_err, r.jaccard] {
            rec.push(s.mean.to_string());
            rec.push(s.sd.to_string());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
