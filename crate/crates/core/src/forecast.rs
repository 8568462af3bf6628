//! Degree and count series extraction, and univariate forecasting with
//! Gaussian upper quantiles.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::GraphSeries;
use crate::scalar::{normal_quantile, Scalar};

/// Non-negative observations starting at `start_time` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateSeries<T> {
    start_time: usize,
    values: Vec<T>,
}

impl<T: Scalar> UnivariateSeries<T> {
    pub fn new(start_time: usize, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("series", "must be non-empty"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::param("series", "values must be finite and non-negative"));
        }
        Ok(UnivariateSeries { start_time, values })
    }

    pub fn from_counts(start_time: usize, counts: &[usize]) -> Result<Self> {
        Self::new(start_time, counts.iter().map(|&c| T::of_usize(c)).collect())
    }

    pub fn start_time(&self) -> usize {
        self.start_time
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> T {
        *self.values.last().expect("non-empty")
    }
}

/// Which fitted model produced a forecast.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Last value, zero spread.
    Naive,
    Mean,
    Trend,
    /// Random walk with drift.
    Drift,
}

/// Point forecast `h` steps ahead with a Gaussian quantile function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForecastPoint<T> {
    mean: T,
    std_err: T,
    horizon: usize,
    model: Model,
}

impl<T: Scalar> ForecastPoint<T> {
    pub fn new(mean: T, std_err: T, horizon: usize, model: Model) -> Self {
        ForecastPoint {
            mean,
            std_err: std_err.max(T::zero()),
            horizon,
            model,
        }
    }

    /// Point forecast, clamped at zero.
    pub fn point(&self) -> T {
        self.mean.max(T::zero())
    }

    /// Standard error at this horizon.
    pub fn std_err(&self) -> T {
        self.std_err
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn model(&self) -> Model {
        self.model
    }

    /// Gaussian quantile at `level`, clamped at zero. Non-decreasing in
    /// `level`; `quantile(0.5) == point()`.
    pub fn quantile(&self, level: T) -> T {
        let z = if level == T::of(0.5) {
            T::zero()
        } else {
            T::of(normal_quantile(level.as_f64()))
        };
        (self.mean + z * self.std_err).max(T::zero())
    }
}

/// Pluggable univariate forecasting model.
pub trait Forecaster<T: Scalar>: Sync {
    fn forecast(&self, series: &UnivariateSeries<T>, horizon: usize) -> Result<ForecastPoint<T>>;
}

/// Default model: least-squares constant mean or linear trend, whichever has
/// the lower AICc. Series shorter than [`min_len`](Self::min_len) get a naive
/// last-value forecast.
#[derive(Debug, Clone, Copy)]
pub struct TrendForecaster {
    pub min_len: usize,
}

impl Default for TrendForecaster {
    fn default() -> Self {
        TrendForecaster { min_len: 3 }
    }
}

struct Fit<T> {
    model: Model,
    /// Extrapolation as a function of the 1-based position in the series.
    intercept: T,
    slope: T,
    rss: T,
    params: usize,
}

impl<T: Scalar> Fit<T> {
    fn predict(&self, pos: T) -> T {
        self.intercept + self.slope * pos
    }

    fn aicc(&self, n: usize) -> T {
        // parameters include the residual variance
        let k = self.params + 1;
        if n <= k + 1 {
            return T::infinity();
        }
        let nf = T::of_usize(n);
        let kf = T::of_usize(k);
        let two = T::of(2.0);
        nf * (self.rss / nf).ln() + two * kf + two * kf * (kf + T::one()) / (nf - kf - T::one())
    }
}

fn fit_mean<T: Scalar>(y: &[T]) -> Fit<T> {
    let n = T::of_usize(y.len());
    let mean = y.iter().copied().sum::<T>() / n;
    let rss = y.iter().map(|&v| (v - mean) * (v - mean)).sum();
    Fit {
        model: Model::Mean,
        intercept: mean,
        slope: T::zero(),
        rss,
        params: 1,
    }
}

fn fit_trend<T: Scalar>(y: &[T]) -> Fit<T> {
    let n = y.len();
    let nf = T::of_usize(n);
    let x_mean = T::of_usize(n + 1) / T::of(2.0);
    let y_mean = y.iter().copied().sum::<T>() / nf;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (k, &v) in y.iter().enumerate() {
        let dx = T::of_usize(k + 1) - x_mean;
        sxy = sxy + dx * (v - y_mean);
        sxx = sxx + dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let rss = y
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let r = v - (intercept + slope * T::of_usize(k + 1));
            r * r
        })
        .sum();
    Fit {
        model: Model::Trend,
        intercept,
        slope,
        rss,
        params: 2,
    }
}

impl<T: Scalar> Forecaster<T> for TrendForecaster {
    fn forecast(&self, series: &UnivariateSeries<T>, horizon: usize) -> Result<ForecastPoint<T>> {
        if horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        let y = series.values();
        let n = y.len();
        if n < self.min_len.max(3) {
            return Ok(ForecastPoint::new(series.last(), T::zero(), horizon, Model::Naive));
        }

        let scale = y.iter().fold(T::one(), |m, &v| m.max(v.abs()));
        let tol = T::of_usize(n) * (T::of(16.0) * T::epsilon() * scale).powi(2);
        let exact = |f: &Fit<T>| f.rss <= tol;

        let mean = fit_mean(y);
        let trend = fit_trend(y);
        let chosen = if exact(&mean) {
            mean
        } else if exact(&trend) {
            trend
        } else {
            let (a_mean, a_trend) = (mean.aicc(n), trend.aicc(n));
            if a_trend < a_mean {
                trend
            } else {
                mean
            }
        };

        let sd = if exact(&chosen) {
            T::zero()
        } else {
            (chosen.rss / T::of_usize(n - chosen.params)).sqrt()
        };
        let pos = T::of_usize(n + horizon);
        let std_err = sd * T::of_usize(horizon).sqrt();
        Ok(ForecastPoint::new(chosen.predict(pos), std_err, horizon, chosen.model))
    }
}

/// Random walk with drift: the last value plus `h` times the mean step.
/// The standard error `σ √(h (1 + h / (n − 1)))` includes the uncertainty of
/// the estimated drift; `σ` is the sd of the steps. Series shorter than
/// [`min_len`](Self::min_len) get a naive forecast.
#[derive(Debug, Clone, Copy)]
pub struct DriftForecaster {
    pub min_len: usize,
}

impl Default for DriftForecaster {
    fn default() -> Self {
        DriftForecaster { min_len: 3 }
    }
}

impl<T: Scalar> Forecaster<T> for DriftForecaster {
    fn forecast(&self, series: &UnivariateSeries<T>, horizon: usize) -> Result<ForecastPoint<T>> {
        if horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        let y = series.values();
        let n = y.len();
        if n < self.min_len.max(3) {
            return Ok(ForecastPoint::new(series.last(), T::zero(), horizon, Model::Naive));
        }
        let steps = T::of_usize(n - 1);
        let drift = (y[n - 1] - y[0]) / steps;
        let ss: T = y.windows(2).map(|w| (w[1] - w[0] - drift).powi(2)).sum();
        let scale = y.iter().fold(T::one(), |m, &v| m.max(v.abs()));
        let sd = if ss <= steps * (T::of(16.0) * T::epsilon() * scale).powi(2) {
            T::zero()
        } else {
            (ss / (steps - T::one())).sqrt()
        };
        let h = T::of_usize(horizon);
        let std_err = sd * (h * (T::one() + h / steps)).sqrt();
        Ok(ForecastPoint::new(y[n - 1] + h * drift, std_err, horizon, Model::Drift))
    }
}

/// Built-in models, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForecasterKind {
    #[default]
    Trend,
    Drift,
}

impl FromStr for ForecasterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "trend" => Ok(ForecasterKind::Trend),
            "drift" => Ok(ForecasterKind::Drift),
            _ => Err(Error::param("forecaster", format!("unknown model `{s}`, expected trend|drift"))),
        }
    }
}

impl<T: Scalar> Forecaster<T> for ForecasterKind {
    fn forecast(&self, series: &UnivariateSeries<T>, horizon: usize) -> Result<ForecastPoint<T>> {
        match self {
            ForecasterKind::Trend => TrendForecaster::default().forecast(series, horizon),
            ForecasterKind::Drift => DriftForecaster::default().forecast(series, horizon),
        }
    }
}

/// `max(0, quantile(u))` for `0 < u < 1`.
pub fn upper_bound<T: Scalar>(f: &ForecastPoint<T>, u: T) -> Result<T> {
    check_level("u", u)?;
    Ok(f.quantile(u))
}

pub(crate) fn check_level<T: Scalar>(name: &'static str, level: T) -> Result<()> {
    if level > T::zero() && level < T::one() {
        Ok(())
    } else {
        Err(Error::param(name, format!("level {level} outside (0, 1)")))
    }
}

/// Degrees `d_{i,t}` of `node` from its first appearance to `T`.
pub fn extract_degree_series<T: Scalar>(
    series: &GraphSeries,
    node: usize,
) -> Result<UnivariateSeries<T>> {
    let t0 = series
        .first_appearance(node)
        .ok_or(Error::UnknownNode(node))?;
    let counts: Vec<usize> = series.graphs()[t0 - 1..]
        .iter()
        .map(|g| g.degree(node))
        .collect();
    UnivariateSeries::from_counts(t0, &counts)
}

/// All degree series at once; entry `i - 1` belongs to node `i` of `G_T`.
pub fn extract_all_degree_series<T: Scalar>(series: &GraphSeries) -> Vec<UnivariateSeries<T>> {
    let n = series.last().n_nodes();
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for g in series.graphs() {
        let deg = g.degrees();
        for (k, d) in deg.into_iter().enumerate() {
            rows[k].push(d);
        }
    }
    rows.into_iter()
        .map(|counts| {
            let t0 = series.len() - counts.len() + 1;
            UnivariateSeries::from_counts(t0, &counts).expect("degree row non-empty")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountKind {
    Nodes,
    Edges,
}

/// `n_t` or `m_t` for `t = 1..T`.
pub fn extract_count_series<T: Scalar>(
    series: &GraphSeries,
    kind: CountKind,
) -> UnivariateSeries<T> {
    let counts = match kind {
        CountKind::Nodes => series.node_counts(),
        CountKind::Edges => series.edge_counts(),
    };
    UnivariateSeries::from_counts(1, &counts).expect("series is non-empty")
}

/// Pooled mean of first-appearance degrees over every node that arrives
/// after the first snapshot.
pub fn average_new_node_degree<T: Scalar>(series: &GraphSeries) -> Result<T> {
    let graphs = series.graphs();
    let (mut total, mut count) = (0usize, 0usize);
    for w in graphs.windows(2) {
        let (prev, cur) = (&w[0], &w[1]);
        if cur.n_nodes() == prev.n_nodes() {
            continue;
        }
        let deg = cur.degrees();
        total += deg[prev.n_nodes()..].iter().sum::<usize>();
        count += cur.n_nodes() - prev.n_nodes();
    }
    if count == 0 {
        return Err(Error::NoNewNodes);
    }
    Ok(T::of_usize(total) / T::of_usize(count))
}
