//! Objective weights for candidate edges.
//!
//! Existing edges are scored from their history in the series; edges from a
//! forecast new node to a popular node `i` get the empirical quantile of the
//! existing weights at level `d_{i,U} / Σ_{k∈κ} d_{k,U}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{CandidateGraph, Edge, Graph, GraphSeries};
use crate::scalar::Scalar;

/// Coefficient scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Uniform: every candidate edge weighs 1.
    C1,
    /// Binary history: 1 if the edge was ever observed.
    C2,
    /// Proportion of snapshots containing the edge.
    C3,
    /// Linearly time-weighted presence.
    C4,
    /// Harmonically time-weighted presence, `1 / (T - t + 1)`.
    C5,
    /// Presence in the last snapshot.
    C6,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [Scheme::C1, Scheme::C2, Scheme::C3, Scheme::C4, Scheme::C5, Scheme::C6];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::C1 => "C1",
            Scheme::C2 => "C2",
            Scheme::C3 => "C3",
            Scheme::C4 => "C4",
            Scheme::C5 => "C5",
            Scheme::C6 => "C6",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param("scheme", format!("unknown scheme `{s}`, expected C1..C6")))
    }
}

/// Weight in `[0, 1]` for every candidate edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMap<T> {
    scheme: Scheme,
    weights: BTreeMap<Edge, T>,
}

impl<T: Scalar> CoefficientMap<T> {
    pub fn from_weights(scheme: Scheme, weights: BTreeMap<Edge, T>) -> Result<Self> {
        if let Some((e, w)) = weights
            .iter()
            .find(|(_, w)| !(**w >= T::zero() && **w <= T::one()))
        {
            return Err(Error::param(
                "coefficients",
                format!("weight {w} of edge {e:?} outside [0, 1]"),
            ));
        }
        Ok(CoefficientMap { scheme, weights })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn get(&self, e: Edge) -> Option<T> {
        self.weights.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Entries in edge order.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, T)> + '_ {
        self.weights.iter().map(|(&e, &w)| (e, w))
    }
}

/// Un-normalised history score per union edge.
fn raw_scores<T: Scalar>(scheme: Scheme, series: &GraphSeries, union: &Graph) -> BTreeMap<Edge, T> {
    let big_t = series.len();
    let mut scores: BTreeMap<Edge, T> = union.edges().map(|e| (e, T::zero())).collect();
    match scheme {
        Scheme::C1 | Scheme::C2 => scores.values_mut().for_each(|w| *w = T::one()),
        Scheme::C6 => {
            for e in series.last().edges() {
                if let Some(w) = scores.get_mut(&e) {
                    *w = T::one();
                }
            }
        }
        Scheme::C3 | Scheme::C4 | Scheme::C5 => {
            for (k, g) in series.graphs().iter().enumerate() {
                let t = k + 1;
                let step = match scheme {
                    Scheme::C3 => T::one(),
                    Scheme::C4 => T::of_usize(t),
                    _ => T::one() / T::of_usize(big_t - t + 1),
                };
                for e in g.edges() {
                    if let Some(w) = scores.get_mut(&e) {
                        *w = *w + step;
                    }
                }
            }
        }
    }
    scores
}

/// Weights of every edge of the union graph under `scheme`, normalised by the
/// largest score (all zero when no edge scores above zero).
pub fn existing_edge_weights<T: Scalar>(
    scheme: Scheme,
    series: &GraphSeries,
    union: &Graph,
) -> BTreeMap<Edge, T> {
    let mut scores = raw_scores::<T>(scheme, series, union);
    if matches!(scheme, Scheme::C3 | Scheme::C4 | Scheme::C5) {
        let max = scores.values().fold(T::zero(), |m, &w| m.max(w));
        for w in scores.values_mut() {
            *w = if max > T::zero() { *w / max } else { T::zero() };
        }
    }
    scores
}

/// Weight of one existing edge, normalised over the union graph of `series`.
pub fn existing_edge_weight<T: Scalar>(scheme: Scheme, series: &GraphSeries, edge: Edge) -> Result<T> {
    let n = series.last().n_nodes();
    let (i, j) = edge;
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidEdge { i, j, n });
    }
    let union = crate::graph::union_graphs(series);
    if !union.has_edge(i, j) {
        // never observed: only the uniform scheme scores it
        return Ok(if scheme == Scheme::C1 { T::one() } else { T::zero() });
    }
    Ok(existing_edge_weights::<T>(scheme, series, &union)[&edge])
}

/// Empirical quantile of `sorted` (ascending) at `level`, interpolating
/// linearly between order statistics. `level` is clamped to `[0, 1]`.
pub fn empirical_quantile<T: Scalar>(sorted: &[T], level: T) -> Option<T> {
    if sorted.is_empty() {
        return None;
    }
    let p = level.max(T::zero()).min(T::one());
    let pos = p * T::of_usize(sorted.len() - 1);
    let lo = pos.floor();
    let lo_idx = lo.to_usize().unwrap_or(0).min(sorted.len() - 1);
    let hi_idx = (lo_idx + 1).min(sorted.len() - 1);
    let frac = pos - lo;
    Some(sorted[lo_idx] + frac * (sorted[hi_idx] - sorted[lo_idx]))
}

/// Weight of an edge from a new node to κ member `node`.
///
/// `existing_sorted` is the ascending reference multiset; when it is empty the
/// level itself is returned.
pub fn new_edge_weight<T: Scalar>(
    existing_sorted: &[T],
    union_degrees: &[usize],
    kappa: &[usize],
    node: usize,
) -> Result<T> {
    if !kappa.contains(&node) {
        return Err(Error::param("kappa", format!("node {node} is not a member")));
    }
    let total: usize = kappa.iter().map(|&k| union_degrees[k - 1]).sum();
    if total == 0 {
        return Err(Error::param("kappa", "total union degree of κ is zero"));
    }
    let level = T::of_usize(union_degrees[node - 1]) / T::of_usize(total);
    Ok(empirical_quantile(existing_sorted, level).unwrap_or(level))
}

/// Weights for every candidate edge of `candidate`, built from `series`.
///
/// The quantile reference for new-node edges is the multiset of strictly
/// positive existing weights.
pub fn compute_coefficients<T: Scalar>(
    scheme: Scheme,
    series: &GraphSeries,
    candidate: &CandidateGraph,
) -> Result<CoefficientMap<T>> {
    let mut weights = existing_edge_weights::<T>(scheme, series, candidate.base());
    if !candidate.new_edges().is_empty() {
        let mut reference: Vec<T> = weights.values().copied().filter(|&w| w > T::zero()).collect();
        reference.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));

        let kappa_total: usize = candidate
            .kappa()
            .iter()
            .map(|&k| candidate.union_degree(k))
            .sum();
        let mut per_member: BTreeMap<usize, T> = BTreeMap::new();
        for &k in candidate.kappa() {
            let w = match scheme {
                Scheme::C1 | Scheme::C2 => T::one(),
                // no κ degree to share: treat all members alike
                _ if kappa_total == 0 => empirical_quantile(&reference, T::one()).unwrap_or(T::one()),
                _ => new_edge_weight(&reference, candidate.union_degrees(), candidate.kappa(), k)?,
            };
            per_member.insert(k, w);
        }
        for &(i, j) in candidate.new_edges() {
            weights.insert((i, j), per_member[&i]);
        }
    }
    CoefficientMap::from_weights(scheme, weights)
}
