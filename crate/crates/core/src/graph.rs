//! Graph snapshots, graph series, the union/candidate graph and the
//! zero-inflated incidence layout used by the optimiser.
//!
//! Node indices are 1-based everywhere in this module: a graph on `n` nodes
//! has nodes `1..=n`, and an undirected edge is stored as `(i, j)` with
//! `i < j`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Undirected edge `(i, j)` with `i < j`.
pub type Edge = (usize, usize);

/// Normalise an unordered pair to `(min, max)`.
#[inline]
pub fn ordered(i: usize, j: usize) -> Edge {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Simple undirected, unweighted graph without loops.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n_nodes: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    /// Edgeless graph on `n_nodes` nodes.
    pub fn new(n_nodes: usize) -> Self {
        Graph {
            n_nodes,
            edges: BTreeSet::new(),
        }
    }

    /// Build from unordered pairs. Pairs are normalised and duplicates collapse.
    pub fn from_edges<I>(n_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Graph::new(n_nodes);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Insert an edge; returns whether it was new.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<bool> {
        if i == j || i == 0 || j == 0 || i > self.n_nodes || j > self.n_nodes {
            return Err(Error::InvalidEdge {
                i,
                j,
                n: self.n_nodes,
            });
        }
        Ok(self.edges.insert(ordered(i, j)))
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> bool {
        self.edges.remove(&ordered(i, j))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.edges.contains(&ordered(i, j))
    }

    /// Append isolated nodes.
    pub fn grow_to(&mut self, n_nodes: usize) {
        self.n_nodes = self.n_nodes.max(n_nodes);
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Degrees of nodes `1..=n`; entry `i - 1` holds the degree of node `i`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(i, j) in &self.edges {
            deg[i - 1] += 1;
            deg[j - 1] += 1;
        }
        deg
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(i, j)| i == node || j == node)
            .count()
    }

    /// Edge density `2m / (n (n - 1))`.
    pub fn density<T: Scalar>(&self) -> Result<T> {
        density(self)
    }
}

/// Edge density `2m / (n (n - 1))` of `g`; undefined below two nodes.
pub fn density<T: Scalar>(g: &Graph) -> Result<T> {
    let n = g.n_nodes();
    if n < 2 {
        return Err(Error::TooFewNodes("density"));
    }
    let pairs = T::of_usize(n) * T::of_usize(n - 1);
    Ok(T::of(2.0) * T::of_usize(g.n_edges()) / pairs)
}

/// Time-ordered snapshots `G_1..G_T` over a growing node set. Node `i` in one
/// snapshot is node `i` in every later snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSeries {
    graphs: Vec<Graph>,
}

impl GraphSeries {
    pub fn new(graphs: Vec<Graph>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::EmptySeries);
        }
        for (t, w) in graphs.windows(2).enumerate() {
            if w[0].n_nodes() > w[1].n_nodes() {
                return Err(Error::ShrinkingSeries {
                    t: t + 1,
                    prev: w[0].n_nodes(),
                    next: w[1].n_nodes(),
                });
            }
        }
        Ok(GraphSeries { graphs })
    }

    /// Number of snapshots `T`.
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    /// Snapshot at time `t` (1-based).
    pub fn at(&self, t: usize) -> Option<&Graph> {
        t.checked_sub(1).and_then(|k| self.graphs.get(k))
    }

    /// The last snapshot `G_T`.
    pub fn last(&self) -> &Graph {
        self.graphs.last().expect("series is non-empty")
    }

    /// The first `t` snapshots.
    pub fn truncated(&self, t: usize) -> Result<Self> {
        if t == 0 || t > self.len() {
            return Err(Error::param(
                "T",
                format!("origin {t} outside 1..={}", self.len()),
            ));
        }
        Ok(GraphSeries {
            graphs: self.graphs[..t].to_vec(),
        })
    }

    /// First time `t` (1-based) at which node `i` exists.
    pub fn first_appearance(&self, node: usize) -> Option<usize> {
        if node == 0 {
            return None;
        }
        self.graphs
            .iter()
            .position(|g| g.n_nodes() >= node)
            .map(|k| k + 1)
    }

    pub fn node_counts(&self) -> Vec<usize> {
        self.graphs.iter().map(Graph::n_nodes).collect()
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.graphs.iter().map(Graph::n_edges).collect()
    }
}

/// Union of all snapshots with multi-edges collapsed, on `n_T` nodes.
pub fn union_graphs(series: &GraphSeries) -> Graph {
    let mut union = Graph::new(series.last().n_nodes());
    for g in series.graphs() {
        union.edges.extend(g.edges());
    }
    union
}

/// The `min(k, n)` nodes of largest degree in `union`, ties broken by
/// ascending node index.
pub fn top_k_nodes(union: &Graph, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::param("K", "must be at least 1"));
    }
    let deg = union.degrees();
    let mut nodes: Vec<usize> = (1..=union.n_nodes()).collect();
    nodes.sort_by(|&a, &b| deg[b - 1].cmp(&deg[a - 1]).then(a.cmp(&b)));
    nodes.truncate(k);
    Ok(nodes)
}

/// Bijection between unordered pairs `(i, j)`, `i < j <= n`, and the columns
/// `1..=n(n-1)/2` of the zero-inflated incidence matrix. Columns unroll the
/// upper triangle of the adjacency matrix row by row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncidenceColumnMap {
    n: usize,
}

impl IncidenceColumnMap {
    pub fn new(n: usize) -> Self {
        IncidenceColumnMap { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of columns, `n(n-1)/2`.
    pub fn n_columns(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Columns preceding row block `i`.
    #[inline]
    fn offset(&self, i: usize) -> usize {
        (i - 1) * (2 * self.n - i) / 2
    }

    pub fn column(&self, i: usize, j: usize) -> Result<usize> {
        edge_column_index(i, j, self.n)
    }

    /// Inverse of [`column`](Self::column).
    pub fn edge(&self, k: usize) -> Result<Edge> {
        if k == 0 || k > self.n_columns() {
            return Err(Error::InvalidColumn { k, n: self.n });
        }
        // largest i with offset(i) < k
        let (mut lo, mut hi) = (1, self.n - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if self.offset(mid) < k {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let i = lo;
        Ok((i, i + (k - self.offset(i))))
    }
}

/// Column of edge `(i, j)` among `n(n-1)/2`: `(i-1)(2n-i)/2 + (j-i)`.
pub fn edge_column_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i == 0 || i >= j || j > n {
        return Err(Error::InvalidEdge { i, j, n });
    }
    Ok((i - 1) * (2 * n - i) / 2 + (j - i))
}

/// Inverse of [`edge_column_index`].
pub fn column_to_edge(k: usize, n: usize) -> Result<Edge> {
    IncidenceColumnMap::new(n).edge(k)
}

/// Union graph augmented with edges from forecast new nodes to the most
/// popular existing nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateGraph {
    base: Graph,
    n_total: usize,
    kappa: Vec<usize>,
    union_degrees: Vec<usize>,
    new_edges: BTreeSet<Edge>,
}

impl CandidateGraph {
    /// The union graph `G_U` on the existing `n_T` nodes.
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n_existing(&self) -> usize {
        self.base.n_nodes()
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn n_new(&self) -> usize {
        self.n_total - self.base.n_nodes()
    }

    pub fn kappa(&self) -> &[usize] {
        &self.kappa
    }

    /// Union-graph degree of existing node `i` (1-based).
    pub fn union_degree(&self, node: usize) -> usize {
        self.union_degrees[node - 1]
    }

    pub fn union_degrees(&self) -> &[usize] {
        &self.union_degrees
    }

    /// Edges `(κ member, new node)`.
    pub fn new_edges(&self) -> &BTreeSet<Edge> {
        &self.new_edges
    }

    pub fn is_new_node(&self, node: usize) -> bool {
        node > self.base.n_nodes()
    }

    /// All candidate edges in column order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut all: Vec<Edge> = self.base.edges().chain(self.new_edges.iter().copied()).collect();
        all.sort_unstable();
        all
    }

    pub fn n_edges(&self) -> usize {
        self.base.n_edges() + self.new_edges.len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.base.edge_set().contains(&e) || self.new_edges.contains(&e)
    }

    pub fn column_map(&self) -> IncidenceColumnMap {
        IncidenceColumnMap::new(self.n_total)
    }

    /// Candidate graph as a plain [`Graph`] on `n_total` nodes.
    pub fn to_graph(&self) -> Graph {
        let mut g = self.base.clone();
        g.grow_to(self.n_total);
        g.edges.extend(self.new_edges.iter().copied());
        g
    }

    /// Non-zero entries `(row, column)` of the zero-inflated incidence matrix.
    pub fn incidence_entries(&self) -> Vec<(usize, usize)> {
        let map = self.column_map();
        let mut out = Vec::with_capacity(2 * self.n_edges());
        for (i, j) in self.edges() {
            let k = map.column(i, j).expect("candidate edge within n_total");
            out.push((i, k));
            out.push((j, k));
        }
        out.sort_unstable();
        out
    }
}

/// Union graph of `series` plus `n_new` nodes, each joined to every member of
/// the top-`k` set κ.
pub fn build_candidate(series: &GraphSeries, n_new: usize, k: usize) -> Result<CandidateGraph> {
    let base = union_graphs(series);
    let kappa = top_k_nodes(&base, k)?;
    let union_degrees = base.degrees();
    let n_existing = base.n_nodes();
    let n_total = n_existing + n_new;
    let new_edges = (n_existing + 1..=n_total)
        .flat_map(|new| kappa.iter().map(move |&old| ordered(old, new)))
        .collect();
    Ok(CandidateGraph {
        base,
        n_total,
        kappa,
        union_degrees,
        new_edges,
    })
}
