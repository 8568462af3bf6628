//! Linear preferential-attachment graph sequences, optionally with uniform
//! random edge deletion after each growth step.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ordered, Graph, GraphSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaConfig {
    /// Nodes (and ring edges) of the first snapshot.
    pub s0: usize,
    /// Edges brought by each arriving node.
    pub s: usize,
    pub nodes_per_step: usize,
    /// Number of snapshots, the seed ring included.
    pub steps: usize,
    pub delete_per_step: usize,
    pub seed: u64,
}

impl PaConfig {
    /// 50-node ring, 5 arrivals with 10 edges each per step, 30 snapshots.
    pub fn experiment_one(seed: u64) -> Self {
        PaConfig {
            s0: 50,
            s: 10,
            nodes_per_step: 5,
            steps: 30,
            delete_per_step: 0,
            seed,
        }
    }

    /// Experiment one plus 10 uniform deletions per step.
    pub fn experiment_two(seed: u64) -> Self {
        PaConfig {
            delete_per_step: 10,
            ..Self::experiment_one(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::param("s", "must be at least 1"));
        }
        if self.s0 <= self.s {
            return Err(Error::param("s0", format!("must exceed s = {}", self.s)));
        }
        if self.s0 < 3 {
            return Err(Error::param("s0", "the seed ring needs at least 3 nodes"));
        }
        if self.nodes_per_step == 0 {
            return Err(Error::param("nodes_per_step", "must be at least 1"));
        }
        if self.steps == 0 {
            return Err(Error::param("steps", "must be at least 1"));
        }
        Ok(())
    }
}

/// Draw `s` distinct targets with probability proportional to degree, using
/// the endpoint multiset `pool` (one entry per edge endpoint).
fn draw_targets<R: Rng>(rng: &mut R, pool: &[usize], s: usize, out: &mut Vec<usize>) {
    out.clear();
    while out.len() < s {
        let v = pool[rng.gen_range(0..pool.len())];
        if !out.contains(&v) {
            out.push(v);
        }
    }
}

/// Generate the series. Every arrival within a step attaches to nodes that
/// existed before the step, with probability proportional to their current
/// degree; deletions follow the arrivals.
pub fn generate_pa_series(cfg: &PaConfig) -> Result<GraphSeries> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = Graph::from_edges(cfg.s0, (1..=cfg.s0).map(|i| ordered(i, i % cfg.s0 + 1)))?;
    let mut graphs = Vec::with_capacity(cfg.steps);
    graphs.push(g.clone());

    let mut targets = Vec::with_capacity(cfg.s);
    for _ in 1..cfg.steps {
        let n_before = g.n_nodes();
        let mut pool: Vec<usize> = g.edges().flat_map(|(i, j)| [i, j]).collect();
        let mut eligible = g.degrees();
        eligible.retain(|&d| d > 0);
        if eligible.len() < cfg.s {
            return Err(Error::param(
                "s",
                format!("only {} nodes have positive degree, need {}", eligible.len(), cfg.s),
            ));
        }

        g.grow_to(n_before + cfg.nodes_per_step);
        for new in n_before + 1..=n_before + cfg.nodes_per_step {
            draw_targets(&mut rng, &pool, cfg.s, &mut targets);
            for &old in &targets {
                g.add_edge(new, old)?;
                pool.push(old);
            }
        }

        if cfg.delete_per_step > 0 {
            let edges: Vec<_> = g.edges().collect();
            if cfg.delete_per_step > edges.len() {
                return Err(Error::DeletionExceedsEdges {
                    requested: cfg.delete_per_step,
                    available: edges.len(),
                });
            }
            let mut doomed: Vec<usize> = index::sample(&mut rng, edges.len(), cfg.delete_per_step).into_vec();
            doomed.sort_unstable();
            for k in doomed {
                let (i, j) = edges[k];
                g.remove_edge(i, j);
            }
        }
        graphs.push(g.clone());
    }
    GraphSeries::new(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_one_counts() {
        let s = generate_pa_series(&PaConfig::experiment_one(7)).unwrap();
        assert_eq!(s.len(), 30);
        assert_eq!(s.at(1).unwrap().n_nodes(), 50);
        assert_eq!(s.at(25).unwrap().n_nodes(), 170);
        assert_eq!(s.at(26).unwrap().n_nodes(), 175);
        for t in 1..=30 {
            let g = s.at(t).unwrap();
            assert_eq!(g.n_nodes(), 50 + 5 * (t - 1));
            assert_eq!(g.n_edges(), 50 + 50 * (t - 1));
        }
        for w in s.graphs().windows(2) {
            assert!(w[0].edge_set().is_subset(w[1].edge_set()));
        }
    }

    #[test]
    fn experiment_two_counts() {
        let s = generate_pa_series(&PaConfig::experiment_two(7)).unwrap();
        for t in 1..=30 {
            assert_eq!(s.at(t).unwrap().n_edges(), 50 + 40 * (t - 1));
        }
    }

    #[test]
    fn single_arrival_adds_s_edges() {
        let cfg = PaConfig {
            s0: 6,
            s: 3,
            nodes_per_step: 1,
            steps: 2,
            delete_per_step: 0,
            seed: 1,
        };
        let s = generate_pa_series(&cfg).unwrap();
        assert_eq!(s.at(2).unwrap().n_edges() - s.at(1).unwrap().n_edges(), 3);
        assert_eq!(s.at(2).unwrap().degree(7), 3);
    }

    #[test]
    fn deleting_more_than_available_fails() {
        let cfg = PaConfig {
            s0: 5,
            s: 1,
            nodes_per_step: 1,
            steps: 2,
            delete_per_step: 7,
            seed: 3,
        };
        assert!(matches!(
            generate_pa_series(&cfg),
            Err(Error::DeletionExceedsEdges { requested: 7, available: 6 })
        ));
    }

    #[test]
    fn invalid_configs() {
        let base = PaConfig::experiment_one(0);
        assert!(generate_pa_series(&PaConfig { s: 0, ..base.clone() }).is_err());
        assert!(generate_pa_series(&PaConfig { s0: 10, ..base.clone() }).is_err());
        assert!(generate_pa_series(&PaConfig { nodes_per_step: 0, ..base.clone() }).is_err());
        assert!(generate_pa_series(&PaConfig { steps: 0, ..base }).is_err());
    }

    #[test]
    fn same_seed_same_series() {
        let a = generate_pa_series(&PaConfig::experiment_two(42)).unwrap();
        let b = generate_pa_series(&PaConfig::experiment_two(42)).unwrap();
        let c = generate_pa_series(&PaConfig::experiment_two(43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn attachment_is_degree_proportional() {
        // node 1 holds twice the endpoints of node 2
        let pool = [1, 1, 1, 1, 2, 2, 3, 3, 4, 4];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut out = Vec::new();
        let mut hits = [0usize; 5];
        for _ in 0..40_000 {
            draw_targets(&mut rng, &pool, 1, &mut out);
            hits[out[0]] += 1;
        }
        let ratio = hits[1] as f64 / hits[2] as f64;
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn arrivals_enter_with_exactly_s_edges() {
        let s = generate_pa_series(&PaConfig::experiment_one(5)).unwrap();
        for t in 2..=s.len() {
            let g = s.at(t).unwrap();
            let first_new = s.at(t - 1).unwrap().n_nodes() + 1;
            for v in first_new..=g.n_nodes() {
                assert_eq!(g.degree(v), 10);
            }
        }
    }
}
