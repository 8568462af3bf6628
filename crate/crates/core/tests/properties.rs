mod oracle;

use std::collections::BTreeMap;

use netfba::bounds::{count_upper_bound, enumerate_solutions};
use netfba::coefficients::{existing_edge_weights, new_edge_weight};
use netfba::forecast::upper_bound;
use netfba::graph::{column_to_edge, edge_column_index, top_k_nodes};
use netfba::io::{graph_from_json, graph_to_json};
use netfba::{
    build_candidate, compute_coefficients, density_error, edge_error, greedy, node_error, solve_exact,
    solve_heuristic, union_graphs, Edge, ForecastPoint, Forecaster, Graph, GraphSeries, Problem, Scheme,
    TrendForecaster, UnivariateSeries,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((1..=n, 1..=n), 0..3 * n).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(i, j)| i != j)).unwrap()
        })
    })
}

/// Growing series: each snapshot keeps a random subset of the previous edges
/// and adds random new ones, on a non-decreasing node count.
fn series_strategy() -> impl Strategy<Value = GraphSeries> {
    (3usize..8, 2usize..6, any::<u64>()).prop_map(|(n0, len, seed)| {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut graphs = Vec::new();
        let mut g = Graph::new(n0);
        for _ in 0..len {
            let mut next = Graph::new(g.n_nodes() + rng.gen_range(0..3));
            for e in g.edges() {
                if rng.gen_bool(0.8) {
                    next.add_edge(e.0, e.1).unwrap();
                }
            }
            let n = next.n_nodes();
            for _ in 0..n {
                let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                if i != j {
                    next.add_edge(i, j).unwrap();
                }
            }
            graphs.push(next.clone());
            g = next;
        }
        GraphSeries::new(graphs).unwrap()
    })
}

fn instance_strategy() -> impl Strategy<Value = Problem> {
    (3usize..8, 0usize..16, 0usize..4, any::<bool>(), any::<u64>()).prop_map(|(n, m, b, f2, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        oracle::random_instance(&mut rng, n, m, b, f2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn column_index_round_trips(n in 2usize..40, a in 1usize..40, b in 1usize..40) {
        prop_assume!(a != b && a <= n && b <= n);
        let (i, j) = (a.min(b), a.max(b));
        let k = edge_column_index(i, j, n).unwrap();
        prop_assert!(k >= 1 && k <= n * (n - 1) / 2);
        prop_assert_eq!(column_to_edge(k, n).unwrap(), (i, j));
    }

    #[test]
    fn union_is_order_insensitive_and_idempotent(s in series_strategy()) {
        let u = union_graphs(&s);
        let n = s.last().n_nodes();
        let mut padded: Vec<Graph> = s.graphs().to_vec();
        for g in &mut padded {
            g.grow_to(n);
        }
        padded.reverse();
        let rev = GraphSeries::new(padded).unwrap();
        let ur = union_graphs(&rev);
        prop_assert_eq!(ur.edge_set(), u.edge_set());
        let twice = GraphSeries::new(vec![u.clone(), u.clone()]).unwrap();
        prop_assert_eq!(union_graphs(&twice), u.clone());
        for g in s.graphs() {
            prop_assert!(g.edge_set().is_subset(u.edge_set()));
        }
    }

    #[test]
    fn new_nodes_join_every_kappa_member(s in series_strategy(), n_new in 0usize..4, k in 1usize..6) {
        prop_assume!(s.graphs().iter().any(|g| g.n_edges() > 0));
        let c = build_candidate(&s, n_new, k).unwrap();
        let g = c.to_graph();
        for v in c.n_existing() + 1..=c.n_total() {
            prop_assert_eq!(g.degree(v), c.kappa().len());
        }
        let entries = c.incidence_entries();
        let mut col = BTreeMap::new();
        let mut row = vec![0usize; c.n_total()];
        for (r, k) in entries {
            *col.entry(k).or_insert(0) += 1;
            row[r - 1] += 1;
        }
        prop_assert!(col.values().all(|&x| x == 2));
        prop_assert_eq!(row, g.degrees());
    }

    #[test]
    fn kappa_is_sorted_by_degree(g in graph_strategy(12), k in 1usize..12) {
        let kappa = top_k_nodes(&g, k).unwrap();
        prop_assert_eq!(kappa.len(), k.min(g.n_nodes()));
        for w in kappa.windows(2) {
            let (a, b) = (g.degree(w[0]), g.degree(w[1]));
            prop_assert!(a > b || (a == b && w[0] < w[1]));
        }
        let min_in = kappa.iter().map(|&v| g.degree(v)).min().unwrap_or(0);
        for v in (1..=g.n_nodes()).filter(|v| !kappa.contains(v)) {
            prop_assert!(g.degree(v) <= min_in);
        }
    }

    #[test]
    fn linear_series_are_reproduced(a in 0.0f64..100.0, slope in 0.0f64..10.0, len in 3usize..30, h in 1usize..6) {
        let y: Vec<f64> = (0..len).map(|t| a + slope * t as f64).collect();
        let f = TrendForecaster::default().forecast(&UnivariateSeries::new(1, y).unwrap(), h).unwrap();
        let expected = a + slope * (len - 1 + h) as f64;
        prop_assert!((f.point() - expected).abs() <= 1e-9 * (1.0 + expected));
        prop_assert!(f.std_err() <= 1e-9 * (1.0 + expected));
    }

    #[test]
    fn forecasts_are_finite_and_nonnegative(y in proptest::collection::vec(0.0f64..50.0, 1..25), h in 1usize..6) {
        let s = UnivariateSeries::new(1, y).unwrap();
        let f = TrendForecaster::default().forecast(&s, h).unwrap();
        prop_assert!(f.point().is_finite() && f.point() >= 0.0);
        prop_assert!(f.quantile(0.9).is_finite() && f.quantile(0.1) >= 0.0);
        prop_assert_eq!(f, TrendForecaster::default().forecast(&s, h).unwrap());
        prop_assert_eq!(f.quantile(0.5), f.point());
    }

    #[test]
    fn upper_bound_monotone_in_level_and_horizon(
        y in proptest::collection::vec(0.0f64..50.0, 3..25),
        u1 in 0.01f64..0.99,
        u2 in 0.01f64..0.99,
        h in 1usize..5,
    ) {
        let s = UnivariateSeries::new(1, y).unwrap();
        let (lo, hi) = (u1.min(u2), u1.max(u2));
        let f = TrendForecaster::default().forecast(&s, h).unwrap();
        prop_assert!(upper_bound(&f, lo).unwrap() <= upper_bound(&f, hi).unwrap());
        // spread grows with the horizon
        let g: ForecastPoint<f64> = TrendForecaster::default().forecast(&s, h + 1).unwrap();
        prop_assert!(g.std_err() >= f.std_err());
        let centred = |f: &ForecastPoint<f64>| upper_bound(f, hi).unwrap() - f.point();
        if hi >= 0.5 && f.quantile(1.0 - hi) > 0.0 {
            prop_assert!(centred(&g) >= centred(&f) - 1e-12);
        }
    }

    #[test]
    fn coefficients_lie_in_unit_interval(s in series_strategy(), n_new in 0usize..3, k in 1usize..4) {
        prop_assume!(s.graphs().iter().any(|g| g.n_edges() > 0));
        let c = build_candidate(&s, n_new, k).unwrap();
        for scheme in Scheme::ALL {
            let coeffs = compute_coefficients::<f64>(scheme, &s, &c).unwrap();
            prop_assert_eq!(coeffs.len(), c.n_edges());
            prop_assert!(coeffs.iter().all(|(_, w)| (0.0..=1.0).contains(&w)));
            if matches!(scheme, Scheme::C3 | Scheme::C4 | Scheme::C5) {
                let existing = existing_edge_weights::<f64>(scheme, &s, c.base());
                prop_assert!(existing.values().any(|&w| w == 1.0));
            }
        }
    }

    #[test]
    fn weights_are_relabeling_equivariant(s in series_strategy(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let n = s.last().n_nodes();
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabel = |g: &Graph| {
            let mut h = Graph::new(n);
            for (i, j) in g.edges() {
                h.add_edge(perm[i - 1], perm[j - 1]).unwrap();
            }
            h
        };
        let padded: Vec<Graph> = s.graphs().iter().map(|g| { let mut g = g.clone(); g.grow_to(n); g }).collect();
        let s = GraphSeries::new(padded).unwrap();
        let moved = GraphSeries::new(s.graphs().iter().map(relabel).collect()).unwrap();
        for scheme in [Scheme::C3, Scheme::C4, Scheme::C5] {
            let a = existing_edge_weights::<f64>(scheme, &s, &union_graphs(&s));
            let b = existing_edge_weights::<f64>(scheme, &moved, &union_graphs(&moved));
            for ((i, j), w) in a {
                let e: Edge = netfba::graph::ordered(perm[i - 1], perm[j - 1]);
                prop_assert_eq!(b[&e], w);
            }
        }
    }

    #[test]
    fn new_edge_weight_monotone_in_degree(
        mut weights in proptest::collection::vec(0.0f64..=1.0, 0..20),
        degrees in proptest::collection::vec(1usize..30, 2..8),
    ) {
        weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let kappa: Vec<usize> = (1..=degrees.len()).collect();
        let mut by_degree = kappa.clone();
        by_degree.sort_by_key(|&v| degrees[v - 1]);
        let w: Vec<f64> = by_degree
            .iter()
            .map(|&v| new_edge_weight(&weights, &degrees, &kappa, v).unwrap())
            .collect();
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn exact_matches_brute_force_and_dominates_heuristic(p in instance_strategy()) {
        let exact = solve_exact(&p, 30).unwrap();
        let (best, _) = oracle::brute_force(&p);
        prop_assert_eq!(exact.objective, best);
        prop_assert!(oracle::feasible(&p, &exact.chosen));
        let heur = solve_heuristic(&p);
        prop_assert!(oracle::feasible(&p, &heur.chosen));
        prop_assert!(heur.objective <= exact.objective);
        prop_assert!(heur.objective >= greedy(&p).objective);
    }

    #[test]
    fn slack_total_bound_reproduces_f1(p in instance_strategy()) {
        let f1 = p.with_total_bound(None);
        let slack = p.with_total_bound(Some(p.degree_bound().iter().sum()));
        prop_assert_eq!(solve_exact(&f1, 30).unwrap().chosen, solve_exact(&slack, 30).unwrap().chosen);
        prop_assert_eq!(solve_heuristic(&f1).chosen, solve_heuristic(&slack).chosen);
    }

    #[test]
    fn scaling_weights_keeps_the_solution(p in instance_strategy(), shift in 1u32..4) {
        let factor = 0.5f64.powi(shift as i32);
        let scaled = Problem::new(
            p.n(),
            p.variables().iter().map(|v| (v.edge, v.weight * factor)),
            p.degree_bound().to_vec(),
            p.total_bound(),
        )
        .unwrap();
        prop_assert_eq!(solve_exact(&p, 30).unwrap().chosen, solve_exact(&scaled, 30).unwrap().chosen);
    }

    #[test]
    fn uniform_slack_greedy_is_optimal(n in 3usize..7, m in 0usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = oracle::random_instance(&mut rng, n, m, 0, false);
        let p = Problem::new(p.n(), p.variables().iter().map(|v| (v.edge, 0.5)), vec![n - 1; n], None).unwrap();
        prop_assert_eq!(solve_heuristic(&p).objective, solve_exact(&p, 30).unwrap().objective);
    }

    #[test]
    fn upper_bound_dominates_count(p in instance_strategy()) {
        let count = enumerate_solutions(&p).unwrap();
        prop_assert_eq!(count, oracle::brute_force(&p).1);
        prop_assert!(num_bigint::BigUint::from(count) <= count_upper_bound(&p));
    }

    #[test]
    fn upper_bound_monotone_in_each_bound(p in instance_strategy(), node in 0usize..8) {
        prop_assume!(node < p.n());
        let mut looser = p.degree_bound().to_vec();
        looser[node] += 1;
        let q = Problem::new(p.n(), p.variables().iter().map(|v| (v.edge, v.weight)), looser, None).unwrap();
        prop_assert!(count_upper_bound(&p) <= count_upper_bound(&q));
    }

    #[test]
    fn metrics_vanish_on_identical_graphs(g in graph_strategy(10), h in graph_strategy(10)) {
        prop_assert_eq!(node_error::<f64>(&g, &g).unwrap(), 0.0);
        prop_assert_eq!(density_error::<f64>(&g, &g).unwrap(), 0.0);
        if g.n_edges() > 0 {
            prop_assert_eq!(edge_error::<f64>(&g, &g).unwrap(), 0.0);
        }
        let d = density_error::<f64>(&g, &h).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!(node_error::<f64>(&g, &h).unwrap() >= 0.0);
    }

    #[test]
    fn graph_json_round_trips(g in graph_strategy(15)) {
        let text = graph_to_json(&g, None).unwrap();
        prop_assert_eq!(graph_from_json(&text).unwrap().0, g);
    }

    #[test]
    fn later_single_appearance_weighs_more(len in 2usize..10, a in 1usize..10, b in 1usize..10) {
        prop_assume!(a < b && b <= len);
        // edge (1,2) appears only at time a, edge (3,4) only at time b
        let graphs: Vec<Graph> = (1..=len)
            .map(|t| {
                let mut g = Graph::new(4);
                if t == a { g.add_edge(1, 2).unwrap(); }
                if t == b { g.add_edge(3, 4).unwrap(); }
                g
            })
            .collect();
        let s = GraphSeries::new(graphs).unwrap();
        let w = existing_edge_weights::<f64>(Scheme::C5, &s, &union_graphs(&s));
        prop_assert!(w[&(1, 2)] < w[&(3, 4)]);
    }

    #[test]
    fn ingestion_is_deterministic(events in proptest::collection::vec((0u8..6, 0u8..6, 0i64..5 * 86_400), 1..40)) {
        use netfba::io::{ingest_str, WindowMode, WindowSpec};
        let text: String = events
            .iter()
            .filter(|(u, v, _)| u != v)
            .map(|(u, v, t)| format!("n{u} n{v} {t}\n"))
            .collect();
        prop_assume!(!text.is_empty());
        for mode in [WindowMode::Day, WindowMode::FixedCount(3)] {
            let spec = WindowSpec::new(mode);
            let a = ingest_str(&text, &spec).unwrap();
            prop_assert_eq!(&a, &ingest_str(&text, &spec).unwrap());
            prop_assert_eq!(a.ids.len(), a.series.last().n_nodes());
        }
    }
}
