use num_rational::Ratio;
use proptest::prelude::*;
use std::collections::{HashMap, VecDeque};
use surface_census::metricgraph::*;

/// Subdivides every edge into unit steps of `1/density` and measures hop counts.
struct Subdivided {
    index: HashMap<Point, usize>,
    adj: Vec<Vec<usize>>,
}

impl Subdivided {
    fn new(g: &MetricGraph, density: i64) -> Self {
        let mut index: HashMap<Point, usize> = (0..g.num_vertices()).map(|v| (Point::Vertex(v), v)).collect();
        let mut adj = vec![Vec::new(); g.num_vertices()];
        for (e, &(u, v, l)) in g.edges().iter().enumerate() {
            let steps = (l * density).to_integer();
            let mut prev = u;
            for j in 1..steps {
                let id = adj.len();
                adj.push(Vec::new());
                index.insert(Point::Edge { edge: e, t: Ratio::new(j, density) }, id);
                adj[prev].push(id);
                adj[id].push(prev);
                prev = id;
            }
            adj[prev].push(v);
            adj[v].push(prev);
        }
        Subdivided { index, adj }
    }

    fn hops(&self, a: &Point, b: &Point) -> i64 {
        let (s, t) = (self.index[a], self.index[b]);
        let mut dist = vec![-1i64; self.adj.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] < 0 {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        dist[t]
    }
}

fn check_against_oracle(g: &MetricGraph, density: u32) {
    let net = g.sample_net(density).unwrap();
    let sub = Subdivided::new(g, density as i64);
    for a in net.iter().step_by(3) {
        for b in net.iter().step_by(2) {
            let d = distance(g, a, b).unwrap();
            assert_eq!(d, Ratio::new(sub.hops(a, b), density as i64), "{a:?} {b:?}");
        }
    }
}

#[test]
fn distances_match_subdivided_bfs_on_small_shapes() {
    for (name, nv, es) in small_graph_shapes() {
        let lengths: Vec<(usize, usize, i64)> = es.iter().enumerate().map(|(i, &(u, v))| (u, v, 2 + i as i64 % 3)).collect();
        let g = MetricGraph::from_integer_lengths(nv, &lengths).unwrap();
        check_against_oracle(&g, 2);
        assert!(!name.is_empty());
    }
}

proptest! {
    #[test]
    fn distances_match_oracle_on_random_theta_graphs(a in 1i64..6, b in 1i64..6, c in 1i64..6, loop_len in 1i64..5) {
        let g = MetricGraph::from_integer_lengths(2, &[(0, 1, a), (0, 1, b), (0, 1, c), (1, 1, loop_len)]).unwrap();
        check_against_oracle(&g, 2);
    }

    #[test]
    fn distance_is_symmetric_and_scales(a in 1i64..8, b in 1i64..8, num in 1i64..5, den in 1i64..4) {
        let g = MetricGraph::from_integer_lengths(2, &[(0, 1, a), (0, 1, b)]).unwrap();
        let lambda = Ratio::new(num, den);
        let h = g.scaled(lambda).unwrap();
        for x in g.sample_net(2).unwrap() {
            for y in [Point::Vertex(0), Point::Vertex(1)] {
                let d = distance(&g, &x, &y).unwrap();
                prop_assert_eq!(d, distance(&g, &y, &x).unwrap());
                let xs = match x {
                    Point::Vertex(v) => Point::Vertex(v),
                    Point::Edge { edge, t } => Point::Edge { edge, t: t * lambda },
                };
                prop_assert_eq!(distance(&h, &xs, &y).unwrap(), d * lambda);
            }
        }
    }
}

#[test]
fn invalid_graphs_and_points_are_rejected() {
    assert!(MetricGraph::from_integer_lengths(2, &[(0, 0, 1)]).is_err());
    assert!(MetricGraph::from_integer_lengths(1, &[(0, 0, 0)]).is_err());
    assert!(MetricGraph::from_integer_lengths(1, &[(0, 1, 1)]).is_err());
    let g = MetricGraph::from_integer_lengths(2, &[(0, 1, 3)]).unwrap();
    let bad = Point::Edge { edge: 0, t: Ratio::from_integer(3) };
    assert!(distance(&g, &bad, &Point::Vertex(0)).is_err());
    assert!(g.sample_net(0).is_err());
}

#[test]
fn threshold_formulas() {
    let p = thresholds(2.0, 2.0).unwrap();
    assert_eq!((p.k_prime(), p.c_prime(), p.s()), (2.0, 12.0, 4.0));
    assert_eq!(thresholds(2.0, 1.0).unwrap().u(), 336.0);
    let q = thresholds(1.05, 1.05).unwrap();
    assert!((q.u() - 29.9197).abs() < 1e-3, "{}", q.u());
    assert!(!q.boundary_regime());
    assert!(thresholds(1.0, 1.0).unwrap().boundary_regime());
    assert!(thresholds(0.5, 2.0).is_err());
    assert!(thresholds(f64::NAN, 2.0).is_err());
}

#[test]
fn vertex_bound_stays_below_half_the_edge_threshold() {
    for i in 0..20 {
        for j in 0..20 {
            let (k, c) = (1.0 + i as f64 * 0.25, 1.0 + j as f64 * 0.25);
            let p = thresholds(k, c).unwrap();
            assert!(p.t() < p.u() / 2.0, "k = {k}, c = {c}");
            assert!(p.t_prime() < p.u() / 2.0);
            assert!((p.t() - 3.0 * k * k * (k * k + 2.0) * c).abs() < 1e-9);
        }
    }
}

#[test]
fn identity_witness_verifies() {
    let g = MetricGraph::from_integer_lengths(2, &[(0, 1, 30), (0, 1, 31), (0, 0, 32)]).unwrap();
    let net = g.sample_net(2).unwrap();
    let w = QiWitness { domain: net.clone(), image: net.clone() };
    assert!(verify_map(&g, &g, &w, 1.05, 1.05, &net).unwrap());
}

#[test]
fn scaled_witness_needs_a_large_enough_constant() {
    let g = MetricGraph::from_integer_lengths(1, &[(0, 0, 6), (0, 0, 7)]).unwrap();
    let h = g.scaled(Ratio::from_integer(2)).unwrap();
    let net = g.sample_net(2).unwrap();
    let image: Vec<Point> = net
        .iter()
        .map(|p| match *p {
            Point::Vertex(v) => Point::Vertex(v),
            Point::Edge { edge, t } => Point::Edge { edge, t: t * 2 },
        })
        .collect();
    let w = QiWitness { domain: net, image };
    let targets = h.sample_net(2).unwrap();
    assert!(verify_map(&g, &h, &w, 2.0, 1.0, &targets).unwrap());
    assert!(!verify_map(&g, &h, &w, 1.05, 1.05, &targets).unwrap());
    let short = QiWitness { domain: w.domain[..2].to_vec(), image: w.image[..1].to_vec() };
    assert!(verify_map(&g, &h, &short, 2.0, 1.0, &targets).is_err());
}

#[test]
fn isomorphism_ignores_lengths_and_labels() {
    let theta = MetricGraph::from_integer_lengths(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 3)]).unwrap();
    let relabeled = theta.relabeled(&[1, 0], &[2, 0, 1]).unwrap();
    assert!(is_isomorphic(&theta, &relabeled).unwrap());
    let handcuff = MetricGraph::from_integer_lengths(2, &[(0, 0, 1), (0, 1, 2), (1, 1, 3)]).unwrap();
    assert!(!is_isomorphic(&theta, &handcuff).unwrap());
    assert_eq!(canonical_code(&theta).unwrap(), canonical_code(&relabeled).unwrap());
    let shapes = small_graph_shapes();
    for (i, a) in shapes.iter().enumerate() {
        for (j, b) in shapes.iter().enumerate() {
            let ga = MetricGraph::from_integer_lengths(a.1, &a.2.iter().map(|&(u, v)| (u, v, 1)).collect::<Vec<_>>()).unwrap();
            let gb = MetricGraph::from_integer_lengths(b.1, &b.2.iter().map(|&(u, v)| (u, v, 1)).collect::<Vec<_>>()).unwrap();
            assert_eq!(is_isomorphic(&ga, &gb).unwrap(), i == j);
        }
    }
}

#[test]
fn json_round_trip() {
    let g = MetricGraph::new(2, vec![(0, 1, Ratio::new(7, 2)), (1, 1, Ratio::from_integer(3))]).unwrap();
    let text = serde_json::to_string(&g).unwrap();
    let back: MetricGraph = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    assert!(serde_json::from_str::<MetricGraph>(r#"{"vertices":1,"edges":[[0,0,[1,0]]]}"#).is_err());
}
