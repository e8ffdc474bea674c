use std::sync::Arc;

use kz_coreset::metric::{holds_with_tolerance, powered_cost_slack, powered_triangle_slack};
use kz_coreset::{Center, Error, MetricBackend, PointSet, Solution};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-100.0..100.0f64, 3), 2..n)
}

fn matrix_from(points: &[Vec<f64>]) -> MetricBackend<f64> {
    let n = points.len();
    let e = MetricBackend::euclidean(points, 2.0).unwrap();
    let data = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| e.dist(i, j).unwrap()).collect();
    MetricBackend::matrix(n, data).unwrap()
}

/// Shortest path by enumerating every simple path.
fn brute_path(n: usize, edges: &[(usize, usize, f64)], a: usize, b: usize) -> f64 {
    fn walk(v: usize, b: usize, len: f64, seen: &mut Vec<bool>, adj: &[Vec<(usize, f64)>], best: &mut f64) {
        if v == b {
            *best = best.min(len);
            return;
        }
        for &(u, w) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                walk(u, b, len + w, seen, adj, best);
                seen[u] = false;
            }
        }
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut best = f64::INFINITY;
    let mut seen = vec![false; n];
    seen[a] = true;
    walk(a, b, 0.0, &mut seen, &adj, &mut best);
    best
}

proptest! {
    #[test]
    fn euclidean_and_matrix_axioms(pts in coords(12), p in prop::sample::select(vec![1.0, 1.5, 2.0])) {
        let e = MetricBackend::euclidean(&pts, p).unwrap();
        let m = matrix_from(&pts);
        let n = pts.len();
        for b in [&e, &m] {
            for i in 0..n {
                prop_assert_eq!(b.dist(i, i).unwrap(), 0.0);
                for j in 0..n {
                    prop_assert_eq!(b.dist(i, j).unwrap(), b.dist(j, i).unwrap());
                    for k in 0..n {
                        let (ij, ik, kj) = (b.dist(i, j).unwrap(), b.dist(i, k).unwrap(), b.dist(k, j).unwrap());
                        prop_assert!(ij <= ik + kj + 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn graph_matches_path_enumeration(
        n in 2usize..8,
        raw in prop::collection::vec((0usize..8, 0usize..8, 0.1..10.0f64), 1..16),
    ) {
        let edges: Vec<(usize, usize, f64)> = raw.into_iter().map(|(u, v, w)| (u % n, v % n, w)).collect();
        let g = MetricBackend::graph(n, &edges).unwrap();
        for a in 0..n {
            for b in 0..n {
                let expect = if a == b { 0.0 } else { brute_path(n, &edges, a, b) };
                match g.dist(a, b) {
                    Ok(d) => {
                        prop_assert!((d - expect).abs() <= 1e-9 * (1.0 + expect));
                        prop_assert_eq!(d, g.dist(b, a).unwrap());
                    }
                    Err(Error::Disconnected(..)) => prop_assert!(expect.is_infinite()),
                    Err(e) => prop_assert!(false, "unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn power_inequalities_hold(pts in coords(6), z in 1u32..=4, eps in prop::sample::select(vec![0.1, 0.5, 1.0])) {
        let e = MetricBackend::euclidean(&pts, 2.0).unwrap();
        let n = pts.len();
        let s = Solution::from_sites([n - 1]).unwrap();
        for a in 0..n {
            for b in 0..n {
                let (l, r) = powered_cost_slack(&e, a, b, &s, z, eps).unwrap();
                prop_assert!(holds_with_tolerance(l, r));
                for c in 0..n {
                    let (l, r) = powered_triangle_slack(&e, a, b, c, z, eps).unwrap();
                    prop_assert!(holds_with_tolerance(l, r));
                }
            }
        }
    }
}

#[test]
fn matrix_rejections() {
    assert!(MetricBackend::matrix(2, vec![1.0, 2.0, 2.0, 0.0]).is_err());
    assert!(MetricBackend::matrix(2, vec![0.0, 2.0, 2.5, 0.0]).is_err());
    assert!(MetricBackend::matrix(3, vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]).is_err());
    assert!(MetricBackend::matrix(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
}

#[test]
fn weighted_points_and_centers() {
    let b = Arc::new(MetricBackend::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0]], 2.0).unwrap());
    let p = PointSet::with_weights(Arc::clone(&b), vec![1.0, 2.0]).unwrap();
    let s = Solution::new(vec![Center::Coord(vec![0.0, 0.0])]).unwrap();
    assert_eq!(kz_coreset::set_cost(&p, &s, 1).unwrap(), 10.0);
    assert_eq!(kz_coreset::set_cost(&p, &s, 2).unwrap(), 50.0);
    assert!(PointSet::with_weights(Arc::clone(&b), vec![1.0, 0.0]).is_err());
    assert!(PointSet::new(Arc::clone(&b), vec![0, 2], vec![1.0, 1.0]).is_err());
    assert!(Solution::<f64>::new(vec![]).is_err());
    let bad = Solution::new(vec![Center::Coord(vec![0.0])]).unwrap();
    assert!(kz_coreset::set_cost(&p, &bad, 1).is_err());
}

#[test]
fn single_precision_backend() {
    let b = Arc::new(MetricBackend::<f32>::euclidean(&[vec![0.0, 0.0], vec![3.0, 4.0]], 2.0).unwrap());
    assert_eq!(b.dist(0, 1).unwrap(), 5.0f32);
    let p: kz_coreset::PointSetF32 = PointSet::unweighted(b).unwrap();
    assert_eq!(kz_coreset::set_cost(&p, &Solution::from_sites([0]).unwrap(), 2).unwrap(), 25.0f32);
}

#[test]
fn disconnected_clients_rejected() {
    let g = Arc::new(MetricBackend::graph(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap());
    assert!(PointSet::unweighted(Arc::clone(&g)).is_err());
    assert!(PointSet::new(g, vec![0, 1], vec![1.0, 1.0]).is_ok());
}
