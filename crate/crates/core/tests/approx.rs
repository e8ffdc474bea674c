use std::sync::Arc;

use kz_coreset::approx::brute_force_assign;
use kz_coreset::{build_context, dz_seed, local_search_refine, set_cost, MetricBackend, PointSet};
use proptest::prelude::*;

fn plane(pts: Vec<Vec<f64>>, weights: Vec<f64>) -> PointSet<f64> {
    PointSet::with_weights(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap()), weights).unwrap()
}

fn instance() -> impl Strategy<Value = PointSet<f64>> {
    prop::collection::vec((prop::collection::vec(-50.0..50.0f64, 2), 0.5..3.0f64), 4..40)
        .prop_map(|v| {
            let (pts, w) = v.into_iter().unzip();
            plane(pts, w)
        })
}

proptest! {
    #[test]
    fn context_is_consistent(p in instance(), k in 1usize..4, z in 1u32..=3, seed: u64) {
        let a = dz_seed(&p, k, z, seed).unwrap();
        prop_assert_eq!(&a, &dz_seed(&p, k, z, seed).unwrap());
        let ctx = build_context(&p, &a, z).unwrap();
        for q in 0..p.len() {
            prop_assert_eq!(ctx.assign[q], brute_force_assign(&p, &ctx.solution, q).unwrap());
        }
        prop_assert_eq!(ctx.total_cost(), ctx.cluster_cost.iter().sum::<f64>());
        let exact = set_cost(&p, &a, z).unwrap();
        prop_assert!((ctx.total_cost() - exact).abs() <= 1e-9 * (1.0 + exact));
        for i in 0..ctx.k() {
            prop_assert!(ctx.cluster_size[i] > 0.0);
            prop_assert_eq!(ctx.delta[i] > 0.0, ctx.cluster_cost[i] > 0.0);
        }
    }

    #[test]
    fn refinement_never_hurts(p in instance(), k in 1usize..4, z in 1u32..=2, seed: u64) {
        let a = dz_seed(&p, k, z, seed).unwrap();
        let r = local_search_refine(&p, &a, z, 20).unwrap();
        prop_assert!(set_cost(&p, &r, z).unwrap() <= set_cost(&p, &a, z).unwrap());
        prop_assert_eq!(local_search_refine(&p, &a, z, 0).unwrap(), a);
    }
}

#[test]
fn duplicated_optimum_reaches_zero() {
    let locs = [[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]];
    let pts: Vec<Vec<f64>> = (0..30).map(|i| locs[i % 3].to_vec()).collect();
    let p = plane(pts, vec![1.0; 30]);
    for seed in 0..5 {
        let a = dz_seed(&p, 3, 2, seed).unwrap();
        let r = local_search_refine(&p, &a, 2, 10).unwrap();
        assert_eq!(set_cost(&p, &r, 2).unwrap(), 0.0);
    }
    assert!(dz_seed(&p, 4, 2, 0).unwrap_err().to_string().contains("distinct"));
}
