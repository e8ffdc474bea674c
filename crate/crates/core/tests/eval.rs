use std::sync::Arc;

use kz_coreset::eval::{
    distortion, evaluate, gaussian_mixture, gen_solutions, solution_panel, sweep, sweep_csv, verify_event_e,
    verify_preprocess, SolutionKind,
};
use kz_coreset::pipeline::{build_detailed, identity_coreset};
use kz_coreset::{build_context, dz_seed, BandClass, BuildConfig, GroupEntry, GroupId, MetricBackend, PointSet, Solution};
use proptest::prelude::*;

fn mixture(n: usize, seed: u64) -> PointSet<f64> {
    let pts = gaussian_mixture::<f64>(n, 4, 2, seed);
    PointSet::unweighted(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn input_as_coreset_is_exact(seed: u64, z in 1u32..=3) {
        let p = mixture(200, seed % 5);
        let c = identity_coreset(&p, 3, z);
        for s in gen_solutions(&p, 3, z, SolutionKind::DzSampled, 5, seed).unwrap() {
            prop_assert_eq!(distortion(&p, &c, &s, z).unwrap(), 0.0);
        }
    }
}

#[test]
fn reports_are_deterministic_and_serialize() {
    let p = mixture(2000, 1);
    let ctx = build_context(&p, &dz_seed(&p, 4, 2, 5).unwrap(), 2).unwrap();
    let panel = solution_panel(&p, &ctx, 4, 10, 6).unwrap();
    let c = kz_coreset::build(&p, &BuildConfig::new(4, 2, 0.2, 100, 100, 0)).unwrap();
    let a = evaluate(&p, &c, &panel).unwrap();
    let b = evaluate(&p, &c, &panel).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.summary.count, 40);
    assert!(a.summary.max > 0.0);
    let csv = a.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 41);
    assert!(csv.starts_with("solution,fingerprint,exact,coreset,relative,absolute\n"));
}

#[test]
fn zero_cost_solutions_go_to_absolute_channel() {
    let p = PointSet::unweighted(Arc::new(MetricBackend::euclidean(&[vec![0.0], vec![3.0]], 2.0).unwrap())).unwrap();
    let c = identity_coreset(&p, 2, 1);
    let r = evaluate(&p, &c, &[Solution::from_sites([0, 1]).unwrap()]).unwrap();
    assert_eq!((r.zero_cost, r.summary.count), (1, 0));
    assert!(r.per_solution[0].relative.is_none());
}

#[test]
fn sweep_trend_on_reference_mixture() {
    let p = mixture(5000, 2);
    let ctx = build_context(&p, &dz_seed(&p, 4, 2, 77).unwrap(), 2).unwrap();
    let panel = solution_panel(&p, &ctx, 4, 15, 1).unwrap();
    let base = BuildConfig::new(4, 2, 0.2, 1, 1, 0);
    let deltas = [25, 50, 100, 200, 400];
    let seeds: Vec<u64> = (0..4).collect();
    let rows = sweep(&p, &base, &deltas, &seeds, &panel).unwrap();
    assert_eq!(rows.len(), 20);
    let medians: Vec<f64> = deltas
        .iter()
        .map(|&d| rows.iter().filter(|r| r.delta == d).map(|r| r.median).sum::<f64>() / seeds.len() as f64)
        .collect();
    let good = medians.windows(2).filter(|w| w[1] <= w[0]).count();
    assert!(good as f64 >= 0.8 * (medians.len() - 1) as f64, "{medians:?}");
    assert_eq!(sweep_csv(&rows).unwrap().lines().count(), 21);
}

#[test]
fn preprocess_bound_and_event_coverage() {
    let p = mixture(4000, 3);
    let (_, construction) = build_detailed(&p, &BuildConfig::new(4, 2, 0.2, 100, 100, 1)).unwrap();
    let panel = gen_solutions(&p, 4, 2, SolutionKind::RandomPoints, 100, 2).unwrap();
    let r = verify_preprocess(&p, &construction, &panel).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.max_ratio <= r.bound);

    // the whole group is one restriction: a single draw deposits exactly its size
    let ctx = &construction.context;
    let cluster0: Vec<usize> = (0..p.len()).filter(|&q| ctx.assign[q] == 0 && ctx.cost_to_a[q] > 0.0).collect();
    let g = GroupEntry::from_members(GroupId::Main { ring: 0, band: BandClass::Band(1) }, false, &cluster0, &p, ctx);
    assert_eq!(verify_event_e(&p, ctx, &g, 1, 50, 1e-9, 0).unwrap(), 1.0);
    assert_eq!(verify_event_e(&p, ctx, &g, cluster0.len(), 5, 0.0, 0).unwrap(), 1.0);
}
