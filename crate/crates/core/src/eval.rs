//! Distortion measurement, solution panels, δ-sweeps, and empirical checks of
//! the preprocessing bound and of restriction-mass coverage.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{build_context, dz_seed, ClusteringContext};
use crate::decompose::{ring_index, GroupEntry, RingIndex};
use crate::error::{Error, Result};
use crate::metric::{point_cost, set_cost, Center, PointSet, Solution};
use crate::pipeline::{build, BuildConfig, Construction, Coreset};
use crate::rng::{self, child_seed};
use crate::sampler::{group_sample, restriction_mass};
use crate::scalar::Scalar;

/// `|cost(P, S) - cost(Ω, S)| / cost(P, S)`; a domain error when the exact
/// cost is zero.
pub fn distortion<T: Scalar>(points: &PointSet<T>, coreset: &Coreset<T>, solution: &Solution<T>, z: u32) -> Result<T> {
    let exact = set_cost(points, solution, z)?;
    let approx = coreset.cost(points.backend(), solution, z)?;
    if !(exact > T::zero()) {
        return Err(Error::Domain("relative error undefined for a zero-cost solution".into()));
    }
    Ok((exact - approx).abs() / exact)
}

/// `|cost(P, S) - cost(Ω, S)|`.
pub fn absolute_error<T: Scalar>(points: &PointSet<T>, coreset: &Coreset<T>, solution: &Solution<T>, z: u32) -> Result<T> {
    let exact = set_cost(points, solution, z)?;
    Ok((exact - coreset.cost(points.backend(), solution, z)?).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionKind<T> {
    /// `k` client sites drawn uniformly with replacement.
    RandomPoints,
    /// Independent D^z seedings.
    DzSampled,
    /// Centers of the reference solution moved by at most `radius`.
    PerturbedSeed { radius: T },
    /// Clients of the reference solution sitting closest to ring boundaries
    /// `2^j Δ_i`.
    NearClusterAdversarial,
}

/// Solutions of one kind around the D^z seeding of `points` with `seed`.
pub fn gen_solutions<T: Scalar>(
    points: &PointSet<T>,
    k: usize,
    z: u32,
    kind: SolutionKind<T>,
    count: usize,
    seed: u64,
) -> Result<Vec<Solution<T>>> {
    let a = dz_seed(points, k, z, seed)?;
    let ctx = build_context(points, &a, z)?;
    gen_solutions_around(points, &ctx, k, kind, count, seed)
}

/// Solutions of one kind; the perturbed and adversarial kinds work around
/// `ctx.solution`.
pub fn gen_solutions_around<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    k: usize,
    kind: SolutionKind<T>,
    count: usize,
    seed: u64,
) -> Result<Vec<Solution<T>>> {
    if count == 0 {
        return Err(Error::Input("solution count must be at least 1".into()));
    }
    if k == 0 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    let z = ctx.z;
    let n = points.len();
    match kind {
        SolutionKind::RandomPoints => {
            let mut rng = rng::stream(seed, 1);
            (0..count)
                .map(|_| Solution::from_sites((0..k).map(|_| points.site(rng.random_range(0..n)))))
                .collect()
        }
        SolutionKind::DzSampled => {
            (0..count as u64).into_par_iter().map(|i| dz_seed(points, k, z, child_seed(seed, i))).collect()
        }
        SolutionKind::PerturbedSeed { radius } => perturbed(points, ctx, radius, count, seed),
        SolutionKind::NearClusterAdversarial => adversarial(points, ctx, k, count, seed),
    }
}

fn perturbed<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    radius: T,
    count: usize,
    seed: u64,
) -> Result<Vec<Solution<T>>> {
    if !(radius >= T::zero()) {
        return Err(Error::Input("perturbation radius must be non-negative".into()));
    }
    if radius == T::zero() {
        return Ok(vec![ctx.solution.clone(); count]);
    }
    let backend = points.backend();
    let mut rng = rng::stream(seed, 2);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut centers = Vec::with_capacity(ctx.k());
        for c in &ctx.solution.centers {
            let moved = match (backend.as_euclidean(), c) {
                (Some(e), Center::Site(s)) => {
                    // uniform direction, radius scaled by a uniform factor
                    let normal = Normal::new(0.0, 1.0).expect("unit normal");
                    let dir: Vec<f64> = (0..e.dim()).map(|_| normal.sample(&mut rng)).collect();
                    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                    let r = radius.as_f64() * rng.random::<f64>();
                    Center::Coord(e.point(*s).iter().zip(&dir).map(|(&x, &u)| x + T::lit(r * u / len)).collect())
                }
                _ => {
                    let near: Vec<usize> = points
                        .sites()
                        .iter()
                        .copied()
                        .filter(|&s| backend.dist_to(s, c).is_ok_and(|d| d <= radius))
                        .collect();
                    if near.is_empty() {
                        c.clone()
                    } else {
                        Center::Site(near[rng.random_range(0..near.len())])
                    }
                }
            };
            centers.push(moved);
        }
        out.push(Solution::new(centers)?);
    }
    Ok(out)
}

fn adversarial<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Solution<T>>> {
    // per cluster: occupied ring indices and their members
    let members = ctx.members();
    let mut rings: Vec<Vec<(i32, Vec<usize>)>> = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        let mut by_ring: std::collections::BTreeMap<i32, Vec<usize>> = Default::default();
        for &p in m {
            let j = match ring_index(ctx.cost_to_a[p], ctx.delta[i])? {
                RingIndex::Inner => i32::MIN,
                RingIndex::Ring(j) => j,
            };
            by_ring.entry(j).or_default().push(p);
        }
        rings.push(by_ring.into_iter().collect());
    }
    let mut rng = rng::stream(seed, 3);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut sites = Vec::with_capacity(k);
        for _ in 0..k {
            let i = rng.random_range(0..rings.len());
            let (j, ring) = &rings[i][rng.random_range(0..rings[i].len())];
            let p = if *j == i32::MIN {
                ring[rng.random_range(0..ring.len())]
            } else {
                // member nearest to a boundary of its ring, on the log scale
                let lower = T::lit(2f64.powi(*j)) * ctx.delta[i];
                let upper = lower + lower;
                *ring
                    .iter()
                    .min_by(|&&a, &&b| {
                        let edge = |p: usize| {
                            let c = ctx.cost_to_a[p];
                            (c / lower).ln().abs().min((upper / c).ln().abs()).as_f64()
                        };
                        edge(a).total_cmp(&edge(b)).then(a.cmp(&b))
                    })
                    .expect("non-empty ring")
            };
            sites.push(points.site(p));
        }
        out.push(Solution::from_sites(sites)?);
    }
    Ok(out)
}

/// Fixed panel with `per_kind` solutions of each kind, in kind order.
/// The perturbation radius is the root-mean cost `(cost(P, A) / w(P))^(1/z)`.
pub fn solution_panel<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    k: usize,
    per_kind: usize,
    seed: u64,
) -> Result<Vec<Solution<T>>> {
    let radius = (ctx.total_cost() / points.total_weight()).powf(T::one() / T::from_count(ctx.z as usize));
    let kinds = [
        SolutionKind::RandomPoints,
        SolutionKind::DzSampled,
        SolutionKind::PerturbedSeed { radius },
        SolutionKind::NearClusterAdversarial,
    ];
    let mut out = Vec::with_capacity(4 * per_kind);
    for (i, kind) in kinds.into_iter().enumerate() {
        out.extend(gen_solutions_around(points, ctx, k, kind, per_kind, child_seed(seed, i as u64))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionEval<T> {
    pub fingerprint: u64,
    pub exact: T,
    pub coreset: T,
    /// `None` when the exact cost is zero.
    pub relative: Option<T>,
    pub absolute: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary<T> {
    pub count: usize,
    pub max: T,
    pub mean: T,
    pub median: T,
    pub p95: T,
}

impl<T: Scalar> Summary<T> {
    /// Median averages the two middle values; p95 is the nearest-rank
    /// `ceil(0.95 n)`-th smallest value. All zero on an empty input.
    pub fn of(values: &[T]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { count: 0, max: T::zero(), mean: T::zero(), median: T::zero(), p95: T::zero() };
        }
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
        let sum = v.iter().fold(T::zero(), |acc, &x| acc + x);
        let median = if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / T::lit(2.0) };
        let rank = ((0.95 * n as f64).ceil() as usize).clamp(1, n);
        Self { count: n, max: v[n - 1], mean: sum / T::from_count(n), median, p95: v[rank - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig<T> {
    pub k: usize,
    pub z: u32,
    pub eps: T,
    pub delta_main: usize,
    pub delta_outer: usize,
    pub seed: u64,
    pub input_size: usize,
    pub coreset_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<T> {
    pub config: EvalConfig<T>,
    pub per_solution: Vec<SolutionEval<T>>,
    /// Over solutions with positive exact cost.
    pub summary: Summary<T>,
    /// Solutions with zero exact cost.
    pub zero_cost: usize,
    /// Largest absolute error among zero-cost solutions.
    pub zero_cost_max_absolute: T,
}

impl<T: Scalar> EvalReport<T> {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("serialize report: {e}")))
    }

    /// One row per solution: `solution,fingerprint,exact,coreset,relative,absolute`;
    /// `relative` is empty for zero-cost solutions.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invariant(format!("write report CSV: {e}"));
        w.write_record(["solution", "fingerprint", "exact", "coreset", "relative", "absolute"]).map_err(io)?;
        for (i, s) in self.per_solution.iter().enumerate() {
            w.write_record([
                i.to_string(),
                format!("{:016x}", s.fingerprint),
                s.exact.to_string(),
                s.coreset.to_string(),
                s.relative.map(|r| r.to_string()).unwrap_or_default(),
                s.absolute.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("write report CSV: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }
}

/// Exact and coreset costs of every solution, in panel order.
pub fn evaluate<T: Scalar>(
    points: &PointSet<T>,
    coreset: &Coreset<T>,
    solutions: &[Solution<T>],
) -> Result<EvalReport<T>> {
    let z = coreset.meta.z;
    let backend = points.backend().as_ref();
    let per_solution: Vec<SolutionEval<T>> = solutions
        .par_iter()
        .map(|s| -> Result<SolutionEval<T>> {
            let mut exact = T::zero();
            for (&site, &w) in points.sites().iter().zip(points.weights()) {
                exact = exact + w * point_cost(backend, site, s, z)?;
            }
            let mut approx = T::zero();
            for m in &coreset.members {
                if m.weight != T::zero() {
                    approx = approx + m.weight * point_cost(backend, m.id, s, z)?;
                }
            }
            let absolute = (exact - approx).abs();
            let relative = (exact > T::zero()).then(|| absolute / exact);
            Ok(SolutionEval { fingerprint: s.fingerprint(), exact, coreset: approx, relative, absolute })
        })
        .collect::<Result<_>>()?;
    let relative: Vec<T> = per_solution.iter().filter_map(|s| s.relative).collect();
    let zero: Vec<T> = per_solution.iter().filter(|s| s.relative.is_none()).map(|s| s.absolute).collect();
    let m = &coreset.meta;
    Ok(EvalReport {
        config: EvalConfig {
            k: m.k,
            z: m.z,
            eps: m.eps,
            delta_main: m.delta_main,
            delta_outer: m.delta_outer,
            seed: m.seed,
            input_size: points.len(),
            coreset_size: coreset.len(),
        },
        summary: Summary::of(&relative),
        zero_cost: zero.len(),
        zero_cost_max_absolute: zero.iter().fold(T::zero(), |acc, &x| acc.max(x)),
        per_solution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub delta: usize,
    pub seed: u64,
    pub size: usize,
    pub max: T,
    pub mean: T,
    pub median: T,
    pub p95: T,
}

/// Builds with `δ_main = δ_outer = δ` for every `(δ, seed)` and summarizes
/// the distortion over the fixed `panel`. Rows sorted by `δ`, then seed.
pub fn sweep<T: Scalar>(
    points: &PointSet<T>,
    base: &BuildConfig<T>,
    deltas: &[usize],
    seeds: &[u64],
    panel: &[Solution<T>],
) -> Result<Vec<SweepRow<T>>> {
    if deltas.is_empty() || seeds.is_empty() || panel.is_empty() {
        return Err(Error::Input("sweep needs deltas, seeds and a solution panel".into()));
    }
    let mut pairs: Vec<(usize, u64)> = deltas.iter().flat_map(|&d| seeds.iter().map(move |&s| (d, s))).collect();
    pairs.sort_unstable();
    pairs
        .into_iter()
        .map(|(delta, seed)| {
            let cfg = BuildConfig { delta_main: delta, delta_outer: delta, seed, ..*base };
            let coreset = build(points, &cfg)?;
            let report = evaluate(points, &coreset, panel)?;
            let s = report.summary;
            Ok(SweepRow { delta, seed, size: coreset.len(), max: s.max, mean: s.mean, median: s.median, p95: s.p95 })
        })
        .collect()
}

/// `delta,seed,max,mean,median,p95` with a header row.
pub fn sweep_csv<T: Scalar>(rows: &[SweepRow<T>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Invariant(format!("write sweep CSV: {e}"));
    w.write_record(["delta", "seed", "max", "mean", "median", "p95"]).map_err(io)?;
    for r in rows {
        w.write_record([
            r.delta.to_string(),
            r.seed.to_string(),
            r.max.to_string(),
            r.mean.to_string(),
            r.median.to_string(),
            r.p95.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("write sweep CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessReport<T> {
    pub solutions: usize,
    /// `max |cost(D, S) - cost(P1, S)| / (cost(P, S) + cost(P, A))`.
    pub max_ratio: T,
    /// `8 ε`.
    pub bound: T,
    pub violations: usize,
}

/// Compares the discarded points `D` against the weighted centers `P1` that
/// replace them.
pub fn verify_preprocess<T: Scalar>(
    points: &PointSet<T>,
    construction: &Construction<T>,
    solutions: &[Solution<T>],
) -> Result<PreprocessReport<T>> {
    let ctx = &construction.context;
    let z = ctx.z;
    let backend = points.backend().as_ref();
    let discarded = construction.discarded();
    let centers = ctx
        .solution
        .sites()
        .ok_or_else(|| Error::Invariant("seed solution centers must be sites".into()))?;
    let cost_a = ctx.total_cost();
    let bound = T::lit(8.0) * construction.decomposition.params.eps;
    let ratios: Vec<T> = solutions
        .par_iter()
        .map(|s| -> Result<T> {
            let mut d_cost = T::zero();
            for &p in &discarded {
                d_cost = d_cost + points.weight(p) * point_cost(backend, points.site(p), s, z)?;
            }
            let mut p1_cost = T::zero();
            for (&c, &w) in centers.iter().zip(&construction.center_weights) {
                if w > T::zero() {
                    p1_cost = p1_cost + w * point_cost(backend, c, s, z)?;
                }
            }
            let denom = set_cost(points, s, z)? + cost_a;
            let diff = (d_cost - p1_cost).abs();
            Ok(if denom > T::zero() { diff / denom } else if diff == T::zero() { T::zero() } else { T::infinity() })
        })
        .collect::<Result<_>>()?;
    Ok(PreprocessReport {
        solutions: solutions.len(),
        max_ratio: ratios.iter().fold(T::zero(), |acc, &r| acc.max(r)),
        bound,
        violations: ratios.iter().filter(|&&r| r > bound).count(),
    })
}

/// Fraction of `trials` independent group samples in which every
/// restriction's deposited mass lies in `[(1-ε)|C_i|, (1+ε)|C_i|]`.
pub fn verify_event_e<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    group: &GroupEntry<T>,
    delta: usize,
    trials: usize,
    eps: T,
    seed: u64,
) -> Result<f64> {
    if group.restrictions.is_empty() {
        return Err(Error::Input("group has no restrictions".into()));
    }
    if trials == 0 {
        return Err(Error::Input("trials must be at least 1".into()));
    }
    let hits: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let draws = group_sample(points, ctx, group, delta, child_seed(seed, t))?;
            let mass = restriction_mass(group, ctx, &draws);
            Ok(group.restrictions.iter().zip(&mass).all(|(r, &m)| {
                (m - r.size).abs() <= eps * r.size + T::lit(1e-12) * r.size
            }))
        })
        .collect::<Result<_>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / trials as f64)
}

/// Mixture of `k` isotropic Gaussians in `[0, 100]^dim` with random
/// standard deviations in `[1, 4]` and uneven mixing weights, plus 1%
/// uniform background noise over `[-50, 150]^dim`.
pub fn gaussian_mixture<T: Scalar>(n: usize, k: usize, dim: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = rng::stream(seed, 0);
    let k = k.max(1);
    let means: Vec<Vec<f64>> = (0..k).map(|_| (0..dim).map(|_| rng.random_range(0.0..100.0)).collect()).collect();
    let sigmas: Vec<f64> = (0..k).map(|_| rng.random_range(1.0..4.0)).collect();
    let mix: Vec<f64> = (0..k).map(|_| rng.random_range(0.5..1.5)).collect();
    let total: f64 = mix.iter().sum();
    let noise = n / 100;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n - noise {
        let mut u = rng.random::<f64>() * total;
        let mut c = 0;
        while c + 1 < k && u >= mix[c] {
            u -= mix[c];
            c += 1;
        }
        let g = Normal::new(0.0, sigmas[c]).expect("positive sigma");
        out.push(means[c].iter().map(|&m| T::lit(m + g.sample(&mut rng))).collect());
    }
    for _ in 0..noise {
        out.push((0..dim).map(|_| T::lit(rng.random_range(-50.0..150.0))).collect());
    }
    out
}

/// The planar reference instance: 20000 points from a 10-component mixture.
pub fn reference_points<T: Scalar>(seed: u64) -> Vec<Vec<T>> {
    gaussian_mixture(20_000, 10, 2, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricBackend;
    use crate::pipeline::{build_detailed, identity_coreset};
    use std::sync::Arc;

    fn mixture(n: usize) -> PointSet<f64> {
        let b = MetricBackend::euclidean(&gaussian_mixture::<f64>(n, 3, 2, 5), 2.0).unwrap();
        PointSet::unweighted(Arc::new(b)).unwrap()
    }

    #[test]
    fn identity_has_zero_distortion() {
        let p = mixture(300);
        let c = identity_coreset(&p, 3, 2);
        for s in gen_solutions(&p, 3, 2, SolutionKind::RandomPoints, 20, 1).unwrap() {
            assert_eq!(distortion(&p, &c, &s, 2).unwrap(), 0.0);
        }
        let single = PointSet::unweighted(Arc::new(MetricBackend::euclidean(&[vec![1.0]], 2.0).unwrap())).unwrap();
        let c = identity_coreset(&single, 1, 1);
        let s = Solution::new(vec![Center::Coord(vec![4.0])]).unwrap();
        assert_eq!(distortion(&single, &c, &s, 1).unwrap(), 0.0);
        let on = Solution::from_sites([0]).unwrap();
        assert!(matches!(distortion(&single, &c, &on, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn generators() {
        let p = mixture(200);
        let one = gen_solutions(&p, 3, 2, SolutionKind::DzSampled, 1, 9).unwrap();
        assert_eq!(one.len(), 1);
        let a = dz_seed(&p, 3, 2, 9).unwrap();
        let ctx = build_context(&p, &a, 2).unwrap();
        let same = gen_solutions_around(&p, &ctx, 3, SolutionKind::PerturbedSeed { radius: 0.0 }, 3, 2).unwrap();
        assert!(same.iter().all(|s| *s == ctx.solution));
        let adv = gen_solutions_around(&p, &ctx, 3, SolutionKind::NearClusterAdversarial, 5, 2).unwrap();
        assert!(adv.iter().all(|s| s.k() == 3));
        let panel = solution_panel(&p, &ctx, 3, 4, 11).unwrap();
        assert_eq!(panel, solution_panel(&p, &ctx, 3, 4, 11).unwrap());
        assert_eq!(panel.len(), 16);
    }

    #[test]
    fn summary_quantiles() {
        let s = Summary::of(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!((s.max, s.mean, s.median, s.p95), (4.0, 2.5, 2.5, 4.0));
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(Summary::of(&v).p95, 95.0);
    }

    #[test]
    fn sweep_rows_and_copy_path() {
        let p = mixture(120);
        let panel = gen_solutions(&p, 2, 2, SolutionKind::RandomPoints, 10, 0).unwrap();
        let base = BuildConfig::new(2, 2, 0.2, 1, 1, 0);
        let rows = sweep(&p, &base, &[200, 20], &[3], &panel).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].delta, 20);
        assert!(rows[1].max < 1e-12);
        let csv = sweep_csv(&rows).unwrap();
        assert!(csv.starts_with("delta,seed,max,mean,median,p95\n20,3,"));
    }

    #[test]
    fn preprocess_on_centers_is_exact() {
        let b = MetricBackend::euclidean(&[vec![0.0], vec![0.0], vec![9.0], vec![9.0], vec![9.0]], 2.0).unwrap();
        let p = PointSet::unweighted(Arc::new(b)).unwrap();
        let (_, c) = build_detailed(&p, &BuildConfig::new(2, 2, 0.2, 4, 4, 0)).unwrap();
        let panel = gen_solutions(&p, 2, 2, SolutionKind::RandomPoints, 10, 0).unwrap();
        let r = verify_preprocess(&p, &c, &panel).unwrap();
        assert_eq!((r.max_ratio, r.violations), (0.0, 0));
    }
}
