//! End-to-end coreset construction.
//!
//! [`build`] seeds a solution `A`, decomposes the clients, moves the inner
//! ring and every `Min` group onto the centers of `A`, group-samples every
//! other main group and sensitivity-samples every other outer group.
//! [`build_k2`] replaces the main-group step by uniform sampling inside
//! per-cluster distance rings. [`compose`] chains builds, feeding each
//! stage's coreset to the next.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{build_context, dz_seed, local_search_refine, ClusteringContext};
use crate::decompose::{classify, group_registry, Decomposition, GroupEntry, GroupId, Label};
use crate::error::{Error, Result};
use crate::metric::{check_z, point_cost, MetricBackend, PointSet, Solution};
use crate::sampler::{group_sample, ring_uniform_sample, sensitivity_sample, Procedure, WeightedDraw};
use crate::scalar::{floor_log2_ratio, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Main,
    K2,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Variant::Main),
            "k2" => Ok(Variant::K2),
            other => Err(Error::Input(format!("unknown variant {other:?}"))),
        }
    }
}

/// Where a coreset member came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Center of `A`, carrying the discarded weight of its cluster.
    Center { cluster: usize },
    Sampled {
        group: GroupId,
        procedure: Procedure,
        round: Option<u32>,
    },
    /// Input point kept verbatim.
    Input,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member<T> {
    /// Site of the backend.
    pub id: usize,
    pub weight: T,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceCounts {
    pub centers: usize,
    pub group_sample: usize,
    pub sensitivity_sample: usize,
    pub uniform_ring: usize,
    pub copied: usize,
    pub input: usize,
}

/// Parameters of one build stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig<T> {
    pub k: usize,
    pub z: u32,
    pub eps: T,
    /// `δ` for main groups (rings in the k-squared variant).
    pub delta_main: usize,
    /// `δ` for outer groups.
    pub delta_outer: usize,
    pub seed: u64,
    pub variant: Variant,
    /// Local-search swaps applied to the seed solution; 0 disables refinement.
    pub refine_swaps: usize,
}

impl<T: Scalar> BuildConfig<T> {
    pub fn new(k: usize, z: u32, eps: T, delta_main: usize, delta_outer: usize, seed: u64) -> Self {
        Self { k, z, eps, delta_main, delta_outer, seed, variant: Variant::Main, refine_swaps: 0 }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_refine_swaps(mut self, swaps: usize) -> Self {
        self.refine_swaps = swaps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_z(self.z)?;
        if self.k == 0 {
            return Err(Error::Input("k must be at least 1".into()));
        }
        if !(self.eps > T::zero() && self.eps < T::one() / T::lit(3.0)) {
            return Err(Error::Input(format!("eps = {} outside (0, 1/3)", self.eps)));
        }
        if self.delta_main == 0 || self.delta_outer == 0 {
            return Err(Error::Input("sample sizes must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord<T> {
    pub eps: T,
    pub delta_main: usize,
    pub delta_outer: usize,
    pub seed: u64,
    pub variant: Variant,
    pub input_size: usize,
    pub output_size: usize,
    /// Integer-weight scale applied when the stage input had fractional weights.
    pub reduction_scale: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoresetMeta<T> {
    pub k: usize,
    pub z: u32,
    pub eps: T,
    pub delta_main: usize,
    pub delta_outer: usize,
    pub seed: u64,
    pub variant: Variant,
    pub counts: ProvenanceCounts,
    /// Groups (or rings) that went through a sampler, including copied ones.
    pub sampled_groups: usize,
    pub outer_groups: usize,
    /// `cost(P, A)` of the seed solution of the last stage.
    pub seed_cost: T,
    /// Fingerprint of the input point set.
    pub source: u64,
    pub stages: Vec<StageRecord<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coreset<T> {
    pub meta: CoresetMeta<T>,
    pub members: Vec<Member<T>>,
}

impl<T: Scalar> Coreset<T> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn total_weight(&self) -> T {
        self.members.iter().fold(T::zero(), |acc, m| acc + m.weight)
    }

    /// Weight carried by center entries.
    pub fn center_weight(&self) -> T {
        self.members
            .iter()
            .filter(|m| matches!(m.provenance, Provenance::Center { .. }))
            .fold(T::zero(), |acc, m| acc + m.weight)
    }

    /// `sum w(p) cost(p, S)` over members, in member order.
    pub fn cost(&self, backend: &MetricBackend<T>, solution: &Solution<T>, z: u32) -> Result<T> {
        let costs: Vec<T> = self
            .members
            .par_iter()
            .map(|m| if m.weight == T::zero() { Ok(T::zero()) } else { point_cost(backend, m.id, solution, z) })
            .collect::<Result<_>>()?;
        Ok(self.members.iter().zip(&costs).fold(T::zero(), |acc, (m, &c)| acc + m.weight * c))
    }

    /// The members as a weighted point set: duplicate sites merged, zero
    /// weights dropped, ascending site order.
    pub fn to_point_set(&self, backend: &Arc<MetricBackend<T>>) -> Result<PointSet<T>> {
        let mut merged: BTreeMap<usize, T> = BTreeMap::new();
        for m in &self.members {
            if m.weight > T::zero() {
                let slot = merged.entry(m.id).or_insert_with(T::zero);
                *slot = *slot + m.weight;
            }
        }
        let (sites, weights) = merged.into_iter().unzip();
        PointSet::new(Arc::clone(backend), sites, weights)
    }

    /// `|Ω| <= k + (#sampled main groups) δ_main + (#outer groups) δ_outer`.
    pub fn cardinality_bound(&self) -> usize {
        let main_groups = self.meta.sampled_groups - self.meta.outer_groups;
        self.meta.k + main_groups * self.meta.delta_main + self.meta.outer_groups * self.meta.delta_outer
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("serialize coreset: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("parse coreset JSON: {e}")))
    }

    /// `id,weight` CSV with a header row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invariant(format!("write coreset CSV: {e}"));
        w.write_record(["id", "weight"]).map_err(io)?;
        for m in &self.members {
            w.write_record([m.id.to_string(), m.weight.to_string()]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("write coreset CSV: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }
}

/// Reads the `id,weight` CSV written by [`Coreset::to_csv`].
pub fn read_coreset_csv<T: Scalar + std::str::FromStr>(text: &str) -> Result<Vec<(usize, T)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Input(format!("coreset CSV line {}: {e}", line + 2)))?;
        let bad = || Error::Input(format!("coreset CSV line {}: expected id,weight", line + 2));
        if rec.len() != 2 {
            return Err(bad());
        }
        let id = rec[0].trim().parse::<usize>().map_err(|_| bad())?;
        let w = rec[1].trim().parse::<T>().map_err(|_| bad())?;
        out.push((id, w));
    }
    Ok(out)
}

/// Intermediate products of a build, kept for inspection and verification.
#[derive(Debug, Clone)]
pub struct Construction<T> {
    pub context: ClusteringContext<T>,
    pub decomposition: Decomposition<T>,
    pub registry: Vec<GroupEntry<T>>,
    /// Discarded weight credited to each cluster center.
    pub center_weights: Vec<T>,
}

impl<T: Scalar> Construction<T> {
    /// Client indices moved onto centers.
    pub fn discarded(&self) -> Vec<usize> {
        (0..self.decomposition.labels.len())
            .filter(|&p| self.decomposition.labels[p].is_discarded())
            .collect()
    }
}

fn center_sites<T: Scalar>(ctx: &ClusteringContext<T>) -> Result<Vec<usize>> {
    ctx.solution
        .sites()
        .ok_or_else(|| Error::Invariant("seed solution centers must be sites".into()))
}

/// Seeds `A`, decomposes, and credits discarded weight to the centers.
pub fn prepare<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Result<Construction<T>> {
    cfg.validate()?;
    let mut a = dz_seed(points, cfg.k, cfg.z, cfg.seed)?;
    if cfg.refine_swaps > 0 {
        a = local_search_refine(points, &a, cfg.z, cfg.refine_swaps)?;
    }
    let context = build_context(points, &a, cfg.z)?;
    let decomposition = classify(points, &context, cfg.eps)?;
    decomposition.check_bounds()?;
    let registry = group_registry(&decomposition, points, &context);
    let mut center_weights = vec![T::zero(); context.k()];
    for (p, label) in decomposition.labels.iter().enumerate() {
        if label.is_discarded() {
            let c = label.cluster();
            center_weights[c] = center_weights[c] + points.weight(p);
        }
    }
    Ok(Construction { context, decomposition, registry, center_weights })
}

fn assemble<T: Scalar>(
    points: &PointSet<T>,
    cfg: &BuildConfig<T>,
    construction: &Construction<T>,
    draws: Vec<Vec<WeightedDraw<T>>>,
    sampled_groups: usize,
    outer_groups: usize,
) -> Result<Coreset<T>> {
    let sites = center_sites(&construction.context)?;
    let mut counts = ProvenanceCounts::default();
    let mut members: Vec<Member<T>> = sites
        .iter()
        .zip(&construction.center_weights)
        .enumerate()
        .map(|(cluster, (&id, &weight))| Member { id, weight, provenance: Provenance::Center { cluster } })
        .collect();
    counts.centers = members.len();
    for d in draws.into_iter().flatten() {
        match d.provenance.procedure {
            Procedure::GroupSample => counts.group_sample += 1,
            Procedure::SensitivitySample => counts.sensitivity_sample += 1,
            Procedure::UniformRing => counts.uniform_ring += 1,
            Procedure::Copy => counts.copied += 1,
        }
        members.push(Member {
            id: points.site(d.point),
            weight: d.weight,
            provenance: Provenance::Sampled {
                group: d.provenance.group,
                procedure: d.provenance.procedure,
                round: d.provenance.round,
            },
        });
    }
    let coreset = Coreset {
        meta: CoresetMeta {
            k: cfg.k,
            z: cfg.z,
            eps: cfg.eps,
            delta_main: cfg.delta_main,
            delta_outer: cfg.delta_outer,
            seed: cfg.seed,
            variant: cfg.variant,
            counts,
            sampled_groups,
            outer_groups,
            seed_cost: construction.context.total_cost(),
            source: points.fingerprint(),
            stages: vec![StageRecord {
                eps: cfg.eps,
                delta_main: cfg.delta_main,
                delta_outer: cfg.delta_outer,
                seed: cfg.seed,
                variant: cfg.variant,
                input_size: points.len(),
                output_size: 0,
                reduction_scale: None,
            }],
        },
        members,
    };
    let mut coreset = coreset;
    coreset.meta.stages[0].output_size = coreset.len();
    if coreset.len() > coreset.cardinality_bound() {
        return Err(Error::Invariant(format!(
            "coreset has {} members, above the bound {}",
            coreset.len(),
            coreset.cardinality_bound()
        )));
    }
    Ok(coreset)
}

/// Builds a coreset; dispatches on `cfg.variant`.
pub fn build<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Result<Coreset<T>> {
    build_detailed(points, cfg).map(|(c, _)| c)
}

/// Like [`build`], also returning the intermediate construction.
pub fn build_detailed<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Result<(Coreset<T>, Construction<T>)> {
    match cfg.variant {
        Variant::Main => build_main(points, cfg),
        Variant::K2 => build_k2(points, cfg),
    }
}

fn build_main<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Result<(Coreset<T>, Construction<T>)> {
    let construction = prepare(points, cfg)?;
    let ctx = &construction.context;
    let active: Vec<&GroupEntry<T>> = construction.registry.iter().filter(|g| !g.discard).collect();
    let draws: Vec<Vec<WeightedDraw<T>>> = active
        .par_iter()
        .map(|g| match g.id {
            GroupId::Main { .. } => group_sample(points, ctx, g, cfg.delta_main, cfg.seed),
            GroupId::Outer { .. } => sensitivity_sample(points, ctx, g, cfg.delta_outer, cfg.seed),
            GroupId::Ring { .. } => Err(Error::Invariant("ring group in the main registry".into())),
        })
        .collect::<Result<_>>()?;
    let outer = active.iter().filter(|g| matches!(g.id, GroupId::Outer { .. })).count();
    let coreset = assemble(points, cfg, &construction, draws, active.len(), outer)?;
    Ok((coreset, construction))
}

/// Largest ring index of the k-squared variant, `ceil(4z log2(z/ε))`.
pub fn k2_max_ring<T: Scalar>(eps: T, z: u32) -> i32 {
    let zf = z as f64;
    ((4.0 * zf * (zf / eps.as_f64()).log2()).ceil() as i32).max(1)
}

/// Rings `R_{i,j}` of the k-squared variant over the retained main points:
/// `j = floor(log2(dist(p, A) / ((ε/z)^2 Δ_i^(1/z))))`, clamped to
/// `1..=ceil(4z log2(z/ε))`.
pub fn k2_rings<T: Scalar>(points: &PointSet<T>, construction: &Construction<T>) -> Vec<GroupEntry<T>> {
    let ctx = &construction.context;
    let eps = construction.decomposition.params.eps;
    let z = ctx.z;
    let ratio = (eps / T::from_count(z as usize)).powi(2);
    let top = k2_max_ring(eps, z);
    let mut rings: BTreeMap<(usize, i32), Vec<usize>> = BTreeMap::new();
    for (p, label) in construction.decomposition.labels.iter().enumerate() {
        if let Label::Main { cluster, band, .. } = *label {
            if band == crate::decompose::BandClass::Min {
                continue;
            }
            let anchor = ratio * ctx.delta[cluster].powf(T::one() / T::from_count(z as usize));
            let j = floor_log2_ratio(ctx.dist_to_a[p], anchor).clamp(1, top);
            rings.entry((cluster, j)).or_default().push(p);
        }
    }
    rings
        .into_iter()
        .map(|((cluster, ring), members)| {
            GroupEntry::from_members(GroupId::Ring { cluster, ring }, false, &members, points, ctx)
        })
        .collect()
}

/// k-squared variant: same preprocessing, uniform sampling of `delta_main`
/// points per ring, sensitivity sampling of `delta_outer` per outer group.
pub fn build_k2<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Result<(Coreset<T>, Construction<T>)> {
    let construction = prepare(points, cfg)?;
    let ctx = &construction.context;
    let rings = k2_rings(points, &construction);
    let outer: Vec<&GroupEntry<T>> = construction
        .registry
        .iter()
        .filter(|g| !g.discard && matches!(g.id, GroupId::Outer { .. }))
        .collect();
    let mut draws: Vec<Vec<WeightedDraw<T>>> = rings
        .par_iter()
        .map(|r| ring_uniform_sample(points, r.id, &r.members, cfg.delta_main, cfg.seed))
        .collect::<Result<_>>()?;
    let outer_draws: Vec<Vec<WeightedDraw<T>>> = outer
        .par_iter()
        .map(|g| sensitivity_sample(points, ctx, g, cfg.delta_outer, cfg.seed))
        .collect::<Result<_>>()?;
    draws.extend(outer_draws);
    let cfg = BuildConfig { variant: Variant::K2, ..*cfg };
    let coreset = assemble(points, &cfg, &construction, draws, rings.len() + outer.len(), outer.len())?;
    Ok((coreset, construction))
}

/// Integer-weight version of a weighted instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedInstance<T> {
    /// `floor(2 w(p) / (ε w_min))`.
    pub int_weights: Vec<u64>,
    /// `ε w_min / 2`; `scale * int_weights[p]` approximates `w(p)`.
    pub scale: T,
}

impl<T: Scalar> ReducedInstance<T> {
    pub fn scaled_weight(&self, p: usize) -> T {
        self.scale * T::from_u64(self.int_weights[p]).expect("integer weight representable")
    }
}

/// Rounds weights to integer multiples of `ε w_min / 2`, so that
/// `|w(p) - scale * w̃(p)| <= (ε/2) w(p)`.
pub fn reduce_weights<T: Scalar>(weights: &[T], eps: T) -> Result<ReducedInstance<T>> {
    if weights.is_empty() {
        return Err(Error::Input("no weights".into()));
    }
    if !(eps > T::zero()) {
        return Err(Error::Input("eps must be positive".into()));
    }
    if weights.iter().any(|w| !(*w > T::zero() && w.is_finite())) {
        return Err(Error::Input("weights must be positive and finite".into()));
    }
    let w_min = weights.iter().copied().fold(T::infinity(), T::min);
    let two = T::lit(2.0);
    let int_weights = weights
        .iter()
        .map(|&w| {
            (two * w / (eps * w_min))
                .floor()
                .to_u64()
                .ok_or_else(|| Error::Input(format!("weight {w} too large to reduce")))
        })
        .collect::<Result<_>>()?;
    Ok(ReducedInstance { int_weights, scale: eps * w_min / two })
}

pub fn reduce_weighted<T: Scalar>(points: &PointSet<T>, eps: T) -> Result<ReducedInstance<T>> {
    reduce_weights(points.weights(), eps)
}

fn has_fractional_weights<T: Scalar>(points: &PointSet<T>) -> bool {
    points.weights().iter().any(|w| w.fract() != T::zero())
}

fn verbatim<T: Scalar>(points: &PointSet<T>, cfg: &BuildConfig<T>) -> Coreset<T> {
    let members: Vec<Member<T>> = points
        .sites()
        .iter()
        .zip(points.weights())
        .map(|(&id, &weight)| Member { id, weight, provenance: Provenance::Input })
        .collect();
    Coreset {
        meta: CoresetMeta {
            k: cfg.k,
            z: cfg.z,
            eps: cfg.eps,
            delta_main: cfg.delta_main,
            delta_outer: cfg.delta_outer,
            seed: cfg.seed,
            variant: cfg.variant,
            counts: ProvenanceCounts { input: members.len(), ..Default::default() },
            sampled_groups: 0,
            outer_groups: 0,
            seed_cost: T::zero(),
            source: points.fingerprint(),
            stages: Vec::new(),
        },
        members,
    }
}

/// The whole point set as an exact, zero-distortion coreset.
pub fn identity_coreset<T: Scalar>(points: &PointSet<T>, k: usize, z: u32) -> Coreset<T> {
    verbatim(points, &BuildConfig::new(k, z, T::lit(0.1), 1, 1, 0))
}

/// Feeds each stage's coreset into the next build. All stages must share
/// `k` and `z`. Fractional-weight stage inputs are first reduced to integer
/// weights and the stage output is scaled back. A stage whose input has at
/// most `k` points passes it through unchanged.
pub fn compose<T: Scalar>(points: &PointSet<T>, stages: &[BuildConfig<T>]) -> Result<Coreset<T>> {
    let Some(first) = stages.first() else {
        return Err(Error::Input("compose needs at least one stage".into()));
    };
    if stages.iter().any(|s| s.k != first.k || s.z != first.z) {
        return Err(Error::Input("all stages must share k and z".into()));
    }
    let backend = Arc::clone(points.backend());
    let mut current = points.clone();
    let mut records = Vec::with_capacity(stages.len());
    let mut last: Option<Coreset<T>> = None;
    for cfg in stages {
        cfg.validate()?;
        let (mut coreset, scale) = if current.len() <= cfg.k {
            (verbatim(&current, cfg), None)
        } else if has_fractional_weights(&current) {
            let reduced = reduce_weighted(&current, cfg.eps)?;
            let int_points = current.reweighted(
                reduced.int_weights.iter().map(|&w| T::from_u64(w).expect("integer weight")).collect(),
            )?;
            let mut c = build(&int_points, cfg)?;
            for m in &mut c.members {
                m.weight = m.weight * reduced.scale;
            }
            (c, Some(reduced.scale))
        } else {
            (build(&current, cfg)?, None)
        };
        records.push(StageRecord {
            eps: cfg.eps,
            delta_main: cfg.delta_main,
            delta_outer: cfg.delta_outer,
            seed: cfg.seed,
            variant: cfg.variant,
            input_size: current.len(),
            output_size: coreset.len(),
            reduction_scale: scale,
        });
        coreset.meta.source = points.fingerprint();
        current = coreset.to_point_set(&backend)?;
        last = Some(coreset);
    }
    let mut out = last.expect("at least one stage");
    out.meta.stages = records;
    Ok(out)
}

/// Guarantee factor of a composed coreset, `prod (1 + ε_i)`.
pub fn composed_factor<T: Scalar>(stages: &[BuildConfig<T>]) -> T {
    stages.iter().fold(T::one(), |acc, s| acc * (T::one() + s.eps))
}

/// Sample sizes from the asymptotic bounds with every hidden constant set to
/// `c1`:
///
/// `δ_main = ceil(c1 ln²(1/ε) / min(ε², ε^z) (k u + ln ln(1/ε) + ln(1/π)))`,
/// and `δ_outer` the same with `ε²` as the denominator. `u` stands in for
/// `log |C|`, the log-size of a centroid set.
pub fn delta_heuristic_with<T: Scalar>(c1: T, eps: T, k: usize, z: u32, pi: T, union_budget: T) -> Result<(usize, usize)> {
    let one = T::one();
    if !(eps > T::zero() && eps < one / T::lit(3.0)) {
        return Err(Error::Input(format!("eps = {eps} outside (0, 1/3)")));
    }
    if !(pi > T::zero() && pi < one) || !(union_budget > T::zero()) || !(c1 > T::zero()) || k == 0 {
        return Err(Error::Input("heuristic inputs must be positive (and pi < 1)".into()));
    }
    check_z(z)?;
    let log_inv = eps.recip().ln();
    let budget = T::from_count(k) * union_budget + log_inv.ln() + pi.recip().ln();
    let sq = eps * eps;
    let main = c1 * log_inv * log_inv / sq.min(eps.powi(z as i32)) * budget;
    let outer = c1 * log_inv * log_inv / sq * budget;
    let to_count = |x: T| x.ceil().to_usize().ok_or_else(|| Error::Input("sample size overflows".into()));
    Ok((to_count(main)?, to_count(outer)?))
}

pub fn delta_heuristic<T: Scalar>(eps: T, k: usize, z: u32, pi: T, union_budget: T) -> Result<(usize, usize)> {
    delta_heuristic_with(T::one(), eps, k, z, pi, union_budget)
}

/// Default union budget: `d + log2 k` for Euclidean inputs, `log2 n` otherwise.
pub fn default_union_budget<T: Scalar>(points: &PointSet<T>, k: usize) -> T {
    match points.backend().as_euclidean() {
        Some(e) => T::from_count(e.dim()) + T::from_count(k.max(1)).log2(),
        None => T::from_count(points.len().max(2)).log2(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::set_cost;

    fn line(xs: &[f64]) -> PointSet<f64> {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        PointSet::unweighted(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap())).unwrap()
    }

    #[test]
    fn all_points_on_centers() {
        let p = line(&[0.0, 0.0, 0.0, 5.0, 5.0]);
        let c = build(&p, &BuildConfig::new(2, 2, 0.2, 10, 10, 1)).unwrap();
        assert_eq!(c.len(), 2);
        let mut w: Vec<f64> = c.members.iter().map(|m| m.weight).collect();
        w.sort_by(f64::total_cmp);
        assert_eq!(w, vec![2.0, 3.0]);
        let s = Solution::new(vec![crate::metric::Center::Coord(vec![1.7])]).unwrap();
        assert_eq!(c.cost(p.backend(), &s, 2).unwrap(), set_cost(&p, &s, 2).unwrap());
    }

    #[test]
    fn single_point() {
        let p = line(&[3.0]);
        let c = build(&p, &BuildConfig::new(1, 1, 0.1, 5, 5, 0)).unwrap();
        assert_eq!(c.members, vec![Member { id: 0, weight: 1.0, provenance: Provenance::Center { cluster: 0 } }]);
    }

    #[test]
    fn config_validation() {
        let p = line(&[0.0, 1.0]);
        assert!(build(&p, &BuildConfig::new(1, 1, 0.4, 5, 5, 0)).is_err());
        assert!(build(&p, &BuildConfig::new(1, 1, 0.2, 0, 5, 0)).is_err());
        assert!(build(&p, &BuildConfig::new(0, 1, 0.2, 5, 5, 0)).is_err());
        assert!(build(&p, &BuildConfig::new(3, 1, 0.2, 5, 5, 0)).is_err());
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_weights(&[1.0, 2.5], 0.5).unwrap();
        assert_eq!(r.scale, 0.25);
        assert_eq!(r.int_weights, vec![4, 10]);
        assert_eq!((r.scaled_weight(0), r.scaled_weight(1)), (1.0, 2.5));
        let r = reduce_weights(&[1.0f64, 1.3], 0.5).unwrap();
        assert_eq!(r.int_weights[1], 5);
        assert!((1.3 - r.scaled_weight(1)).abs() <= 0.325);
        let r = reduce_weights(&[0.7, 0.7, 0.7], 0.2).unwrap();
        assert!(r.int_weights.iter().all(|&w| w == r.int_weights[0]));
        assert!(reduce_weights(&[1.0, 0.0], 0.5).is_err());
    }

    #[test]
    fn heuristic_values() {
        let ub = 2.0 + 5f64.log2();
        assert_eq!(delta_heuristic(0.2, 5, 2, 0.1, ub).unwrap(), (1580, 1580));
        assert_eq!(delta_heuristic(0.1, 5, 3, 0.1, ub).unwrap(), (131_203, 13_121));
        let (m1, o1) = delta_heuristic(0.2, 5, 2, 0.1, ub).unwrap();
        let (m2, o2) = delta_heuristic(0.1, 5, 2, 0.1, ub).unwrap();
        assert!(m2 >= m1 && o2 >= o1);
        let (m3, _) = delta_heuristic(0.2, 5, 2, 0.01, ub).unwrap();
        assert!(m3 > m1);
        assert!(delta_heuristic(0.5, 5, 2, 0.1, ub).is_err());
    }

    #[test]
    fn k2_ring_arithmetic() {
        // one cluster, center at 0; z=1, ε=0.25
        let p = line(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let cfg = BuildConfig::new(1, 1, 0.25, 100, 100, 0);
        let construction = prepare(&p, &cfg).unwrap();
        let delta = construction.context.delta[0];
        assert!((delta - 1.0 / 9.0).abs() < 1e-15);
        // dist 1 = 144 ε²Δ: floor(log2 144) = 7
        let rings = k2_rings(&p, &construction);
        assert_eq!(rings.len(), 1);
        assert_eq!(rings[0].id, GroupId::Ring { cluster: 0, ring: 7 });
    }

    #[test]
    fn compose_single_stage_equals_build() {
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37) % 101) as f64 * 0.1 + if i % 2 == 0 { 0.0 } else { 50.0 }).collect();
        let p = line(&xs);
        let cfg = BuildConfig::new(2, 2, 0.2, 20, 20, 4);
        assert_eq!(compose(&p, &[cfg]).unwrap(), build(&p, &cfg).unwrap());
        assert!(compose(&p, &[]).is_err());
        assert!(compose(&p, &[cfg, BuildConfig::new(3, 2, 0.2, 20, 20, 4)]).is_err());
    }

    #[test]
    fn compose_passes_tiny_stage_through() {
        let p = line(&[0.0, 10.0]);
        let cfg = BuildConfig::new(2, 1, 0.2, 5, 5, 0);
        let c = compose(&p, &[cfg, cfg]).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.members.iter().all(|m| m.provenance == Provenance::Input && m.weight == 1.0));
    }

    #[test]
    fn csv_round_trip() {
        let xs: Vec<f64> = (0..50).map(|i| (i as f64).sqrt()).collect();
        let c = build(&line(&xs), &BuildConfig::new(2, 2, 0.2, 5, 5, 1)).unwrap();
        let rows: Vec<(usize, f64)> = read_coreset_csv(&c.to_csv().unwrap()).unwrap();
        let expect: Vec<(usize, f64)> = c.members.iter().map(|m| (m.id, m.weight)).collect();
        assert_eq!(rows, expect);
        assert!(read_coreset_csv::<f64>("id,weight\n1\n").is_err());
    }
}
