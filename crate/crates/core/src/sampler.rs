//! Sampling procedures that turn one group into a weighted sample.
//!
//! * [`group_sample`]: `δ` rounds of importance sampling where a point of
//!   restriction `C̃_i` is drawn with probability
//!   `w(p) cost(C̃_i, A) / (|C̃_i| cost(G, A))` and deposits
//!   `f(p) = |C̃_i| cost(G, A) / (δ cost(C̃_i, A))`.
//! * [`sensitivity_sample`]: `δ` rounds drawing `p` with probability
//!   `w(p) cost(p, A) / cost(G, A)`, each draw depositing
//!   `cost(G, A) / (δ cost(p, A))`.
//! * [`ring_uniform_sample`]: `δ` uniform draws, each worth `|R| / δ`.
//!
//! A point of weight `w` behaves as `w` copies. When `δ` reaches the number
//! of distinct points the group is returned verbatim. Repeated draws of a
//! point are merged by summing their weights, and output is sorted by point.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::approx::ClusteringContext;
use crate::decompose::{GroupEntry, GroupId};
use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::rng::{self, pick_from_cdf};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procedure {
    GroupSample,
    SensitivitySample,
    UniformRing,
    /// Group small enough to be kept whole.
    Copy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawProvenance {
    pub group: GroupId,
    pub procedure: Procedure,
    /// First round the point was drawn in; `None` for copied points.
    pub round: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDraw<T> {
    /// Client index into the point set.
    pub point: usize,
    pub weight: T,
    pub provenance: DrawProvenance,
}

fn copy_group<T: Scalar>(points: &PointSet<T>, id: GroupId, members: &[usize]) -> Vec<WeightedDraw<T>> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted
        .into_iter()
        .map(|p| WeightedDraw {
            point: p,
            weight: points.weight(p),
            provenance: DrawProvenance { group: id, procedure: Procedure::Copy, round: None },
        })
        .collect()
}

fn probability_tolerance<T: Scalar>(n: usize) -> T {
    T::lit(1e-9).max(T::epsilon() * T::from_count(4 * n.max(1)))
}

/// Runs `delta` rounds over a discrete distribution and merges repeats.
fn draw_rounds<T: Scalar>(
    items: &[(usize, T, T)],
    delta: usize,
    rng: &mut impl Rng,
    id: GroupId,
    procedure: Procedure,
) -> Vec<WeightedDraw<T>> {
    let mut cdf = Vec::with_capacity(items.len());
    let mut acc = T::zero();
    for &(_, prob, _) in items {
        acc = acc + prob;
        cdf.push(acc);
    }
    let mut merged: BTreeMap<usize, (T, u32)> = BTreeMap::new();
    for round in 0..delta {
        let u = T::lit(rng.random::<f64>()) * acc;
        let (point, _, deposit) = items[pick_from_cdf(&cdf, u)];
        let slot = merged.entry(point).or_insert((T::zero(), round as u32));
        slot.0 = slot.0 + deposit;
    }
    merged
        .into_iter()
        .map(|(point, (weight, round))| WeightedDraw {
            point,
            weight,
            provenance: DrawProvenance { group: id, procedure, round: Some(round) },
        })
        .collect()
}

fn check_probabilities<T: Scalar>(items: &[(usize, T, T)]) -> Result<()> {
    let total = items.iter().fold(T::zero(), |acc, &(_, p, _)| acc + p);
    if (total - T::one()).abs() > probability_tolerance::<T>(items.len()) {
        return Err(Error::Invariant(format!("sampling probabilities sum to {total}, not 1")));
    }
    Ok(())
}

/// Importance sampling in rounds over a well-structured group.
pub fn group_sample<T: Scalar>(
    points: &PointSet<T>,
    _ctx: &ClusteringContext<T>,
    group: &GroupEntry<T>,
    delta: usize,
    seed: u64,
) -> Result<Vec<WeightedDraw<T>>> {
    if delta == 0 {
        return Err(Error::Input("delta must be at least 1".into()));
    }
    if group.members.is_empty() {
        return Ok(Vec::new());
    }
    if delta >= group.members.len() {
        return Ok(copy_group(points, group.id, &group.members));
    }
    if let Some(r) = group.restrictions.iter().find(|r| !(r.cost > T::zero())) {
        return Err(Error::Input(format!(
            "restriction of cluster {} in group {} has zero cost",
            r.cluster, group.id
        )));
    }
    let d = T::from_count(delta);
    let mut items: Vec<(usize, T, T)> = Vec::with_capacity(group.members.len());
    for r in &group.restrictions {
        let per_unit = r.cost / (r.size * group.cost);
        let deposit = r.size * group.cost / (d * r.cost);
        items.extend(r.members.iter().map(|&p| (p, points.weight(p) * per_unit, deposit)));
    }
    items.sort_by_key(|&(p, _, _)| p);
    check_probabilities(&items)?;
    let mut rng = rng::stream(seed, group.id.stream_key());
    Ok(draw_rounds(&items, delta, &mut rng, group.id, Procedure::GroupSample))
}

/// Cost-proportional sampling, used for outer groups.
pub fn sensitivity_sample<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    group: &GroupEntry<T>,
    delta: usize,
    seed: u64,
) -> Result<Vec<WeightedDraw<T>>> {
    if delta == 0 {
        return Err(Error::Input("delta must be at least 1".into()));
    }
    if group.members.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(&p) = group.members.iter().find(|&&p| !(ctx.cost_to_a[p] > T::zero())) {
        return Err(Error::Invariant(format!("point {p} of group {} has zero cost", group.id)));
    }
    if delta >= group.members.len() {
        return Ok(copy_group(points, group.id, &group.members));
    }
    let d = T::from_count(delta);
    let items: Vec<(usize, T, T)> = group
        .members
        .iter()
        .map(|&p| {
            let c = ctx.cost_to_a[p];
            (p, points.weight(p) * c / group.cost, group.cost / (d * c))
        })
        .collect();
    check_probabilities(&items)?;
    let mut rng = rng::stream(seed, group.id.stream_key());
    Ok(draw_rounds(&items, delta, &mut rng, group.id, Procedure::SensitivitySample))
}

/// Uniform sampling from one ring.
///
/// Unit (or otherwise equal) weights use `δ` draws without replacement, each
/// worth `|R| / δ`. Unequal weights fall back to `δ` weight-proportional draws
/// with replacement at the same per-draw weight, which keeps the copy
/// semantics unbiased.
pub fn ring_uniform_sample<T: Scalar>(
    points: &PointSet<T>,
    id: GroupId,
    members: &[usize],
    delta: usize,
    seed: u64,
) -> Result<Vec<WeightedDraw<T>>> {
    if delta == 0 {
        return Err(Error::Input("delta must be at least 1".into()));
    }
    if members.is_empty() {
        return Err(Error::Input(format!("ring {id} is empty")));
    }
    if members.len() <= delta {
        return Ok(copy_group(points, id, members));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let total = sorted.iter().fold(T::zero(), |acc, &p| acc + points.weight(p));
    let deposit = total / T::from_count(delta);
    let mut rng = rng::stream(seed, id.stream_key());
    let first = points.weight(sorted[0]);
    if sorted.iter().all(|&p| points.weight(p) == first) {
        let mut picked: Vec<(usize, u32)> = index::sample(&mut rng, sorted.len(), delta)
            .into_iter()
            .enumerate()
            .map(|(round, i)| (sorted[i], round as u32))
            .collect();
        picked.sort_unstable();
        Ok(picked
            .into_iter()
            .map(|(point, round)| WeightedDraw {
                point,
                weight: deposit,
                provenance: DrawProvenance { group: id, procedure: Procedure::UniformRing, round: Some(round) },
            })
            .collect())
    } else {
        let items: Vec<(usize, T, T)> = sorted.iter().map(|&p| (p, points.weight(p) / total, deposit)).collect();
        Ok(draw_rounds(&items, delta, &mut rng, id, Procedure::UniformRing))
    }
}

/// Weighted mass deposited on each restriction of `group` by `draws`.
pub fn restriction_mass<T: Scalar>(group: &GroupEntry<T>, ctx: &ClusteringContext<T>, draws: &[WeightedDraw<T>]) -> Vec<T> {
    let mut mass = vec![T::zero(); group.restrictions.len()];
    for d in draws {
        let cluster = ctx.assign[d.point];
        if let Some(i) = group.restrictions.iter().position(|r| r.cluster == cluster) {
            mass[i] = mass[i] + d.weight;
        }
    }
    mass
}
