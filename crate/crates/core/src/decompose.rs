//! Partition of the clients into inner, main and outer rings, and of the
//! main and outer rings into groups of comparable per-cluster cost.
//!
//! With `Δ_i` the average cost of cluster `i` under `A`:
//! * inner: `cost(p, A) <= (ε/z)^(2z) Δ_i`, or `Δ_i = 0`;
//! * outer: `cost(p, A) >= (z/ε)^(2z) Δ_i`;
//! * main: everything else, in ring `j` with `2^j Δ_i <= cost(p, A) < 2^(j+1) Δ_i`.
//!
//! Main rings sharing an index `j` are bucketed across clusters by band `b`,
//! where `(ε/4z)^z 2^b cost(R_j)/k <= cost(R_ij) < (ε/4z)^z 2^(b+1) cost(R_j)/k`.
//! Bands `b <= 0` collapse into `Min` (discarded onto centers) and bands
//! `b >= z log2(4z/ε)` collapse into `Max`. Outer rings are banded the same
//! way against the total outer cost.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::ClusteringContext;
use crate::error::{Error, Result};
use crate::metric::PointSet;
use crate::scalar::{floor_log2_ratio, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandClass {
    Min,
    Band(u32),
    Max,
}

impl fmt::Display for BandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandClass::Min => write!(f, "min"),
            BandClass::Band(b) => write!(f, "{b}"),
            BandClass::Max => write!(f, "max"),
        }
    }
}

/// Category of one client.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Inner { cluster: usize },
    Main { cluster: usize, ring: i32, band: BandClass },
    Outer { cluster: usize, band: BandClass },
}

impl Label {
    pub fn cluster(&self) -> usize {
        match *self {
            Label::Inner { cluster } | Label::Main { cluster, .. } | Label::Outer { cluster, .. } => cluster,
        }
    }

    /// Points moved onto their cluster center in preprocessing.
    pub fn is_discarded(&self) -> bool {
        matches!(
            self,
            Label::Inner { .. } | Label::Main { band: BandClass::Min, .. } | Label::Outer { band: BandClass::Min, .. }
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Inner { cluster } => write!(f, "inner(c={cluster})"),
            Label::Main { cluster, ring, band } => write!(f, "main(c={cluster},j={ring},b={band})"),
            Label::Outer { cluster, band } => write!(f, "outer(c={cluster},b={band})"),
        }
    }
}

/// Result of [`ring_index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingIndex {
    Inner,
    Ring(i32),
}

/// `floor(log2(cost / Δ))` on the half-open convention; `Inner` when either
/// value is zero.
pub fn ring_index<T: Scalar>(cost: T, delta: T) -> Result<RingIndex> {
    if cost < T::zero() || delta < T::zero() || cost.is_nan() || delta.is_nan() {
        return Err(Error::Input(format!("negative cost {cost} or average {delta}")));
    }
    if cost == T::zero() || delta == T::zero() {
        return Ok(RingIndex::Inner);
    }
    Ok(RingIndex::Ring(floor_log2_ratio(cost, delta)))
}

/// Per-point class before banding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Inner,
    Main(i32),
    Outer,
}

/// `(ε/z)^(2z)`.
pub fn inner_factor<T: Scalar>(eps: T, z: u32) -> T {
    (eps / T::from_count(z as usize)).powi(2 * z as i32)
}

/// `(z/ε)^(2z)`.
pub fn outer_factor<T: Scalar>(eps: T, z: u32) -> T {
    (T::from_count(z as usize) / eps).powi(2 * z as i32)
}

/// Smallest band index that collapses into `Max`: `ceil(z log2(4z/ε))`.
pub fn max_band<T: Scalar>(eps: T, z: u32) -> i32 {
    let zf = z as f64;
    let x = zf * (4.0 * zf / eps.as_f64()).log2();
    // guard exact integers such as z log2(8) = 3 against rounding upward
    (x - 1e-9).ceil() as i32
}

/// Bound on the number of distinct non-empty main ring indices:
/// `ceil(4z log2(z/ε)) + 2`.
pub fn max_main_rings<T: Scalar>(eps: T, z: u32) -> usize {
    let zf = z as f64;
    (4.0 * zf * (zf / eps.as_f64()).log2()).ceil() as usize + 2
}

/// Bound on the number of `(j, b)` main groups with a proper band:
/// `(4z log2(z/ε) + 2) (z log2(4z/ε) + 2)`.
pub fn max_band_groups<T: Scalar>(eps: T, z: u32) -> f64 {
    let zf = z as f64;
    let e = eps.as_f64();
    (4.0 * zf * (zf / e).log2() + 2.0) * (zf * (4.0 * zf / e).log2() + 2.0)
}

pub fn classify_point<T: Scalar>(cost: T, delta: T, eps: T, z: u32) -> PointClass {
    if delta == T::zero() || cost <= inner_factor(eps, z) * delta {
        PointClass::Inner
    } else if cost >= outer_factor(eps, z) * delta {
        PointClass::Outer
    } else {
        PointClass::Main(floor_log2_ratio(cost, delta))
    }
}

/// Band of a per-cluster cost against `total` spread over `k` clusters.
pub fn band_of<T: Scalar>(part: T, total: T, eps: T, z: u32, k: usize) -> BandClass {
    if !(part > T::zero()) {
        return BandClass::Min;
    }
    let base = (eps / T::from_count(4 * z as usize)).powi(z as i32) * total / T::from_count(k);
    let b = floor_log2_ratio(part, base);
    if b <= 0 {
        BandClass::Min
    } else if b >= max_band(eps, z) {
        BandClass::Max
    } else {
        BandClass::Band(b as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionParams<T> {
    pub eps: T,
    pub z: u32,
    /// Number of (non-empty) clusters of `A`.
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition<T> {
    pub labels: Vec<Label>,
    /// `cost(R_ij, A)` keyed by `(cluster, ring)`.
    pub ring_cost: BTreeMap<(usize, i32), T>,
    /// `cost(R_j, A)` keyed by ring.
    pub rj_cost: BTreeMap<i32, T>,
    /// `cost(R_O(C_i), A)` per cluster.
    pub outer_cluster_cost: Vec<T>,
    pub outer_total: T,
    pub params: DecompositionParams<T>,
}

/// Labels every client. Requires `0 < ε < 1/3`.
pub fn classify<T: Scalar>(points: &PointSet<T>, ctx: &ClusteringContext<T>, eps: T) -> Result<Decomposition<T>> {
    if !(eps > T::zero() && eps < T::one() / T::lit(3.0)) {
        return Err(Error::Input(format!("eps = {eps} outside (0, 1/3)")));
    }
    if ctx.assign.len() != points.len() {
        return Err(Error::Input("context does not match the point set".into()));
    }
    let z = ctx.z;
    let k = ctx.k();
    let classes: Vec<PointClass> = (0..points.len())
        .map(|p| classify_point(ctx.cost_to_a[p], ctx.delta[ctx.assign[p]], eps, z))
        .collect();

    let mut ring_cost: BTreeMap<(usize, i32), T> = BTreeMap::new();
    let mut outer_cluster_cost = vec![T::zero(); k];
    for (p, class) in classes.iter().enumerate() {
        let c = ctx.assign[p];
        let cost = points.weight(p) * ctx.cost_to_a[p];
        match *class {
            PointClass::Main(j) => {
                let slot = ring_cost.entry((c, j)).or_insert_with(T::zero);
                *slot = *slot + cost;
            }
            PointClass::Outer => outer_cluster_cost[c] = outer_cluster_cost[c] + cost,
            PointClass::Inner => {}
        }
    }
    let mut rj_cost: BTreeMap<i32, T> = BTreeMap::new();
    for (&(_, j), &cost) in &ring_cost {
        let slot = rj_cost.entry(j).or_insert_with(T::zero);
        *slot = *slot + cost;
    }
    let outer_total = outer_cluster_cost.iter().fold(T::zero(), |acc, &c| acc + c);

    let labels = classes
        .iter()
        .enumerate()
        .map(|(p, class)| {
            let cluster = ctx.assign[p];
            match *class {
                PointClass::Inner => Label::Inner { cluster },
                PointClass::Main(ring) => Label::Main {
                    cluster,
                    ring,
                    band: band_of(ring_cost[&(cluster, ring)], rj_cost[&ring], eps, z, k),
                },
                PointClass::Outer => Label::Outer {
                    cluster,
                    band: band_of(outer_cluster_cost[cluster], outer_total, eps, z, k),
                },
            }
        })
        .collect();

    Ok(Decomposition {
        labels,
        ring_cost,
        rj_cost,
        outer_cluster_cost,
        outer_total,
        params: DecompositionParams { eps, z, k },
    })
}

impl<T: Scalar> Decomposition<T> {
    /// Number of distinct main ring indices in use.
    pub fn main_ring_count(&self) -> usize {
        self.rj_cost.len()
    }

    /// Number of `(j, b)` main groups with a proper band label.
    pub fn band_group_count(&self) -> usize {
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.labels {
            if let Label::Main { ring, band: BandClass::Band(b), .. } = l {
                seen.insert((*ring, *b));
            }
        }
        seen.len()
    }

    /// Checks the counting bounds on rings and band groups.
    pub fn check_bounds(&self) -> Result<()> {
        let DecompositionParams { eps, z, .. } = self.params;
        if self.main_ring_count() > max_main_rings(eps, z) {
            return Err(Error::Invariant(format!(
                "{} main rings exceed the bound {}",
                self.main_ring_count(),
                max_main_rings(eps, z)
            )));
        }
        if self.band_group_count() as f64 > max_band_groups(eps, z) {
            return Err(Error::Invariant(format!(
                "{} band groups exceed the bound {}",
                self.band_group_count(),
                max_band_groups(eps, z)
            )));
        }
        Ok(())
    }
}

/// Identifier of a group; the derived order is the processing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupId {
    /// `G_{j,b}`.
    Main { ring: i32, band: BandClass },
    /// Outer group of a band class.
    Outer { band: BandClass },
    /// Uniform-sampling ring `R_{i,j}` of the k-squared variant.
    Ring { cluster: usize, ring: i32 },
}

impl GroupId {
    /// Key of the group's random stream. Stream 0 is reserved for seeding.
    pub fn stream_key(&self) -> u64 {
        fn band_code(b: BandClass) -> u64 {
            match b {
                BandClass::Min => 0,
                BandClass::Band(b) => u64::from(b) + 1,
                BandClass::Max => u64::from(u32::MAX),
            }
        }
        let ring_code = |j: i32| u64::from((j as i64 + (1 << 20)) as u32);
        match *self {
            GroupId::Main { ring, band } => (1 << 62) | (ring_code(ring) << 32) | band_code(band),
            GroupId::Outer { band } => (2 << 62) | band_code(band),
            GroupId::Ring { cluster, ring } => (3 << 62) | ((cluster as u64 & 0x3FFF_FFFF) << 32) | ring_code(ring),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Main { ring, band } => write!(f, "main(j={ring},b={band})"),
            GroupId::Outer { band } => write!(f, "outer(b={band})"),
            GroupId::Ring { cluster, ring } => write!(f, "ring(c={cluster},j={ring})"),
        }
    }
}

/// The part of a group lying in one cluster, `C̃_i = C_i ∩ G`.
#[derive(Debug, Clone, PartialEq)]
pub struct Restriction<T> {
    pub cluster: usize,
    pub members: Vec<usize>,
    /// Weighted size `|C̃_i|`.
    pub size: T,
    /// Weighted cost `cost(C̃_i, A)`.
    pub cost: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupEntry<T> {
    pub id: GroupId,
    /// `Min` classes are moved onto centers rather than sampled.
    pub discard: bool,
    /// Client indices, ascending.
    pub members: Vec<usize>,
    /// `cost(G, A)`.
    pub cost: T,
    pub restrictions: Vec<Restriction<T>>,
}

impl<T: Scalar> GroupEntry<T> {
    /// Assembles a group from client indices, computing restriction aggregates.
    pub fn from_members(
        id: GroupId,
        discard: bool,
        members: &[usize],
        points: &PointSet<T>,
        ctx: &ClusteringContext<T>,
    ) -> Self {
        let mut by_cluster: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        for &p in &sorted {
            by_cluster.entry(ctx.assign[p]).or_default().push(p);
        }
        let restrictions = by_cluster
            .into_iter()
            .map(|(cluster, members)| {
                let (size, cost) = members.iter().fold((T::zero(), T::zero()), |(s, c), &p| {
                    (s + points.weight(p), c + points.weight(p) * ctx.cost_to_a[p])
                });
                Restriction { cluster, members, size, cost }
            })
            .collect();
        let cost = sorted
            .iter()
            .fold(T::zero(), |acc, &p| acc + points.weight(p) * ctx.cost_to_a[p]);
        GroupEntry { id, discard, members: sorted, cost, restrictions }
    }

    pub fn weighted_size(&self) -> T {
        self.restrictions.iter().fold(T::zero(), |acc, r| acc + r.size)
    }
}

/// Every main and outer group in `(j, b)` order, main groups first. Inner
/// points belong to no group.
pub fn group_registry<T: Scalar>(
    decomposition: &Decomposition<T>,
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
) -> Vec<GroupEntry<T>> {
    let mut groups: BTreeMap<GroupId, Vec<usize>> = BTreeMap::new();
    for (p, label) in decomposition.labels.iter().enumerate() {
        let id = match *label {
            Label::Inner { .. } => continue,
            Label::Main { ring, band, .. } => GroupId::Main { ring, band },
            Label::Outer { band, .. } => GroupId::Outer { band },
        };
        groups.entry(id).or_default().push(p);
    }
    groups
        .into_iter()
        .map(|(id, members)| {
            let discard = matches!(
                id,
                GroupId::Main { band: BandClass::Min, .. } | GroupId::Outer { band: BandClass::Min }
            );
            GroupEntry::from_members(id, discard, &members, points, ctx)
        })
        .collect()
}

/// Plain-text dump: one `point<TAB>label` line per client, then one
/// `group<TAB>size<TAB>cost<TAB>action` line per group.
pub fn render_table<T: Scalar>(decomposition: &Decomposition<T>, registry: &[GroupEntry<T>], points: &PointSet<T>) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "point\tsite\tlabel");
    for (p, label) in decomposition.labels.iter().enumerate() {
        let _ = writeln!(out, "{p}\t{}\t{label}", points.site(p));
    }
    let _ = writeln!(out, "group\tsize\tcost\taction");
    for g in registry {
        let action = if g.discard { "discard" } else { "sample" };
        let _ = writeln!(out, "{}\t{}\t{}\t{action}", g.id, g.weighted_size(), g.cost);
    }
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::approx::build_context;
    use crate::metric::{MetricBackend, Solution};

    #[test]
    fn ring_index_examples() {
        assert_eq!(ring_index(3.0, 1.0).unwrap(), RingIndex::Ring(1));
        assert_eq!(ring_index(1.0, 1.0).unwrap(), RingIndex::Ring(0));
        assert_eq!(ring_index(0.0, 1.0).unwrap(), RingIndex::Inner);
        assert_eq!(ring_index(2.0, 0.0).unwrap(), RingIndex::Inner);
        assert!(ring_index(-1.0, 1.0).is_err());
        assert!(ring_index(1.0, -1.0).is_err());
    }

    #[test]
    fn inner_and_outer_thresholds() {
        // z=1, ε=0.5: inner below 0.25 Δ, outer from 4 Δ
        assert_eq!(classify_point(0.1, 1.0, 0.5, 1), PointClass::Inner);
        assert_eq!(classify_point(0.25, 1.0, 0.5, 1), PointClass::Inner);
        assert_eq!(classify_point(10.0, 1.0, 0.5, 1), PointClass::Outer);
        assert_eq!(classify_point(4.0, 1.0, 0.5, 1), PointClass::Outer);
        assert_eq!(classify_point(3.0, 1.0, 0.5, 1), PointClass::Main(1));
        assert_eq!(classify_point(5.0, 0.0, 0.5, 1), PointClass::Inner);
    }

    #[test]
    fn band_example() {
        // base (0.5/4) * 100 / 2 = 6.25, and 12.5 <= 20 < 25
        assert_eq!(band_of(20.0, 100.0, 0.5, 1, 2), BandClass::Band(1));
        assert_eq!(band_of(6.25, 100.0, 0.5, 1, 2), BandClass::Min);
        // max band for z=1, ε=0.5 is log2(8) = 3
        assert_eq!(max_band(0.5_f64, 1), 3);
        assert_eq!(band_of(50.0, 100.0, 0.5, 1, 2), BandClass::Max);
        assert_eq!(band_of(49.0, 100.0, 0.5, 1, 2), BandClass::Band(2));
    }

    #[test]
    fn classify_rejects_large_eps() {
        let b = Arc::new(MetricBackend::euclidean(&[vec![0.0], vec![1.0]], 2.0).unwrap());
        let p = PointSet::unweighted(b).unwrap();
        let ctx = build_context(&p, &Solution::from_sites([0]).unwrap(), 1).unwrap();
        assert!(classify(&p, &ctx, 0.4).is_err());
        assert!(classify(&p, &ctx, 0.0).is_err());
    }

    #[test]
    fn all_inner_gives_empty_registry() {
        let b = Arc::new(MetricBackend::euclidean(&[vec![0.0], vec![1.0]], 2.0).unwrap());
        let p = PointSet::unweighted(b).unwrap();
        let ctx = build_context(&p, &Solution::from_sites([0, 1]).unwrap(), 1).unwrap();
        let d = classify(&p, &ctx, 0.2).unwrap();
        assert!(d.labels.iter().all(|l| matches!(l, Label::Inner { .. })));
        assert!(group_registry(&d, &p, &ctx).is_empty());
    }

    #[test]
    fn symmetric_clusters_share_one_group() {
        // two mirrored clusters around centers at 0 and 100
        let xs = [0.0, 1.0, 1.5, 2.0, 100.0, 101.0, 101.5, 102.0];
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let p = PointSet::unweighted(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap())).unwrap();
        let ctx = build_context(&p, &Solution::from_sites([0, 4]).unwrap(), 1).unwrap();
        let d = classify(&p, &ctx, 0.2).unwrap();
        let reg = group_registry(&d, &p, &ctx);
        for g in &reg {
            assert_eq!(g.restrictions.len(), 2, "{}", g.id);
            assert_eq!(g.restrictions[0].cost, g.restrictions[1].cost);
        }
        assert!(!reg.is_empty());
    }

    #[test]
    fn single_outer_cluster_gives_one_outer_group() {
        // cluster 0: many points near 0 plus a far outlier; cluster 1 tight
        let mut xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.01).collect();
        xs.push(50.0);
        xs.extend([1000.0, 1000.01, 1000.02]);
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        let p = PointSet::unweighted(Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap())).unwrap();
        let ctx = build_context(&p, &Solution::from_sites([0, 21]).unwrap(), 1).unwrap();
        let d = classify(&p, &ctx, 0.3).unwrap();
        let reg = group_registry(&d, &p, &ctx);
        let outer: Vec<_> = reg.iter().filter(|g| matches!(g.id, GroupId::Outer { .. })).collect();
        assert_eq!(outer.len(), 1);
        assert_eq!(outer[0].members, vec![20]);
    }

    #[test]
    fn stream_keys_are_distinct() {
        let ids = [
            GroupId::Main { ring: -3, band: BandClass::Min },
            GroupId::Main { ring: -3, band: BandClass::Band(1) },
            GroupId::Main { ring: 2, band: BandClass::Max },
            GroupId::Outer { band: BandClass::Band(1) },
            GroupId::Outer { band: BandClass::Max },
            GroupId::Ring { cluster: 0, ring: 1 },
            GroupId::Ring { cluster: 1, ring: 1 },
        ];
        let mut keys: Vec<u64> = ids.iter().map(|g| g.stream_key()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), ids.len());
        assert!(keys.iter().all(|&k| k != crate::rng::SEEDING_STREAM));
    }
}
