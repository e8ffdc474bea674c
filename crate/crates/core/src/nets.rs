//! Greedy γ-nets and approximate centroid sets for doubling metrics.
//!
//! For each client `p` the candidate set holds a net `N_p` of the host points
//! in `B(p, (8z/ε) dist(p, A))` at granularity `(ε/4z) dist(p, A)`, plus a far
//! sentinel `s_f` lying outside every `B(p, (10z/ε) dist(p, A))` when one
//! exists. A solution is moved onto candidates by [`snap_solution`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::ClusteringContext;
use crate::error::{Error, Result};
use crate::metric::{powz, Center, MetricBackend, PointSet, Solution};
use crate::rng;
use crate::scalar::Scalar;

/// Default ceiling on the number of clients for [`build_candidates`].
pub const DEFAULT_CANDIDATE_CAP: usize = 500;

/// Net over a list of host sites. `members` index into `host`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Net<T> {
    pub gamma: T,
    pub members: Vec<usize>,
    pub host: Vec<usize>,
}

impl<T: Scalar> Net<T> {
    pub fn member_sites(&self) -> Vec<usize> {
        self.members.iter().map(|&m| self.host[m]).collect()
    }
}

/// Admits host points in ascending index order when farther than `gamma`
/// from every admitted point. `gamma = 0` keeps one copy of each distinct
/// location.
pub fn greedy_net<T: Scalar>(backend: &MetricBackend<T>, host: &[usize], gamma: T) -> Result<Net<T>> {
    if host.is_empty() {
        return Err(Error::Input("net over an empty host".into()));
    }
    if !(gamma >= T::zero() && gamma.is_finite()) {
        return Err(Error::Input(format!("net radius {gamma} must be finite and non-negative")));
    }
    let mut members: Vec<usize> = Vec::new();
    for (i, &site) in host.iter().enumerate() {
        let mut admit = true;
        for &m in &members {
            if backend.dist(host[m], site)? <= gamma {
                admit = false;
                break;
            }
        }
        if admit {
            members.push(i);
        }
    }
    Ok(Net { gamma, members, host: host.to_vec() })
}

/// Separation and covering measured on a net.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetCheck<T> {
    /// Smallest distance between two members (infinite for one member).
    pub min_separation: T,
    /// Largest distance from a host point to its nearest member.
    pub max_cover: T,
}

impl<T: Scalar> NetCheck<T> {
    /// Separation `> gamma` and covering `<= gamma`, both exact.
    pub fn holds(&self, gamma: T) -> bool {
        self.min_separation > gamma && self.max_cover <= gamma
    }
}

pub fn check_net<T: Scalar>(backend: &MetricBackend<T>, net: &Net<T>) -> Result<NetCheck<T>> {
    let sites = net.member_sites();
    let mut min_separation = T::infinity();
    for (i, &a) in sites.iter().enumerate() {
        for &b in &sites[i + 1..] {
            min_separation = min_separation.min(backend.dist(a, b)?);
        }
    }
    let mut max_cover = T::zero();
    for &h in &net.host {
        let mut best = T::infinity();
        for &m in &sites {
            best = best.min(backend.dist(m, h)?);
        }
        max_cover = max_cover.max(best);
    }
    Ok(NetCheck { min_separation, max_cover })
}

/// Net of one anchor client.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorNet<T> {
    /// Client index of the anchor.
    pub anchor: usize,
    /// `(8z/ε) dist(p, A)`.
    pub radius: T,
    /// `(ε/4z) dist(p, A)`.
    pub granularity: T,
    /// Net member sites, ascending host order.
    pub sites: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidCandidates<T> {
    pub eps: T,
    pub z: u32,
    /// Sites the candidates are drawn from.
    pub host: Vec<usize>,
    pub anchors: Vec<AnchorNet<T>>,
    /// Lowest host site outside every `(10z/ε)`-ball.
    pub far_sentinel: Option<usize>,
    /// Deduplicated ascending union of all nets and the sentinel.
    pub sites: Vec<usize>,
}

impl<T: Scalar> CentroidCandidates<T> {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("serialize candidates: {e}")))
    }
}

fn zf<T: Scalar>(z: u32) -> T {
    T::from_count(z as usize)
}

/// Candidates over the clients' own sites.
pub fn build_candidates<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    eps: T,
    cap: usize,
) -> Result<CentroidCandidates<T>> {
    build_candidates_in(points, ctx, eps, cap, points.sites())
}

/// Candidates drawn from an explicit host list, which must contain every
/// location a solution may use for snapping to be exact on host centers.
pub fn build_candidates_in<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    eps: T,
    cap: usize,
    host: &[usize],
) -> Result<CentroidCandidates<T>> {
    if points.len() > cap {
        return Err(Error::Refused(format!(
            "{} points exceed the candidate cap of {cap}; the candidate set grows as n (z/eps)^O(d)",
            points.len()
        )));
    }
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::Input(format!("eps = {eps} outside (0, 1)")));
    }
    if host.is_empty() {
        return Err(Error::Input("empty candidate host".into()));
    }
    let backend = points.backend().as_ref();
    for &h in host {
        backend.check_site(h)?;
    }
    let z = ctx.z;
    let ball = zf::<T>(8 * z) / eps;
    let far = zf::<T>(10 * z) / eps;
    let grain = eps / zf::<T>(4 * z);

    let anchors: Vec<AnchorNet<T>> = (0..points.len())
        .into_par_iter()
        .map(|p| -> Result<AnchorNet<T>> {
            let d = ctx.dist_to_a[p];
            let radius = ball * d;
            let site = points.site(p);
            let mut inside = Vec::new();
            for &h in host {
                if backend.dist(site, h)? <= radius {
                    inside.push(h);
                }
            }
            let sites = if inside.is_empty() {
                // zero radius with the anchor itself off the host
                Vec::new()
            } else {
                greedy_net(backend, &inside, grain * d)?.member_sites()
            };
            Ok(AnchorNet { anchor: p, radius, granularity: grain * d, sites })
        })
        .collect::<Result<_>>()?;

    let mut far_sentinel = None;
    'host: for &h in host {
        for p in 0..points.len() {
            if backend.dist(points.site(p), h)? <= far * ctx.dist_to_a[p] {
                continue 'host;
            }
        }
        far_sentinel = Some(h);
        break;
    }

    let mut sites: Vec<usize> = anchors.iter().flat_map(|a| a.sites.iter().copied()).chain(far_sentinel).collect();
    sites.sort_unstable();
    sites.dedup();
    Ok(CentroidCandidates { eps, z, host: host.to_vec(), anchors, far_sentinel, sites })
}

/// Moves one center onto the candidates. A center already located at a
/// candidate stays put. Otherwise, with
/// `q = argmin { dist(p, A) + dist(p, s) : dist(p, s) <= (10z/ε) dist(p, A) }`
/// (lowest index on ties) the result is the member of `N_q` nearest to `s`;
/// without such `q` it is `s_f`. Returns `s` unchanged when neither exists.
pub fn snap_center<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    candidates: &CentroidCandidates<T>,
    center: &Center<T>,
) -> Result<Center<T>> {
    let backend = points.backend().as_ref();
    if let Center::Site(s) = center {
        if candidates.sites.binary_search(s).is_ok() {
            return Ok(center.clone());
        }
    }
    for &c in &candidates.sites {
        if backend.dist_to(c, center)? == T::zero() {
            return Ok(Center::Site(c));
        }
    }
    let far = zf::<T>(10 * candidates.z) / candidates.eps;
    let mut best: Option<(T, usize)> = None;
    for p in 0..points.len() {
        let d_ps = backend.dist_to(points.site(p), center)?;
        let d_pa = ctx.dist_to_a[p];
        if d_ps <= far * d_pa {
            let key = d_pa + d_ps;
            if best.is_none_or(|(b, _)| key < b) {
                best = Some((key, p));
            }
        }
    }
    match best {
        Some((_, q)) => {
            let net = &candidates.anchors[q].sites;
            let mut nearest: Option<(T, usize)> = None;
            for &c in net {
                let d = backend.dist_to(c, center)?;
                if nearest.is_none_or(|(b, _)| d < b) {
                    nearest = Some((d, c));
                }
            }
            Ok(nearest.map(|(_, c)| Center::Site(c)).unwrap_or_else(|| center.clone()))
        }
        None => Ok(candidates.far_sentinel.map(Center::Site).unwrap_or_else(|| center.clone())),
    }
}

pub fn snap_solution<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    candidates: &CentroidCandidates<T>,
    solution: &Solution<T>,
) -> Result<Solution<T>> {
    let centers = solution
        .centers
        .iter()
        .map(|c| snap_center(points, ctx, candidates, c))
        .collect::<Result<_>>()?;
    Solution::new(centers)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidReport<T> {
    pub eps: T,
    pub solutions: usize,
    /// (solution, point) pairs passing the gate.
    pub gated: usize,
    pub violations: usize,
    /// Largest `|cost(p,S) - cost(p,S~)| / (cost(p,S) + cost(p,A))` over gated pairs.
    pub worst_ratio: T,
}

impl<T: Scalar> CentroidReport<T> {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(format!("serialize report: {e}")))
    }
}

fn nearest_cost<T: Scalar>(backend: &MetricBackend<T>, site: usize, s: &Solution<T>, z: u32) -> Result<T> {
    let mut best = T::infinity();
    for c in &s.centers {
        best = best.min(backend.dist_to(site, c)?);
    }
    Ok(powz(best, z))
}

/// Checks the approximate-centroid property on the given solutions at
/// tolerance `tolerance`: for every point with
/// `cost(p, S) <= (8z/ε)^z cost(p, A)` or the same for the snapped `S~`,
/// `|cost(p, S) - cost(p, S~)| <= tolerance (cost(p, S) + cost(p, A))`.
pub fn verify_centroid_solutions<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    candidates: &CentroidCandidates<T>,
    solutions: &[Solution<T>],
    tolerance: T,
) -> Result<CentroidReport<T>> {
    let backend = points.backend().as_ref();
    let z = candidates.z;
    let gate = powz(zf::<T>(8 * z) / candidates.eps, z);
    let slack = T::lit(1e-9);
    let per: Vec<(usize, usize, T)> = solutions
        .par_iter()
        .map(|s| -> Result<(usize, usize, T)> {
            let snapped = snap_solution(points, ctx, candidates, s)?;
            let (mut gated, mut violations, mut worst) = (0, 0, T::zero());
            for p in 0..points.len() {
                let site = points.site(p);
                let c_s = nearest_cost(backend, site, s, z)?;
                let c_t = nearest_cost(backend, site, &snapped, z)?;
                let c_a = ctx.cost_to_a[p];
                if !(c_s <= gate * c_a || c_t <= gate * c_a) {
                    continue;
                }
                gated += 1;
                let diff = (c_s - c_t).abs();
                let denom = c_s + c_a;
                let ratio = if denom > T::zero() {
                    diff / denom
                } else if diff == T::zero() {
                    T::zero()
                } else {
                    T::infinity()
                };
                worst = worst.max(ratio);
                if diff > tolerance * denom + slack * (T::one() + denom) {
                    violations += 1;
                }
            }
            Ok((gated, violations, worst))
        })
        .collect::<Result<_>>()?;
    Ok(CentroidReport {
        eps: candidates.eps,
        solutions: solutions.len(),
        gated: per.iter().map(|r| r.0).sum(),
        violations: per.iter().map(|r| r.1).sum(),
        worst_ratio: per.iter().fold(T::zero(), |acc, r| acc.max(r.2)),
    })
}

/// [`verify_centroid_solutions`] at tolerance `ε` on `trials` random
/// solutions of `k` distinct host sites.
pub fn verify_centroid_property<T: Scalar>(
    points: &PointSet<T>,
    ctx: &ClusteringContext<T>,
    candidates: &CentroidCandidates<T>,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<CentroidReport<T>> {
    let host = &candidates.host;
    if k == 0 || k > host.len() {
        return Err(Error::Input(format!("k = {k} outside 1..={}", host.len())));
    }
    let mut rng = rng::stream(seed, 0);
    let solutions: Vec<Solution<T>> = (0..trials)
        .map(|_| {
            let picks = rand::seq::index::sample(&mut rng, host.len(), k);
            Solution::from_sites(picks.into_iter().map(|i| host[i]))
        })
        .collect::<Result<_>>()?;
    verify_centroid_solutions(points, ctx, candidates, &solutions, candidates.eps)
}
