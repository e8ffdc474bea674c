//! Constant-factor seed solution and the per-point clustering context.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{check_z, dist_to_solution, powz, set_cost, Center, PointSet, Solution};
use crate::rng::{self, pick_from_cdf, SEEDING_STREAM};
use crate::scalar::Scalar;

/// Adaptive D^z seeding: the first center is drawn proportionally to weight,
/// each further one proportionally to `w(p) * cost(p, chosen so far)`.
///
/// Centers are returned as sites of the chosen clients.
pub fn dz_seed<T: Scalar>(points: &PointSet<T>, k: usize, z: u32, seed: u64) -> Result<Solution<T>> {
    check_z(z)?;
    if k == 0 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    if k > points.len() {
        return Err(Error::Input(format!("k = {k} exceeds the {} input points", points.len())));
    }
    let backend = points.backend().as_ref();
    let mut rng = rng::stream(seed, SEEDING_STREAM);
    let n = points.len();

    let mut cdf: Vec<T> = Vec::with_capacity(n);
    let mut acc = T::zero();
    for &w in points.weights() {
        acc = acc + w;
        cdf.push(acc);
    }
    let first = pick_from_cdf(&cdf, T::lit(rng.random::<f64>()) * acc);
    let mut chosen = vec![points.site(first)];

    let mut nearest: Vec<T> = vec![T::infinity(); n];
    while chosen.len() < k {
        let newest = Center::Site(*chosen.last().expect("non-empty"));
        nearest
            .par_iter_mut()
            .zip(points.sites().par_iter())
            .try_for_each(|(best, &s)| -> Result<()> {
                let d = powz(backend.dist_to(s, &newest)?, z);
                if d < *best {
                    *best = d;
                }
                Ok(())
            })?;
        cdf.clear();
        let mut acc = T::zero();
        for (&w, &c) in points.weights().iter().zip(&nearest) {
            acc = acc + w * c;
            cdf.push(acc);
        }
        if !(acc > T::zero()) {
            return Err(Error::Input(format!(
                "fewer than k = {k} distinct points (only {} found)",
                chosen.len()
            )));
        }
        let idx = pick_from_cdf(&cdf, T::lit(rng.random::<f64>()) * acc);
        chosen.push(points.site(idx));
    }
    Solution::from_sites(chosen)
}

/// Best-improvement single-swap local search over the clients' sites.
///
/// Each sweep evaluates every (center, candidate) swap and applies the best
/// strictly improving one. Stops after `max_swaps` applied swaps or when a
/// sweep finds no improvement; `max_swaps = 0` returns the input unchanged.
/// Quadratic in the number of points per sweep, so meant for small inputs.
pub fn local_search_refine<T: Scalar>(
    points: &PointSet<T>,
    solution: &Solution<T>,
    z: u32,
    max_swaps: usize,
) -> Result<Solution<T>> {
    check_z(z)?;
    solution.validate(points.backend())?;
    if max_swaps == 0 {
        return Ok(solution.clone());
    }
    let backend = points.backend().as_ref();
    let mut candidates: Vec<usize> = points.sites().to_vec();
    candidates.sort_unstable();
    candidates.dedup();

    // cost of every client to every candidate site
    let cand_cost: Vec<Vec<T>> = candidates
        .par_iter()
        .map(|&c| {
            points
                .sites()
                .iter()
                .map(|&s| backend.dist(c, s).map(|d| powz(d, z)))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;

    let mut current = solution.clone();
    let mut current_cost = set_cost(points, &current, z)?;
    for _ in 0..max_swaps {
        let center_costs: Vec<Vec<T>> = current
            .centers
            .iter()
            .map(|c| {
                points
                    .sites()
                    .iter()
                    .map(|&s| backend.dist_to(s, c).map(|d| powz(d, z)))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<_>>()?;

        let mut best: Option<(T, usize, usize)> = None;
        for pos in 0..current.k() {
            // nearest cost per client with center `pos` removed
            let without: Vec<T> = (0..points.len())
                .map(|p| {
                    center_costs
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != pos)
                        .map(|(_, row)| row[p])
                        .fold(T::infinity(), T::min)
                })
                .collect();
            for (ci, row) in cand_cost.iter().enumerate() {
                if current.centers[pos] == Center::Site(candidates[ci]) {
                    continue;
                }
                let cost = points
                    .weights()
                    .iter()
                    .zip(without.iter().zip(row))
                    .fold(T::zero(), |acc, (&w, (&a, &b))| acc + w * a.min(b));
                if cost < current_cost && best.is_none_or(|(c, _, _)| cost < c) {
                    best = Some((cost, pos, ci));
                }
            }
        }
        match best {
            Some((cost, pos, ci)) => {
                current.centers[pos] = Center::Site(candidates[ci]);
                current_cost = cost;
            }
            None => break,
        }
    }
    Ok(current)
}

/// The seed solution `A` together with everything the decomposition needs.
#[derive(Debug, Clone)]
pub struct ClusteringContext<T> {
    /// Centers of `A`, with empty clusters already dropped.
    pub solution: Solution<T>,
    /// Cluster (center index) of every client.
    pub assign: Vec<usize>,
    pub dist_to_a: Vec<T>,
    /// `dist_to_a^z`, unweighted.
    pub cost_to_a: Vec<T>,
    /// Weighted cluster sizes `|C_i|`.
    pub cluster_size: Vec<T>,
    /// Weighted cluster costs `cost(C_i, A)`.
    pub cluster_cost: Vec<T>,
    /// Average cost `cluster_cost / cluster_size`, or 0 for zero-cost clusters.
    pub delta: Vec<T>,
    pub z: u32,
}

impl<T: Scalar> ClusteringContext<T> {
    pub fn k(&self) -> usize {
        self.solution.k()
    }

    /// `cost(P, A)`, the sum of the cluster costs.
    pub fn total_cost(&self) -> T {
        self.cluster_cost.iter().fold(T::zero(), |acc, &c| acc + c)
    }

    /// Client members of every cluster, ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (p, &c) in self.assign.iter().enumerate() {
            out[c].push(p);
        }
        out
    }
}

/// Assigns every client to its nearest center of `a` (ties to the lowest
/// index), drops empty clusters and aggregates weighted sizes and costs.
pub fn build_context<T: Scalar>(points: &PointSet<T>, a: &Solution<T>, z: u32) -> Result<ClusteringContext<T>> {
    check_z(z)?;
    a.validate(points.backend())?;
    let backend = points.backend().as_ref();

    let nearest: Vec<(usize, T)> = points
        .sites()
        .par_iter()
        .map(|&s| {
            let mut best = (0usize, T::infinity());
            for (i, c) in a.centers.iter().enumerate() {
                let d = backend.dist_to(s, c)?;
                if d < best.1 {
                    best = (i, d);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut used = vec![false; a.k()];
    for &(i, _) in &nearest {
        used[i] = true;
    }
    let mut remap = vec![usize::MAX; a.k()];
    let mut centers = Vec::new();
    for (i, c) in a.centers.iter().enumerate() {
        if used[i] {
            remap[i] = centers.len();
            centers.push(c.clone());
        }
    }
    let k = centers.len();

    let assign: Vec<usize> = nearest.iter().map(|&(i, _)| remap[i]).collect();
    let dist_to_a: Vec<T> = nearest.iter().map(|&(_, d)| d).collect();
    let cost_to_a: Vec<T> = dist_to_a.iter().map(|&d| powz(d, z)).collect();
    let mut cluster_size = vec![T::zero(); k];
    let mut cluster_cost = vec![T::zero(); k];
    for p in 0..points.len() {
        let c = assign[p];
        cluster_size[c] = cluster_size[c] + points.weight(p);
        cluster_cost[c] = cluster_cost[c] + points.weight(p) * cost_to_a[p];
    }
    let delta = cluster_cost
        .iter()
        .zip(&cluster_size)
        .map(|(&c, &s)| if c > T::zero() { c / s } else { T::zero() })
        .collect();

    Ok(ClusteringContext {
        solution: Solution { centers },
        assign,
        dist_to_a,
        cost_to_a,
        cluster_size,
        cluster_cost,
        delta,
        z,
    })
}

/// Re-derives the nearest center of one client by brute force; used to audit
/// a context.
pub fn brute_force_assign<T: Scalar>(points: &PointSet<T>, solution: &Solution<T>, client: usize) -> Result<usize> {
    let backend = points.backend().as_ref();
    let s = points.site(client);
    let target = dist_to_solution(backend, s, solution)?;
    for (i, c) in solution.centers.iter().enumerate() {
        if backend.dist_to(s, c)? == target {
            return Ok(i);
        }
    }
    Err(Error::Invariant("nearest center not found".into()))
}
