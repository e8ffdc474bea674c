//! Distances and clustering costs over Euclidean, matrix and graph metrics.
//!
//! A [`MetricBackend`] owns the ambient space and addresses its elements as
//! *sites*. A [`PointSet`] is a weighted list of client sites bound to a
//! backend; client `i` lives at site `sites()[i]`. Centers are either sites
//! or, for Euclidean backends, arbitrary coordinate vectors.

mod backend;
mod graph;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use backend::{DistanceMatrix, Euclidean, MetricBackend, AXIOM_TOLERANCE};
pub use graph::GraphMetric;

use crate::error::{Error, Result};
use crate::scalar::{Fnv, Scalar};

/// A center descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center<T> {
    /// A site of the backend (point index, matrix row or graph vertex).
    Site(usize),
    /// Explicit coordinates; Euclidean backends only.
    Coord(Vec<T>),
}

/// A set of `k >= 1` centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution<T> {
    pub centers: Vec<Center<T>>,
}

impl<T: Scalar> Solution<T> {
    pub fn new(centers: Vec<Center<T>>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Input("a solution needs at least one center".into()));
        }
        Ok(Self { centers })
    }

    pub fn from_sites(sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(sites.into_iter().map(Center::Site).collect())
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    /// Site indices of the centers, if every center is a site.
    pub fn sites(&self) -> Option<Vec<usize>> {
        self.centers
            .iter()
            .map(|c| match c {
                Center::Site(s) => Some(*s),
                Center::Coord(_) => None,
            })
            .collect()
    }

    pub fn validate(&self, backend: &MetricBackend<T>) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::Input("a solution needs at least one center".into()));
        }
        self.centers.iter().try_for_each(|c| backend.check_center(c))
    }

    /// Stable 64-bit fingerprint of the center descriptors.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::default();
        for c in &self.centers {
            match c {
                Center::Site(s) => {
                    h.write_u64(0);
                    h.write_u64(*s as u64);
                }
                Center::Coord(x) => {
                    h.write_u64(1);
                    h.write_u64(x.len() as u64);
                    for v in x {
                        h.write_u64(v.bits());
                    }
                }
            }
        }
        h.finish()
    }
}

/// Weighted clients bound to a metric backend.
#[derive(Debug, Clone)]
pub struct PointSet<T> {
    backend: Arc<MetricBackend<T>>,
    sites: Vec<usize>,
    weights: Vec<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(backend: Arc<MetricBackend<T>>, sites: Vec<usize>, weights: Vec<T>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Input("a point set needs at least one point".into()));
        }
        if sites.len() != weights.len() {
            return Err(Error::Input(format!(
                "{} points but {} weights",
                sites.len(),
                weights.len()
            )));
        }
        for &s in &sites {
            backend.check_site(s)?;
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(**w > T::zero() && w.is_finite())) {
            return Err(Error::Input(format!("point {i} has non-positive weight {w}")));
        }
        if let MetricBackend::Graph(g) = backend.as_ref() {
            if !g.connects(&sites)? {
                return Err(Error::Input("graph is not connected over the client vertices".into()));
            }
        }
        Ok(Self { backend, sites, weights })
    }

    /// Every site of the backend as a unit-weight client.
    pub fn unweighted(backend: Arc<MetricBackend<T>>) -> Result<Self> {
        let n = backend.site_count();
        Self::new(backend, (0..n).collect(), vec![T::one(); n])
    }

    /// Every site of the backend, with the given weights.
    pub fn with_weights(backend: Arc<MetricBackend<T>>, weights: Vec<T>) -> Result<Self> {
        let n = backend.site_count();
        Self::new(backend, (0..n).collect(), weights)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn backend(&self) -> &Arc<MetricBackend<T>> {
        &self.backend
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn site(&self, i: usize) -> usize {
        self.sites[i]
    }

    #[inline]
    pub fn weight(&self, i: usize) -> T {
        self.weights[i]
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    /// Same clients with new weights.
    pub fn reweighted(&self, weights: Vec<T>) -> Result<Self> {
        Self::new(Arc::clone(&self.backend), self.sites.clone(), weights)
    }

    pub fn dist(&self, a: usize, b: usize) -> Result<T> {
        self.backend.dist(self.sites[a], self.sites[b])
    }

    /// Stable fingerprint of sites and weights.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::default();
        h.write_u64(self.backend.site_count() as u64);
        for (&s, &w) in self.sites.iter().zip(&self.weights) {
            h.write_u64(s as u64);
            h.write_u64(w.bits());
        }
        h.finish()
    }
}

/// `dist(site, S)`, the distance to the nearest center.
pub fn dist_to_solution<T: Scalar>(backend: &MetricBackend<T>, site: usize, solution: &Solution<T>) -> Result<T> {
    if solution.centers.is_empty() {
        return Err(Error::Input("empty solution".into()));
    }
    let mut best = T::infinity();
    for c in &solution.centers {
        best = best.min(backend.dist_to(site, c)?);
    }
    Ok(best)
}

/// `cost(p, S) = min_{s in S} dist(p, s)^z`.
pub fn point_cost<T: Scalar>(backend: &MetricBackend<T>, site: usize, solution: &Solution<T>, z: u32) -> Result<T> {
    check_z(z)?;
    Ok(powz(dist_to_solution(backend, site, solution)?, z))
}

/// Unweighted per-client costs, in client order.
pub fn point_costs<T: Scalar>(points: &PointSet<T>, solution: &Solution<T>, z: u32) -> Result<Vec<T>> {
    check_z(z)?;
    solution.validate(points.backend())?;
    let backend = points.backend().as_ref();
    points
        .sites()
        .par_iter()
        .map(|&s| point_cost(backend, s, solution, z))
        .collect()
}

/// `cost(P, S) = sum_p w(p) cost(p, S)`, summed in ascending client order.
pub fn set_cost<T: Scalar>(points: &PointSet<T>, solution: &Solution<T>, z: u32) -> Result<T> {
    let costs = point_costs(points, solution, z)?;
    Ok(weighted_sum(points.weights(), &costs))
}

/// `sum_i w_i c_i` in index order.
pub fn weighted_sum<T: Scalar>(weights: &[T], costs: &[T]) -> T {
    weights.iter().zip(costs).fold(T::zero(), |acc, (&w, &c)| acc + w * c)
}

#[inline]
pub(crate) fn powz<T: Scalar>(d: T, z: u32) -> T {
    d.powi(z as i32)
}

pub(crate) fn check_z(z: u32) -> Result<()> {
    if z == 0 {
        Err(Error::Input("z must be a positive integer".into()))
    } else {
        Ok(())
    }
}

/// Both sides of the power triangle inequality
/// `d(a,b)^z <= (1+eps)^(z-1) d(a,c)^z + ((1+eps)/eps)^(z-1) d(b,c)^z`,
/// from the three pairwise distances.
pub fn triangle_slack_from<T: Scalar>(d_ab: T, d_ac: T, d_bc: T, z: u32, eps: T) -> (T, T) {
    let e = (z - 1) as i32;
    let lhs = powz(d_ab, z);
    let rhs = (T::one() + eps).powi(e) * powz(d_ac, z) + ((T::one() + eps) / eps).powi(e) * powz(d_bc, z);
    (lhs, rhs)
}

/// Both sides of `|d(a,S)^z - d(b,S)^z| <= eps d(a,S)^z + ((2z+eps)/eps)^(z-1) d(a,b)^z`,
/// from `d(a,S)`, `d(b,S)` and `d(a,b)`.
pub fn cost_slack_from<T: Scalar>(d_a_s: T, d_b_s: T, d_ab: T, z: u32, eps: T) -> (T, T) {
    let e = (z - 1) as i32;
    let ca = powz(d_a_s, z);
    let cb = powz(d_b_s, z);
    let lhs = (ca - cb).abs();
    let factor = ((T::from_count(2 * z as usize) + eps) / eps).powi(e);
    let rhs = eps * ca + factor * powz(d_ab, z);
    (lhs, rhs)
}

/// `(lhs, rhs)` of the power triangle inequality for three sites; callers
/// assert `lhs <= rhs`.
pub fn powered_triangle_slack<T: Scalar>(
    backend: &MetricBackend<T>,
    a: usize,
    b: usize,
    c: usize,
    z: u32,
    eps: T,
) -> Result<(T, T)> {
    check_z(z)?;
    if !(eps > T::zero()) {
        return Err(Error::Input("eps must be positive".into()));
    }
    Ok(triangle_slack_from(backend.dist(a, b)?, backend.dist(a, c)?, backend.dist(b, c)?, z, eps))
}

/// `(lhs, rhs)` of the cost-difference form for two sites and a solution.
pub fn powered_cost_slack<T: Scalar>(
    backend: &MetricBackend<T>,
    a: usize,
    b: usize,
    solution: &Solution<T>,
    z: u32,
    eps: T,
) -> Result<(T, T)> {
    check_z(z)?;
    if !(eps > T::zero()) {
        return Err(Error::Input("eps must be positive".into()));
    }
    Ok(cost_slack_from(
        dist_to_solution(backend, a, solution)?,
        dist_to_solution(backend, b, solution)?,
        backend.dist(a, b)?,
        z,
        eps,
    ))
}

/// `lhs <= rhs` up to a relative slack of [`AXIOM_TOLERANCE`], which absorbs
/// rounding when the inequality is tight.
pub fn holds_with_tolerance<T: Scalar>(lhs: T, rhs: T) -> bool {
    lhs <= rhs + T::lit(AXIOM_TOLERANCE) * (T::one() + rhs.abs())
}
