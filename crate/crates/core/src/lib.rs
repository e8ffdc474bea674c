//! ε-coresets for (k, z)-clustering by group sampling.
//!
//! Points live in a [`MetricBackend`] (Euclidean coordinates, an explicit
//! distance matrix, or shortest paths in a weighted graph) and are addressed
//! by site index. [`build`] produces a weighted [`Coreset`] whose cost
//! approximates the input's cost for every set of `k` centers.
//!
//! ```
//! use std::sync::Arc;
//! use kz_coreset::{build, BuildConfig, MetricBackend, PointSet};
//!
//! let pts: Vec<Vec<f64>> = (0..400).map(|i| vec![(i % 20) as f64, (i / 20) as f64]).collect();
//! let backend = Arc::new(MetricBackend::euclidean(&pts, 2.0).unwrap());
//! let points = PointSet::unweighted(backend).unwrap();
//! let coreset = build(&points, &BuildConfig::new(3, 2, 0.2, 40, 40, 7)).unwrap();
//! assert!((coreset.total_weight() - 400.0).abs() < 200.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0)` is the NaN-rejecting form.

pub mod approx;
pub mod decompose;
pub mod error;
pub mod eval;
pub mod metric;
pub mod nets;
pub mod pipeline;
pub mod rng;
pub mod sampler;
mod scalar;

pub use approx::{build_context, dz_seed, local_search_refine, ClusteringContext};
pub use decompose::{classify, group_registry, BandClass, Decomposition, GroupEntry, GroupId, Label};
pub use error::{Error, Result};
pub use metric::{point_cost, set_cost, Center, MetricBackend, PointSet, Solution};
pub use pipeline::{
    build, build_k2, compose, delta_heuristic, reduce_weighted, BuildConfig, Coreset, Member, Provenance, Variant,
};
pub use scalar::Scalar;

pub type PointSetF64 = PointSet<f64>;
pub type PointSetF32 = PointSet<f32>;
pub type BackendF64 = MetricBackend<f64>;
pub type BackendF32 = MetricBackend<f32>;
pub type SolutionF64 = Solution<f64>;
pub type SolutionF32 = Solution<f32>;
pub type CoresetF64 = Coreset<f64>;
pub type CoresetF32 = Coreset<f32>;
pub type BuildConfigF64 = BuildConfig<f64>;
pub type BuildConfigF32 = BuildConfig<f32>;
