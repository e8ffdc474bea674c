use rand::Rng;

use super::graph::GraphMetric;
use super::Center;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;

/// Tolerance for metric-axiom spot checks.
pub const AXIOM_TOLERANCE: f64 = 1e-9;

/// Points in R^d under the l_p norm, p in [1, 2].
#[derive(Debug, Clone)]
pub struct Euclidean<T> {
    dim: usize,
    p: T,
    coords: Vec<T>,
}

impl<T: Scalar> Euclidean<T> {
    pub fn new(points: &[Vec<T>], p: T) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Input("no points".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Input("points have zero coordinates".into()));
        }
        if !(p >= T::one() && p <= T::lit(2.0)) {
            return Err(Error::Input(format!("norm exponent {p} outside [1, 2]")));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != dim {
                return Err(Error::Input(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    pt.len()
                )));
            }
            if pt.iter().any(|x| !x.is_finite()) {
                return Err(Error::Input(format!("point {i} has a non-finite coordinate")));
            }
            coords.extend_from_slice(pt);
        }
        Ok(Self { dim, p, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> T {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm_dist(&self, a: &[T], b: &[T]) -> T {
        lp_dist(a, b, self.p)
    }
}

pub(crate) fn lp_dist<T: Scalar>(a: &[T], b: &[T], p: T) -> T {
    if p == T::lit(2.0) {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y) * (x - y))
            .fold(T::zero(), |acc, v| acc + v)
            .sqrt()
    } else if p == T::one() {
        a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), |acc, v| acc + v)
    } else {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y).abs().powf(p))
            .fold(T::zero(), |acc, v| acc + v)
            .powf(p.recip())
    }
}

/// Explicit symmetric n x n distance matrix.
#[derive(Debug, Clone)]
pub struct DistanceMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Validates zero diagonal, symmetry and non-negativity exactly up to
    /// [`AXIOM_TOLERANCE`], then spot-checks the triangle inequality on
    /// seeded random triples.
    pub fn new(n: usize, data: Vec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("empty distance matrix".into()));
        }
        if data.len() != n * n {
            return Err(Error::Input(format!(
                "matrix has {} entries, expected {}",
                data.len(),
                n * n
            )));
        }
        let tol = T::lit(AXIOM_TOLERANCE);
        for i in 0..n {
            if data[i * n + i] != T::zero() {
                return Err(Error::Input(format!("dist({i},{i}) is not zero")));
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < T::zero() {
                    return Err(Error::Input(format!("dist({i},{j}) = {d} is not a finite non-negative value")));
                }
                if (d - data[j * n + i]).abs() > tol {
                    return Err(Error::Input(format!("matrix is asymmetric at ({i},{j})")));
                }
            }
        }
        let m = Self { n, data };
        m.spot_check_triangles(10_000, 0x7472_6961)?;
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        // read the upper triangle so asymmetry inside the tolerance cannot leak
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.data[a * self.n + b]
    }

    fn spot_check_triangles(&self, trials: usize, seed: u64) -> Result<()> {
        let n = self.n;
        let tol = T::lit(AXIOM_TOLERANCE);
        let mut rng = rng::stream(seed, 0);
        let exhaustive = n.checked_pow(3).is_some_and(|c| c <= trials);
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.get(a, b) > self.get(a, c) + self.get(c, b) + tol {
                return Err(Error::Input(format!("triangle inequality fails on ({a},{b},{c})")));
            }
            Ok(())
        };
        if exhaustive {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            for _ in 0..trials {
                let (a, b, c) = (
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                    rng.random_range(0..n),
                );
                check(a, b, c)?;
            }
        }
        Ok(())
    }
}

/// The three supported distance sources. Immutable once built; the graph
/// variant memoizes shortest-path rows behind insert-once cells.
#[derive(Debug)]
pub enum MetricBackend<T> {
    Euclidean(Euclidean<T>),
    Matrix(DistanceMatrix<T>),
    Graph(GraphMetric<T>),
}

impl<T: Scalar> Clone for MetricBackend<T> {
    fn clone(&self) -> Self {
        match self {
            Self::Euclidean(e) => Self::Euclidean(e.clone()),
            Self::Matrix(m) => Self::Matrix(m.clone()),
            Self::Graph(g) => Self::Graph(g.clone()),
        }
    }
}

impl<T: Scalar> MetricBackend<T> {
    pub fn euclidean(points: &[Vec<T>], p: T) -> Result<Self> {
        Euclidean::new(points, p).map(Self::Euclidean)
    }

    pub fn matrix(n: usize, data: Vec<T>) -> Result<Self> {
        DistanceMatrix::new(n, data).map(Self::Matrix)
    }

    pub fn graph(vertex_count: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        GraphMetric::new(vertex_count, edges).map(Self::Graph)
    }

    /// Number of addressable sites (points, matrix rows, or vertices).
    pub fn site_count(&self) -> usize {
        match self {
            Self::Euclidean(e) => e.len(),
            Self::Matrix(m) => m.len(),
            Self::Graph(g) => g.vertex_count(),
        }
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site < self.site_count() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(site))
        }
    }

    /// Distance between two sites. For graphs `a` is the Dijkstra source.
    pub fn dist(&self, a: usize, b: usize) -> Result<T> {
        self.check_site(a)?;
        self.check_site(b)?;
        if a == b {
            return Ok(T::zero());
        }
        match self {
            Self::Euclidean(e) => Ok(e.norm_dist(e.point(a), e.point(b))),
            Self::Matrix(m) => Ok(m.get(a, b)),
            Self::Graph(g) => g.dist(a, b),
        }
    }

    /// Distance from a site to a center. Graph queries run Dijkstra from the
    /// center, so a solution costs one shortest-path tree per center.
    pub fn dist_to(&self, site: usize, center: &Center<T>) -> Result<T> {
        match center {
            Center::Site(c) => self.dist(*c, site),
            Center::Coord(x) => match self {
                Self::Euclidean(e) => {
                    self.check_site(site)?;
                    if x.len() != e.dim() {
                        return Err(Error::Input(format!(
                            "center has {} coordinates, expected {}",
                            x.len(),
                            e.dim()
                        )));
                    }
                    Ok(e.norm_dist(e.point(site), x))
                }
                _ => Err(Error::Input(
                    "coordinate centers are only valid for Euclidean backends".into(),
                )),
            },
        }
    }

    /// Distance between two center descriptors.
    pub fn dist_centers(&self, a: &Center<T>, b: &Center<T>) -> Result<T> {
        match (a, b) {
            (Center::Site(x), Center::Site(y)) => self.dist(*x, *y),
            (Center::Site(x), c) | (c, Center::Site(x)) => self.dist_to(*x, c),
            (Center::Coord(x), Center::Coord(y)) => match self {
                Self::Euclidean(e) => {
                    if x.len() != e.dim() || y.len() != e.dim() {
                        return Err(Error::Input("center dimension mismatch".into()));
                    }
                    Ok(e.norm_dist(x, y))
                }
                _ => Err(Error::Input(
                    "coordinate centers are only valid for Euclidean backends".into(),
                )),
            },
        }
    }

    pub fn check_center(&self, center: &Center<T>) -> Result<()> {
        match (center, self) {
            (Center::Site(s), _) => self.check_site(*s),
            (Center::Coord(x), Self::Euclidean(e)) if x.len() == e.dim() => Ok(()),
            (Center::Coord(_), Self::Euclidean(_)) => {
                Err(Error::Input("center dimension mismatch".into()))
            }
            (Center::Coord(_), _) => Err(Error::Input(
                "coordinate centers are only valid for Euclidean backends".into(),
            )),
        }
    }

    pub fn as_euclidean(&self) -> Option<&Euclidean<T>> {
        match self {
            Self::Euclidean(e) => Some(e),
            _ => None,
        }
    }
}
