//! The discretization grid and the vectorized curve computation.
//!
//! A weighted Euler characteristic function tracks, along a filter `f` on
//! the vertices, the weighted Euler characteristic of the sublevel complex
//! `F(t) = { cells whose vertices all have f <= t }` — each cell enters at
//! the maximum filter value of its vertices. [`compute_wecfs`] evaluates
//! these curves for a whole bank of filters at once on a shared grid of
//! `numvals` evenly spaced heights covering `[-maxheight, +maxheight]`:
//!
//! 1. every filter value is mapped to its grid bin (the first height at or
//!    above it),
//! 2. each cell's entry bin is the maximum of its vertices' bins, taken for
//!    all filters at once by gathering vertex bins per cell and reducing,
//! 3. signed cell weights are scatter-added into a per-filter histogram of
//!    entry bins, and
//! 4. a running sum over bins turns the histogram into the curves.
//!
//! The work is `Θ(total cell entries × (width + numvals))` — no per-height
//! rescan of the complex. The transform ([`compute_wect`]) is the same
//! computation with one height filter `v ↦ <v, s>` per direction `s`.

use thiserror::Error;

use crate::builders::DirectionSet;
use crate::complex::WeightedComplex;
use crate::tensor::{Tensor, TensorError};

/// Errors from grid construction and curve evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    /// Grids need at least two heights so that both endpoints exist.
    #[error("numvals must be at least 2, got {0}")]
    BadNumvals(usize),
    #[error("maxheight must be finite and nonnegative, got {0}")]
    BadMaxheight(f64),
    /// The queried height lies outside `[-maxheight, +maxheight]`.
    #[error("height {t} outside the grid range [-{maxheight}, {maxheight}]")]
    HeightOutOfRange { t: f64, maxheight: f64 },
    /// The queried bin does not exist on this grid.
    #[error("grid index {q} out of range for {numvals} heights")]
    GridIndexOutOfRange { q: usize, numvals: usize },
    #[error("filter values must be finite")]
    NonFiniteFilter,
    #[error("filter set must be a 2-dimensional tensor, got shape {0:?}")]
    BadFilterShape(Vec<usize>),
    #[error("complex has {complex} vertices but the filter set has {filters} rows")]
    FilterRows { complex: usize, filters: usize },
    #[error("complex has no coordinates; height filters need an embedding")]
    MissingCoordinates,
    #[error("complex is embedded in dimension {complex} but directions have dimension {directions}")]
    AmbientDimMismatch { complex: usize, directions: usize },
    /// An underlying tensor operation rejected its input — typically a cell
    /// referencing a vertex index beyond the vertex count.
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Relative half-width of the snapping band around exact grid heights.
///
/// Mapping a height to its bin divides by the grid step, and heights that
/// lie exactly on a grid line can land a hair above or below an integer
/// after rounding. Values within this relative distance of an integer are
/// treated as that integer so that `alpha(beta(q)) == q` holds for every
/// bin. The band is far below the grid step, so no other height is
/// affected.
const SNAP: f64 = 1e-12;

/// An evenly spaced grid of `numvals` heights on `[-maxheight, +maxheight]`.
///
/// Bin `q` sits at the height given by [`DiscretizationGrid::beta`]; a real
/// height `t` maps to the first bin at or above it via
/// [`DiscretizationGrid::alpha`]. The two are adjoint:
/// `alpha(t) <= q` exactly when `t <= beta(q)`, so evaluating a curve at
/// the grid heights loses nothing that happens between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationGrid {
    maxheight: f64,
    numvals: usize,
}

impl DiscretizationGrid {
    /// A grid with an explicitly chosen height range.
    pub fn with_maxheight(maxheight: f64, numvals: usize) -> Result<DiscretizationGrid, EngineError> {
        if numvals < 2 {
            return Err(EngineError::BadNumvals(numvals));
        }
        if !maxheight.is_finite() || maxheight < 0.0 {
            return Err(EngineError::BadMaxheight(maxheight));
        }
        Ok(DiscretizationGrid { maxheight, numvals })
    }

    /// A grid just covering every value of a filter set:
    /// `maxheight = max |value|`, or 0 for an empty set.
    pub fn from_filters(filters: &FilterSet, numvals: usize) -> Result<DiscretizationGrid, EngineError> {
        DiscretizationGrid::with_maxheight(filters.max_abs(), numvals)
    }

    pub fn maxheight(&self) -> f64 {
        self.maxheight
    }

    pub fn numvals(&self) -> usize {
        self.numvals
    }

    /// The height of bin `q`: the grid runs from `-maxheight` (bin 0) to
    /// `+maxheight` (bin `numvals - 1`) in equal steps. The endpoints are
    /// returned exactly.
    pub fn beta(&self, q: usize) -> Result<f64, EngineError> {
        if q >= self.numvals {
            return Err(EngineError::GridIndexOutOfRange {
                q,
                numvals: self.numvals,
            });
        }
        Ok(self.height_of(q))
    }

    fn height_of(&self, q: usize) -> f64 {
        if q == 0 || self.maxheight == 0.0 {
            return -self.maxheight;
        }
        if q == self.numvals - 1 {
            return self.maxheight;
        }
        q as f64 * (2.0 * self.maxheight) / (self.numvals - 1) as f64 - self.maxheight
    }

    /// All grid heights, in order.
    pub fn heights(&self) -> Vec<f64> {
        (0..self.numvals).map(|q| self.height_of(q)).collect()
    }

    /// The first bin whose height is at or above `t`. Heights up to `1e-9`
    /// outside the range are accepted and clamped; farther ones are errors.
    pub fn alpha(&self, t: f64) -> Result<usize, EngineError> {
        let slack = 1e-9;
        if !t.is_finite() || t < -self.maxheight - slack || t > self.maxheight + slack {
            return Err(EngineError::HeightOutOfRange {
                t,
                maxheight: self.maxheight,
            });
        }
        Ok(self.bin_of(t))
    }

    /// Total version of [`DiscretizationGrid::alpha`]: every real height
    /// maps to a bin, heights beyond the range clamp to the end bins. The
    /// engine applies this to filter values so that an explicitly chosen
    /// `maxheight` smaller than the data simply saturates.
    pub fn bin_of(&self, t: f64) -> usize {
        if self.maxheight == 0.0 {
            return 0;
        }
        let steps = (self.numvals - 1) as f64;
        let mut x = steps * (self.maxheight + t) / (2.0 * self.maxheight);
        // Snap values that are numerically on a grid line; see SNAP.
        let band = SNAP * steps;
        if (x - x.round()).abs() <= band {
            x -= band;
        }
        let q = x.ceil();
        if q <= 0.0 {
            0
        } else if q >= steps {
            self.numvals - 1
        } else {
            q as usize
        }
    }
}

/// A bank of vertex filters: a `(vertex count, filter count)` tensor whose
/// column `p` assigns filter `p`'s value to every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    fvals: Tensor,
}

impl FilterSet {
    /// Wraps a `(k0, m)` tensor of finite filter values.
    pub fn new(fvals: Tensor) -> Result<FilterSet, EngineError> {
        if fvals.ndim() != 2 {
            return Err(EngineError::BadFilterShape(fvals.shape().to_vec()));
        }
        if fvals.data().iter().any(|x| !x.is_finite()) {
            return Err(EngineError::NonFiniteFilter);
        }
        Ok(FilterSet { fvals })
    }

    /// A single-filter set from one value per vertex.
    pub fn from_column(values: &[f64]) -> Result<FilterSet, EngineError> {
        FilterSet::new(Tensor::from_vec(&[values.len(), 1], values.to_vec())?)
    }

    /// Height filters for a direction set: filter `p` maps vertex `a` to
    /// the inner product of its coordinates with direction `p`, computed as
    /// one matrix product `coords · directions^T`.
    pub fn from_directions(
        complex: &WeightedComplex,
        directions: &DirectionSet,
    ) -> Result<FilterSet, EngineError> {
        let coords = complex.coords().ok_or(EngineError::MissingCoordinates)?;
        let n = coords.shape()[1];
        if directions.ambient_dim() != n {
            return Err(EngineError::AmbientDimMismatch {
                complex: n,
                directions: directions.ambient_dim(),
            });
        }
        let fvals = coords.matmul(&directions.as_tensor().transpose()?)?;
        FilterSet::new(fvals)
    }

    /// Number of vertices the filters are defined on.
    pub fn vertex_count(&self) -> usize {
        self.fvals.shape()[0]
    }

    /// Number of filters in the bank.
    pub fn filter_count(&self) -> usize {
        self.fvals.shape()[1]
    }

    pub fn fvals(&self) -> &Tensor {
        &self.fvals
    }

    /// Value of filter `p` on vertex `a`.
    pub fn value(&self, a: usize, p: usize) -> f64 {
        self.fvals.at2(a, p)
    }

    /// Largest absolute filter value, or 0 for an empty set.
    pub fn max_abs(&self) -> f64 {
        self.fvals.data().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// The curves produced by one engine or oracle run: a
/// `(filter count, numvals)` matrix whose entry `(p, q)` is the weighted
/// Euler characteristic of filter `p`'s sublevel complex at grid height
/// `q`, together with the grid the heights live on.
#[derive(Debug, Clone, PartialEq)]
pub struct WecfMatrix {
    values: Tensor,
    grid: DiscretizationGrid,
}

impl WecfMatrix {
    pub(crate) fn from_parts(values: Tensor, grid: DiscretizationGrid) -> WecfMatrix {
        debug_assert_eq!(values.ndim(), 2);
        debug_assert_eq!(values.shape()[1], grid.numvals());
        WecfMatrix { values, grid }
    }

    pub fn values(&self) -> &Tensor {
        &self.values
    }

    pub fn grid(&self) -> &DiscretizationGrid {
        &self.grid
    }

    pub fn filter_count(&self) -> usize {
        self.values.shape()[0]
    }

    pub fn numvals(&self) -> usize {
        self.grid.numvals()
    }

    /// Curve value of filter `p` at grid bin `q`.
    pub fn value(&self, p: usize, q: usize) -> f64 {
        self.values.at2(p, q)
    }

    /// The whole curve of filter `p`.
    pub fn curve(&self, p: usize) -> &[f64] {
        self.values.row(p)
    }
}

/// Evaluates the weighted Euler characteristic function of every filter in
/// `filters` on a fresh grid of `numvals` heights covering the filters'
/// value range.
pub fn compute_wecfs(
    complex: &WeightedComplex,
    filters: &FilterSet,
    numvals: usize,
) -> Result<WecfMatrix, EngineError> {
    let grid = DiscretizationGrid::from_filters(filters, numvals)?;
    compute_wecfs_on_grid(complex, filters, &grid)
}

/// [`compute_wecfs`] on a caller-supplied grid. Filter values beyond the
/// grid's range saturate into the end bins.
pub fn compute_wecfs_on_grid(
    complex: &WeightedComplex,
    filters: &FilterSet,
    grid: &DiscretizationGrid,
) -> Result<WecfMatrix, EngineError> {
    if filters.vertex_count() != complex.vertex_count() {
        return Err(EngineError::FilterRows {
            complex: complex.vertex_count(),
            filters: filters.vertex_count(),
        });
    }
    let m = filters.filter_count();
    let numvals = grid.numvals();
    if m == 0 {
        let values = Tensor::from_vec(&[0, numvals], Vec::new())?;
        return Ok(WecfMatrix::from_parts(values, *grid));
    }

    // Bin of every (vertex, filter) pair.
    let g = *grid;
    let vertex_bins = filters
        .fvals()
        .map_to_indices(numvals, move |t| g.bin_of(t))?;

    // Histogram of signed weights by entry bin, one row per filter.
    let mut diff = Tensor::zeros(&[m, numvals])?;
    diff.scatter_add(&vertex_bins.transpose()?, complex.vertex_weights())?;
    for block in complex.cell_blocks() {
        // A cell's entry bin is the max of its vertices' bins, per filter.
        let cell_bins = vertex_bins.index_rows(block.vertices())?.rmax(1)?;
        let signed = if block.dim() % 2 == 0 {
            block.weights().clone()
        } else {
            block.weights().map(|w| -w)
        };
        diff.scatter_add(&cell_bins.transpose()?, &signed)?;
    }

    Ok(WecfMatrix::from_parts(diff.cumsum()?, *grid))
}

/// The weighted Euler characteristic transform: the curves of the height
/// filters of `directions`, on a grid covering their value range.
pub fn compute_wect(
    complex: &WeightedComplex,
    directions: &DirectionSet,
    numvals: usize,
) -> Result<WecfMatrix, EngineError> {
    let filters = FilterSet::from_directions(complex, directions)?;
    compute_wecfs(complex, &filters, numvals)
}

/// [`compute_wect`] on a caller-supplied grid.
pub fn compute_wect_on_grid(
    complex: &WeightedComplex,
    directions: &DirectionSet,
    grid: &DiscretizationGrid,
) -> Result<WecfMatrix, EngineError> {
    let filters = FilterSet::from_directions(complex, directions)?;
    compute_wecfs_on_grid(complex, &filters, grid)
}
