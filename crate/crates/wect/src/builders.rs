//! Builders turning grayscale images into weighted complexes, plus
//! direction sets for transforms.
//!
//! Pixels become vertices on the integer grid, recentered so the image's
//! centroid is the origin and scaled by `1 / max(R - 1, C - 1, 1)` so the
//! embedding fits a fixed box regardless of resolution. Two complex shapes
//! are offered per image: a triangulation that splits every pixel square
//! along the down-right diagonal, and a cubical complex that keeps the
//! squares whole. In both, every cell's weight is the maximum intensity of
//! its vertices, so darker structure enters the filtration exactly when its
//! brightest pixel does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::complex::{CellBlock, WeightedComplex};
use crate::tensor::{IndexTensor, Tensor};

/// Errors from image handling and complex construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("direction sets need an ambient dimension of at least 2, got {0}")]
    AmbientDim(usize),
    #[error("directions must be unit vectors: row {row} has norm {norm}")]
    NotUnit { row: usize, norm: f64 },
    #[error("direction set must be a 2-dimensional tensor, got shape {0:?}")]
    BadDirectionShape(Vec<usize>),
    #[error("image has {image} pixels but the complex has {complex} vertices")]
    VertexCountMismatch { image: usize, complex: usize },
    #[error("filter values must be finite")]
    NonFinite,
}

/// A grayscale image with intensities normalized to `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayscaleImage {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GrayscaleImage {
    /// Wraps row-major intensities; all must be finite and in `[0, 1]`.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<GrayscaleImage, BuildError> {
        if rows == 0 || cols == 0 {
            return Err(BuildError::InvalidImage(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(BuildError::InvalidImage(format!(
                "{rows}x{cols} image needs {} samples, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| !x.is_finite() || !(0.0..=1.0).contains(*x)) {
            return Err(BuildError::InvalidImage(format!(
                "intensity {bad} outside [0, 1]"
            )));
        }
        Ok(GrayscaleImage { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Intensity at row `r`, column `c`.
    pub fn intensity(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// A set of unit direction vectors, one per row of a `(count, n)` tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    directions: Tensor,
}

impl DirectionSet {
    /// Wraps a `(count, n)` tensor of directions, requiring every row to be
    /// a unit vector to within `1e-12`.
    pub fn new(directions: Tensor) -> Result<DirectionSet, BuildError> {
        if directions.ndim() != 2 {
            return Err(BuildError::BadDirectionShape(directions.shape().to_vec()));
        }
        for i in 0..directions.shape()[0] {
            let norm = directions.row(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
                return Err(BuildError::NotUnit { row: i, norm });
            }
        }
        Ok(DirectionSet { directions })
    }

    /// Number of directions.
    pub fn count(&self) -> usize {
        self.directions.shape()[0]
    }

    /// Ambient dimension the directions live in.
    pub fn ambient_dim(&self) -> usize {
        self.directions.shape()[1]
    }

    pub fn as_tensor(&self) -> &Tensor {
        &self.directions
    }

    /// Direction `p` as a slice of `n` components.
    pub fn row(&self, p: usize) -> &[f64] {
        self.directions.row(p)
    }
}

/// Builds `count` unit directions in dimension `n >= 2`. In the plane the
/// directions are evenly spaced on the circle starting at `(1, 0)`; in
/// higher dimensions they are drawn by normalizing standard Gaussian
/// samples from a generator seeded with `seed`, so results are reproducible
/// across runs and platforms.
pub fn directions(n: usize, count: usize, seed: u64) -> Result<DirectionSet, BuildError> {
    if n < 2 {
        return Err(BuildError::AmbientDim(n));
    }
    let mut data = Vec::with_capacity(count * n);
    if n == 2 {
        for p in 0..count {
            let theta = 2.0 * std::f64::consts::PI * p as f64 / count as f64;
            data.push(theta.cos());
            data.push(theta.sin());
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            loop {
                let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                // Norms this small are astronomically unlikely; resampling
                // keeps the normalization well-conditioned anyway.
                if norm > 1e-8 {
                    data.extend(v.iter().map(|x| x / norm));
                    break;
                }
            }
        }
    }
    DirectionSet::new(Tensor::from_vec(&[count, n], data).expect("direction tensor"))
}

/// Shared grid bookkeeping for the two image builders: which pixels
/// survive the threshold, their new indices, coordinates and weights.
struct GridVertices {
    /// New index per pixel, or `usize::MAX` for pixels dropped by the
    /// threshold.
    index: Vec<usize>,
    coords: Vec<f64>,
    weights: Vec<f64>,
    kept: usize,
}

impl GridVertices {
    fn build(img: &GrayscaleImage, threshold: Option<f64>) -> GridVertices {
        let (rows, cols) = (img.rows(), img.cols());
        let scale = 1.0 / (rows.max(cols) - 1).max(1) as f64;
        let center_c = (cols - 1) as f64 / 2.0;
        let center_r = (rows - 1) as f64 / 2.0;
        let mut index = vec![usize::MAX; rows * cols];
        let mut coords = Vec::new();
        let mut weights = Vec::new();
        let mut kept = 0;
        for r in 0..rows {
            for c in 0..cols {
                let w = img.intensity(r, c);
                if threshold.map_or(false, |t| w < t) {
                    continue;
                }
                index[r * cols + c] = kept;
                kept += 1;
                // Axis 0 runs along columns, axis 1 down the rows, both
                // centered on the image and scaled to a fixed box.
                coords.push((c as f64 - center_c) * scale);
                coords.push((r as f64 - center_r) * scale);
                weights.push(w);
            }
        }
        GridVertices {
            index,
            coords,
            weights,
            kept,
        }
    }

    fn keeps(&self, cols: usize, r: usize, c: usize) -> bool {
        self.index[r * cols + c] != usize::MAX
    }
}

/// Collects cells of one dimension: rows of new vertex indices plus the
/// max-of-vertices weight.
struct CellCollector {
    width: usize,
    rows: Vec<usize>,
    weights: Vec<f64>,
}

impl CellCollector {
    fn new(width: usize, capacity: usize) -> CellCollector {
        CellCollector {
            width,
            rows: Vec::with_capacity(capacity * width),
            weights: Vec::with_capacity(capacity),
        }
    }

    /// Pushes the cell with the given grid pixels if all of them survived.
    fn push(&mut self, img: &GrayscaleImage, grid: &GridVertices, pixels: &[(usize, usize)]) {
        debug_assert_eq!(pixels.len(), self.width);
        let cols = img.cols();
        if !pixels.iter().all(|&(r, c)| grid.keeps(cols, r, c)) {
            return;
        }
        let mut weight = f64::NEG_INFINITY;
        for &(r, c) in pixels {
            self.rows.push(grid.index[r * cols + c]);
            weight = weight.max(img.intensity(r, c));
        }
        self.weights.push(weight);
    }

    fn into_block(self, dim: usize, vertex_count: usize) -> Option<CellBlock> {
        if self.weights.is_empty() {
            return None;
        }
        let count = self.weights.len();
        let vertices = IndexTensor::new(&[count, self.width], self.rows, vertex_count)
            .expect("grid cell indices are in range");
        let weights = Tensor::from_vec(&[count], self.weights).expect("cell weights");
        CellBlock::new(dim, vertices, weights).ok()
    }
}

fn assemble(grid: GridVertices, blocks: Vec<Option<CellBlock>>) -> WeightedComplex {
    let coords = Tensor::from_vec(&[grid.kept, 2], grid.coords).expect("vertex coordinates");
    let weights = Tensor::from_vec(&[grid.kept], grid.weights).expect("vertex weights");
    WeightedComplex::new(Some(coords), weights, blocks.into_iter().flatten().collect())
        .expect("image complexes are well-formed")
}

/// Triangulates an image: pixels are vertices; every pixel square is split
/// along its down-right diagonal into two triangles, with the connecting
/// edges (horizontal, vertical and that diagonal). With a threshold, only
/// pixels of intensity `>= threshold` survive, and a cell survives when all
/// of its vertices do.
pub fn freudenthal_from_image(img: &GrayscaleImage, threshold: Option<f64>) -> WeightedComplex {
    let grid = GridVertices::build(img, threshold);
    let (rows, cols) = (img.rows(), img.cols());
    let squares = rows.saturating_sub(1) * cols.saturating_sub(1);

    let mut edges = CellCollector::new(2, rows * cols.saturating_sub(1) + cols * rows.saturating_sub(1) + squares);
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            edges.push(img, &grid, &[(r, c), (r, c + 1)]);
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            edges.push(img, &grid, &[(r, c), (r + 1, c)]);
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            edges.push(img, &grid, &[(r, c), (r + 1, c + 1)]);
        }
    }

    let mut triangles = CellCollector::new(3, 2 * squares);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            // Lower-left and upper-right triangle of the square, both
            // sharing the down-right diagonal.
            triangles.push(img, &grid, &[(r, c), (r + 1, c), (r + 1, c + 1)]);
            triangles.push(img, &grid, &[(r, c), (r, c + 1), (r + 1, c + 1)]);
        }
    }

    let blocks = vec![
        edges.into_block(1, grid.kept),
        triangles.into_block(2, grid.kept),
    ];
    assemble(grid, blocks)
}

/// Builds the cubical complex of an image: pixels are vertices, adjacent
/// pixels are joined by axis-aligned edges, and each pixel square is one
/// 2-cube with corners listed in corner order (origin, +axis0, +axis1,
/// both). Thresholding works as in [`freudenthal_from_image`].
pub fn cubical_from_image(img: &GrayscaleImage, threshold: Option<f64>) -> WeightedComplex {
    let grid = GridVertices::build(img, threshold);
    let (rows, cols) = (img.rows(), img.cols());
    let square_count = rows.saturating_sub(1) * cols.saturating_sub(1);

    let mut edges = CellCollector::new(2, rows * cols.saturating_sub(1) + cols * rows.saturating_sub(1));
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            edges.push(img, &grid, &[(r, c), (r, c + 1)]);
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            edges.push(img, &grid, &[(r, c), (r + 1, c)]);
        }
    }

    let mut squares = CellCollector::new(4, square_count);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            // Corner order: bit 0 moves along axis 0 (columns), bit 1 along
            // axis 1 (rows).
            squares.push(
                img,
                &grid,
                &[(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)],
            );
        }
    }

    let blocks = vec![
        edges.into_block(1, grid.kept),
        squares.into_block(2, grid.kept),
    ];
    assemble(grid, blocks)
}

/// The intensity filter: one filter column assigning each vertex its pixel
/// intensity. The complex must have exactly one vertex per pixel, i.e. it
/// must have been built from this image without a threshold.
pub fn intensity_filter(
    img: &GrayscaleImage,
    complex: &WeightedComplex,
) -> Result<crate::engine::FilterSet, BuildError> {
    if complex.vertex_count() != img.rows() * img.cols() {
        return Err(BuildError::VertexCountMismatch {
            image: img.rows() * img.cols(),
            complex: complex.vertex_count(),
        });
    }
    crate::engine::FilterSet::from_column(img.data())
        .map_err(|_| BuildError::NonFinite)
}
