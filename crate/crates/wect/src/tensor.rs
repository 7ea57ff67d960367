//! Dense row-major tensors and the vectorized operations the curve engine
//! is built from.
//!
//! Two tensor types are provided: [`Tensor`] holds `f64` entries and
//! [`IndexTensor`] holds `usize` entries together with an exclusive upper
//! `bound` that every entry is checked against at construction. Both are
//! dense, row-major, and between one and three dimensions; individual
//! dimensions may be zero so that empty inputs (no cells, no filters) flow
//! through the engine without special cases.
//!
//! The operation set is deliberately small: allocation ([`Tensor::zeros`]),
//! elementwise [`Tensor::map`], [`Tensor::matmul`], row-wise prefix sums
//! ([`Tensor::cumsum`]), maximum-reduction over one axis (`rmax`), gathering
//! whole rows through an index tensor (`index_rows`), and scattered
//! accumulation ([`Tensor::scatter_add`]), plus 2-D `transpose` as plumbing.
//! Everything the engine does is expressed in these calls, and every kernel
//! parallelizes over independent output rows, so results are deterministic
//! and identical with and without the `parallel` feature.

use crate::parallel::*;
use thiserror::Error;

/// Errors reported by tensor constructors and operations.
///
/// Operations validate their inputs completely before touching any output,
/// so a returned error never leaves a tensor partially updated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    /// A shape was empty, had more than three dimensions, or had a zero
    /// entry where a positive one is required.
    #[error("invalid shape {shape:?}: {reason}")]
    InvalidShape { shape: Vec<usize>, reason: &'static str },
    /// The provided buffer does not hold exactly `shape` many entries.
    #[error("data length {len} does not match shape {shape:?}")]
    LengthMismatch { shape: Vec<usize>, len: usize },
    /// Two operands have incompatible shapes for the named operation.
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    /// The reduction or indexing axis does not exist for this tensor.
    #[error("axis {axis} out of range for a {ndim}-dimensional tensor")]
    AxisOutOfRange { axis: usize, ndim: usize },
    /// An index entry is not strictly below the required bound.
    #[error("index {value} out of range for domain of size {bound}")]
    IndexOutOfRange { value: usize, bound: usize },
}

type Result<T> = std::result::Result<T, TensorError>;

/// Row count per parallel work unit for elementwise kernels.
const ELEMENTWISE_CHUNK: usize = 8192;

fn check_shape(shape: &[usize]) -> Result<()> {
    if shape.is_empty() || shape.len() > 3 {
        return Err(TensorError::InvalidShape {
            shape: shape.to_vec(),
            reason: "tensors must have between one and three dimensions",
        });
    }
    Ok(())
}

fn num_entries(shape: &[usize]) -> usize {
    shape.iter().product()
}

/// Row-major offset bookkeeping for an axis reduction: the tensor is viewed
/// as `outer` blocks of `axis_len` rows of `inner` contiguous entries.
fn axis_split(shape: &[usize], axis: usize) -> (usize, usize, usize) {
    let outer = shape[..axis].iter().product();
    let inner = shape[axis + 1..].iter().product();
    (outer, shape[axis], inner)
}

fn rmax_impl<T: Copy + PartialOrd + Send + Sync>(
    shape: &[usize],
    data: &[T],
    axis: usize,
) -> Result<(Vec<usize>, Vec<T>)> {
    if axis >= shape.len() {
        return Err(TensorError::AxisOutOfRange {
            axis,
            ndim: shape.len(),
        });
    }
    if shape.len() == 1 {
        return Err(TensorError::InvalidShape {
            shape: shape.to_vec(),
            reason: "reducing a 1-dimensional tensor would leave no dimensions",
        });
    }
    let (outer, axis_len, inner) = axis_split(shape, axis);
    if axis_len == 0 {
        return Err(TensorError::InvalidShape {
            shape: shape.to_vec(),
            reason: "cannot take a maximum over an empty axis",
        });
    }
    let mut out_shape = shape.to_vec();
    out_shape.remove(axis);
    let total = outer * inner;
    let mut out = Vec::with_capacity(total);
    if total > 0 {
        // axis_len >= 1 and total > 0 together make `data` nonempty.
        out.resize(total, data[0]);
        out.par_chunks_mut(inner).enumerate().for_each(|(o, dst)| {
            let base = o * axis_len * inner;
            dst.copy_from_slice(&data[base..base + inner]);
            for a in 1..axis_len {
                let row = &data[base + a * inner..base + (a + 1) * inner];
                for (m, &v) in dst.iter_mut().zip(row) {
                    if v > *m {
                        *m = v;
                    }
                }
            }
        });
    }
    Ok((out_shape, out))
}

fn transpose_impl<T: Copy + Send + Sync>(rows: usize, cols: usize, data: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(data.len());
    if data.is_empty() {
        return out;
    }
    // Written column-by-column of the source so the output is filled in
    // order; rows of the output are independent.
    out.resize(data.len(), data[0]);
    out.par_chunks_mut(rows).enumerate().for_each(|(c, dst)| {
        for (r, slot) in dst.iter_mut().enumerate() {
            *slot = data[r * cols + c];
        }
    });
    out
}

/// Gathers whole rows of `src` (viewed as `src_rows` rows of `row_len`
/// entries) at the positions listed in `idx`, in `idx`'s row-major order.
fn gather_rows_impl<T: Copy + Send + Sync>(
    src: &[T],
    src_rows: usize,
    row_len: usize,
    idx: &IndexTensor,
) -> Result<Vec<T>> {
    idx.check_bound(src_rows)?;
    let picks = idx.data.len();
    let mut out = Vec::with_capacity(picks * row_len);
    if picks == 0 || row_len == 0 {
        return Ok(out);
    }
    out.resize(picks * row_len, src[0]);
    out.par_chunks_mut(row_len).enumerate().for_each(|(n, dst)| {
        let start = idx.data[n] * row_len;
        dst.copy_from_slice(&src[start..start + row_len]);
    });
    Ok(out)
}

/// A dense `f64` tensor with one to three dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    /// Allocates a zero-filled tensor. Every dimension must be positive;
    /// use [`Tensor::from_vec`] with an empty buffer for degenerate shapes.
    pub fn zeros(shape: &[usize]) -> Result<Tensor> {
        check_shape(shape)?;
        if shape.contains(&0) {
            return Err(TensorError::InvalidShape {
                shape: shape.to_vec(),
                reason: "zeros requires every dimension to be positive",
            });
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data: vec![0.0; num_entries(shape)],
        })
    }

    /// Wraps an existing row-major buffer. Dimensions may be zero as long as
    /// the buffer length matches the shape's entry count.
    pub fn from_vec(shape: &[usize], data: Vec<f64>) -> Result<Tensor> {
        check_shape(shape)?;
        if data.len() != num_entries(shape) {
            return Err(TensorError::LengthMismatch {
                shape: shape.to_vec(),
                len: data.len(),
            });
        }
        Ok(Tensor {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    /// Total number of entries.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// The underlying row-major buffer.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Entry `(i, j)` of a 2-D tensor.
    pub fn at2(&self, i: usize, j: usize) -> f64 {
        debug_assert_eq!(self.ndim(), 2);
        self.data[i * self.shape[1] + j]
    }

    /// Row `i` of a 2-D tensor as a contiguous slice.
    pub fn row(&self, i: usize) -> &[f64] {
        debug_assert_eq!(self.ndim(), 2);
        let cols = self.shape[1];
        &self.data[i * cols..(i + 1) * cols]
    }

    /// Applies `f` to every entry, producing a tensor of the same shape.
    pub fn map<F>(&self, f: F) -> Tensor
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        let mut data = self.data.clone();
        if !data.is_empty() {
            data.par_chunks_mut(ELEMENTWISE_CHUNK).for_each(|chunk| {
                for x in chunk {
                    *x = f(*x);
                }
            });
        }
        Tensor {
            shape: self.shape.clone(),
            data,
        }
    }

    /// Applies `f` to every entry, producing index entries strictly below
    /// `bound`; any value `f` maps outside `0..bound` is reported as an
    /// error. Used to turn filter values into discretization bins.
    pub fn map_to_indices<F>(&self, bound: usize, f: F) -> Result<IndexTensor>
    where
        F: Fn(f64) -> usize + Sync + Send,
    {
        let mut data = vec![0usize; self.data.len()];
        if !data.is_empty() {
            data.par_chunks_mut(ELEMENTWISE_CHUNK)
                .zip(self.data.par_chunks(ELEMENTWISE_CHUNK))
                .for_each(|(dst, src)| {
                    for (slot, &x) in dst.iter_mut().zip(src) {
                        *slot = f(x);
                    }
                });
        }
        IndexTensor::new(&self.shape, data, bound)
    }

    /// Matrix product of two 2-D tensors.
    pub fn matmul(&self, rhs: &Tensor) -> Result<Tensor> {
        if self.ndim() != 2 || rhs.ndim() != 2 || self.shape[1] != rhs.shape[0] {
            return Err(TensorError::ShapeMismatch {
                op: "matmul",
                left: self.shape.clone(),
                right: rhs.shape.clone(),
            });
        }
        let (m0, m1) = (self.shape[0], self.shape[1]);
        let m2 = rhs.shape[1];
        let mut data = vec![0.0; m0 * m2];
        if m2 > 0 && !data.is_empty() {
            data.par_chunks_mut(m2).enumerate().for_each(|(i, out_row)| {
                for k in 0..m1 {
                    let a = self.data[i * m1 + k];
                    let rhs_row = &rhs.data[k * m2..(k + 1) * m2];
                    for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                        *o += a * b;
                    }
                }
            });
        }
        Tensor::from_vec(&[m0, m2], data)
    }

    /// Transpose of a 2-D tensor.
    pub fn transpose(&self) -> Result<Tensor> {
        if self.ndim() != 2 {
            return Err(TensorError::InvalidShape {
                shape: self.shape.clone(),
                reason: "transpose requires a 2-dimensional tensor",
            });
        }
        let data = transpose_impl(self.shape[0], self.shape[1], &self.data);
        Tensor::from_vec(&[self.shape[1], self.shape[0]], data)
    }

    /// Prefix sums along axis 1 of a 2-D tensor: entry `(i, j)` of the
    /// result is the sum of entries `(i, 0..=j)`.
    pub fn cumsum(&self) -> Result<Tensor> {
        if self.ndim() != 2 {
            return Err(TensorError::InvalidShape {
                shape: self.shape.clone(),
                reason: "cumsum requires a 2-dimensional tensor",
            });
        }
        let cols = self.shape[1];
        let mut data = self.data.clone();
        if cols > 0 && !data.is_empty() {
            data.par_chunks_mut(cols).for_each(|row| {
                let mut acc = 0.0;
                for x in row {
                    acc += *x;
                    *x = acc;
                }
            });
        }
        Ok(Tensor {
            shape: self.shape.clone(),
            data,
        })
    }

    /// Maximum over one axis; the result drops that axis.
    pub fn rmax(&self, axis: usize) -> Result<Tensor> {
        let (shape, data) = rmax_impl(&self.shape, &self.data, axis)?;
        Ok(Tensor { shape, data })
    }

    /// Gathers rows of a 2-D tensor: with `self` of shape `(r, c)` and `idx`
    /// of shape `(a, b)`, the result has shape `(a, b, c)` and entry
    /// `(i, j, ..)` is row `idx[i, j]` of `self`.
    pub fn index_rows(&self, idx: &IndexTensor) -> Result<Tensor> {
        if self.ndim() != 2 || idx.ndim() != 2 {
            return Err(TensorError::ShapeMismatch {
                op: "index_rows",
                left: self.shape.clone(),
                right: idx.shape.clone(),
            });
        }
        let row_len = self.shape[1];
        let data = gather_rows_impl(&self.data, self.shape[0], row_len, idx)?;
        Tensor::from_vec(&[idx.shape[0], idx.shape[1], row_len], data)
    }

    /// Scattered accumulation: with `self` of shape `(r, c)`, `idx` of shape
    /// `(r, n)` holding column indices below `c`, and `values` of length
    /// `n`, adds `values[k]` to entry `(i, idx[i, k])` for every row `i` and
    /// every `k`. Entries hit several times accumulate; additions within a
    /// row happen in ascending `k`, so the result is deterministic.
    pub fn scatter_add(&mut self, idx: &IndexTensor, values: &Tensor) -> Result<()> {
        if self.ndim() != 2 || idx.ndim() != 2 || idx.shape[0] != self.shape[0] {
            return Err(TensorError::ShapeMismatch {
                op: "scatter_add",
                left: self.shape.clone(),
                right: idx.shape.clone(),
            });
        }
        if values.ndim() != 1 || values.shape[0] != idx.shape[1] {
            return Err(TensorError::ShapeMismatch {
                op: "scatter_add",
                left: idx.shape.clone(),
                right: values.shape.clone(),
            });
        }
        let cols = self.shape[1];
        idx.check_bound(cols)?;
        let picks = idx.shape[1];
        if self.data.is_empty() || picks == 0 {
            return Ok(());
        }
        let vals = &values.data;
        self.data
            .par_chunks_mut(cols)
            .zip(idx.data.par_chunks(picks))
            .for_each(|(row, targets)| {
                for (k, &j) in targets.iter().enumerate() {
                    row[j] += vals[k];
                }
            });
        Ok(())
    }
}

/// A dense `usize` tensor whose entries all lie strictly below `bound`.
///
/// The bound is part of the value: it is checked at construction, preserved
/// by `transpose`/`rmax`/`index_rows`, and lets consumers skip per-entry
/// range checks when `bound` already fits their domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTensor {
    shape: Vec<usize>,
    data: Vec<usize>,
    bound: usize,
}

impl IndexTensor {
    /// Wraps a row-major index buffer, verifying every entry is `< bound`.
    pub fn new(shape: &[usize], data: Vec<usize>, bound: usize) -> Result<IndexTensor> {
        check_shape(shape)?;
        if data.len() != num_entries(shape) {
            return Err(TensorError::LengthMismatch {
                shape: shape.to_vec(),
                len: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= bound) {
            return Err(TensorError::IndexOutOfRange { value: bad, bound });
        }
        Ok(IndexTensor {
            shape: shape.to_vec(),
            data,
            bound,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[usize] {
        &self.data
    }

    /// The exclusive upper bound every entry respects.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Entry `(i, j)` of a 2-D index tensor.
    pub fn at2(&self, i: usize, j: usize) -> usize {
        debug_assert_eq!(self.ndim(), 2);
        self.data[i * self.shape[1] + j]
    }

    /// Verifies all entries lie below `domain`, scanning only when the
    /// recorded bound does not already prove it.
    fn check_bound(&self, domain: usize) -> Result<()> {
        if self.bound <= domain {
            return Ok(());
        }
        if let Some(&bad) = self.data.iter().find(|&&v| v >= domain) {
            return Err(TensorError::IndexOutOfRange {
                value: bad,
                bound: domain,
            });
        }
        Ok(())
    }

    /// Transpose of a 2-D index tensor; the bound carries over.
    pub fn transpose(&self) -> Result<IndexTensor> {
        if self.ndim() != 2 {
            return Err(TensorError::InvalidShape {
                shape: self.shape.clone(),
                reason: "transpose requires a 2-dimensional tensor",
            });
        }
        let data = transpose_impl(self.shape[0], self.shape[1], &self.data);
        Ok(IndexTensor {
            shape: vec![self.shape[1], self.shape[0]],
            data,
            bound: self.bound,
        })
    }

    /// Maximum over one axis; the result drops that axis and keeps the bound.
    pub fn rmax(&self, axis: usize) -> Result<IndexTensor> {
        let (shape, data) = rmax_impl(&self.shape, &self.data, axis)?;
        Ok(IndexTensor {
            shape,
            data,
            bound: self.bound,
        })
    }

    /// Gathers rows of a 2-D index tensor through `idx`, exactly like
    /// [`Tensor::index_rows`]; the result keeps `self`'s bound.
    pub fn index_rows(&self, idx: &IndexTensor) -> Result<IndexTensor> {
        if self.ndim() != 2 || idx.ndim() != 2 {
            return Err(TensorError::ShapeMismatch {
                op: "index_rows",
                left: self.shape.clone(),
                right: idx.shape.clone(),
            });
        }
        let row_len = self.shape[1];
        let data = gather_rows_impl(&self.data, self.shape[0], row_len, idx)?;
        Ok(IndexTensor {
            shape: vec![idx.shape[0], idx.shape[1], row_len],
            data,
            bound: self.bound,
        })
    }
}
