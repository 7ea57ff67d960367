//! Scalar reference implementation of the curves, for cross-checking.
//!
//! Everything here is deliberately naive: for every filter and every grid
//! height it walks the whole complex, decides cell by cell whether the
//! cell's maximum filter value is below the height, and sums signed
//! weights. That is `Θ(numvals × filters × cells)` work — far slower than
//! the engine, with none of its batching — which is the point: the two
//! share only the data types, so agreement between them checks the
//! engine's entire vectorized pipeline.

use crate::builders::DirectionSet;
use crate::complex::WeightedComplex;
use crate::engine::{DiscretizationGrid, EngineError, FilterSet, WecfMatrix};
use crate::tensor::Tensor;

/// Curve of every filter, evaluated by direct summation at each height.
pub fn naive_wecfs(
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
    for block in complex.cell_blocks() {
        if let Some(&bad) = block
            .vertices()
            .data()
            .iter()
            .find(|&&v| v >= complex.vertex_count())
        {
            return Err(EngineError::Tensor(
                crate::tensor::TensorError::IndexOutOfRange {
                    value: bad,
                    bound: complex.vertex_count(),
                },
            ));
        }
    }

    let k0 = complex.vertex_count();
    let m = filters.filter_count();
    let numvals = grid.numvals();
    let vertex_weights = complex.vertex_weights().data();
    let fvals = filters.fvals().data();
    let mut out = vec![0.0; m * numvals];
    let mut column = vec![0.0; k0];
    for p in 0..m {
        for (a, slot) in column.iter_mut().enumerate() {
            *slot = fvals[a * m + p];
        }
        for q in 0..numvals {
            let t = grid.beta(q)?;
            // Values beyond an explicitly chosen grid saturate into the end
            // bins, exactly as the engine's binning does: at the top height
            // every cell counts, below the bottom height none does.
            let top = q == numvals - 1;
            let mut chi = 0.0;
            for (a, &w) in vertex_weights.iter().enumerate() {
                if top || column[a] <= t {
                    chi += w;
                }
            }
            for block in complex.cell_blocks() {
                let sign = if block.dim() % 2 == 0 { 1.0 } else { -1.0 };
                for (row, w) in block.cells() {
                    let mut fmax = column[row[0]];
                    for &v in &row[1..] {
                        if column[v] > fmax {
                            fmax = column[v];
                        }
                    }
                    if top || fmax <= t {
                        chi += sign * w;
                    }
                }
            }
            out[p * numvals + q] = chi;
        }
    }
    let values = Tensor::from_vec(&[m, numvals], out)?;
    Ok(WecfMatrix::from_parts(values, *grid))
}

/// Transform by direct summation: builds each height filter with plain
/// per-vertex dot products, then evaluates as in [`naive_wecfs`].
pub fn naive_wect(
    complex: &WeightedComplex,
    directions: &DirectionSet,
    grid: &DiscretizationGrid,
) -> Result<WecfMatrix, EngineError> {
    let coords = complex.coords().ok_or(EngineError::MissingCoordinates)?;
    let n = coords.shape()[1];
    if directions.ambient_dim() != n {
        return Err(EngineError::AmbientDimMismatch {
            complex: n,
            directions: directions.ambient_dim(),
        });
    }
    let k0 = complex.vertex_count();
    let d = directions.count();
    let mut fvals = vec![0.0; k0 * d];
    for a in 0..k0 {
        for p in 0..d {
            let mut dot = 0.0;
            for j in 0..n {
                dot += coords.at2(a, j) * directions.row(p)[j];
            }
            fvals[a * d + p] = dot;
        }
    }
    let filters = FilterSet::new(Tensor::from_vec(&[k0, d], fvals)?)?;
    naive_wecfs(complex, &filters, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellBlock;
    use crate::tensor::IndexTensor;

    #[test]
    fn segment_sweep_matches_the_hand_count() {
        let c = WeightedComplex::new(
            None,
            Tensor::from_vec(&[2], vec![1.0, 1.0]).unwrap(),
            vec![CellBlock::new(
                1,
                IndexTensor::new(&[1, 2], vec![0, 1], 2).unwrap(),
                Tensor::from_vec(&[1], vec![1.0]).unwrap(),
            )
            .unwrap()],
        )
        .unwrap();
        let fs = FilterSet::from_column(&[0.0, 1.0]).unwrap();
        let grid = DiscretizationGrid::from_filters(&fs, 3).unwrap();
        let w = naive_wecfs(&c, &fs, &grid).unwrap();
        assert_eq!(w.curve(0), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn height_filters_use_plain_dot_products() {
        // A single vertex at (3, 4) under directions (1,0) and (0,1).
        let coords = Tensor::from_vec(&[1, 2], vec![3.0, 4.0]).unwrap();
        let c = WeightedComplex::vertices_only(
            Some(coords),
            Tensor::from_vec(&[1], vec![2.0]).unwrap(),
        )
        .unwrap();
        let dirs = crate::builders::directions(2, 4, 0).unwrap();
        let grid = DiscretizationGrid::with_maxheight(5.0, 5).unwrap();
        let w = naive_wect(&c, &dirs, &grid).unwrap();
        assert_eq!(w.filter_count(), 4);
        // Direction (1,0): the vertex sits at height 3, entering at bin 4
        // of heights -5..5 step 2.5... bin ceil((5+3)/2.5) = 4.
        assert_eq!(w.curve(0), &[0.0, 0.0, 0.0, 0.0, 2.0]);
        // Direction (-1,0): height -3, entering at bin 1.
        assert_eq!(w.curve(2), &[0.0, 2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn missing_coordinates_are_an_error() {
        let c = WeightedComplex::vertices_only(
            None,
            Tensor::from_vec(&[1], vec![1.0]).unwrap(),
        )
        .unwrap();
        let dirs = crate::builders::directions(2, 2, 0).unwrap();
        let grid = DiscretizationGrid::with_maxheight(1.0, 2).unwrap();
        assert!(matches!(
            naive_wect(&c, &dirs, &grid),
            Err(EngineError::MissingCoordinates)
        ));
    }
}
