//! Weighted simplicial and cubical complexes in a flat, engine-friendly
//! layout.
//!
//! A [`WeightedComplex`] stores optional vertex coordinates, one weight per
//! vertex, and one [`CellBlock`] per positive dimension that is present.
//! Cells are rows of vertex indices: a `dim`-simplex lists `dim + 1`
//! vertices, a `dim`-cube lists `2^dim` corner vertices ordered so that the
//! vertex at position `p` sits at the corner whose offset along axis `j` is
//! bit `j` of `p`. The structure is deliberately permissive — indices and
//! face closure are checked by [`WeightedComplex::validate`], not enforced
//! at construction — so that defective inputs can be loaded, inspected and
//! reported on.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::tensor::{IndexTensor, Tensor};

/// Errors from complex construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("invalid complex: {0}")]
    Invalid(String),
}

/// All cells of one positive dimension: a `(count, width)` table of vertex
/// indices plus one weight per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellBlock {
    dim: usize,
    vertices: IndexTensor,
    weights: Tensor,
}

impl CellBlock {
    /// Builds a block of `dim`-cells. The vertex table must be 2-D with one
    /// row per cell and either `dim + 1` (simplices) or `2^dim` (cubes)
    /// columns; for `dim == 1` the two coincide. Weights are one per row.
    pub fn new(dim: usize, vertices: IndexTensor, weights: Tensor) -> Result<CellBlock, ComplexError> {
        if dim == 0 {
            return Err(ComplexError::Invalid(
                "cell blocks hold positive-dimensional cells; vertices live on the complex".into(),
            ));
        }
        if vertices.ndim() != 2 {
            return Err(ComplexError::Invalid(format!(
                "cell block vertex table must be 2-dimensional, got shape {:?}",
                vertices.shape()
            )));
        }
        let (count, width) = (vertices.shape()[0], vertices.shape()[1]);
        let simplex_width = dim + 1;
        let cube_width = 1usize
            .checked_shl(dim as u32)
            .ok_or_else(|| ComplexError::Invalid(format!("dimension {dim} is out of range")))?;
        if width != simplex_width && width != cube_width {
            return Err(ComplexError::Invalid(format!(
                "{dim}-cells need {simplex_width} (simplex) or {cube_width} (cube) vertices per row, got {width}"
            )));
        }
        if weights.ndim() != 1 || weights.shape()[0] != count {
            return Err(ComplexError::Invalid(format!(
                "cell block of {count} cells needs a weight vector of the same length, got shape {:?}",
                weights.shape()
            )));
        }
        Ok(CellBlock {
            dim,
            vertices,
            weights,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of cells in the block.
    pub fn count(&self) -> usize {
        self.vertices.shape()[0]
    }

    /// Vertices listed per cell: `dim + 1` for simplices, `2^dim` for cubes.
    pub fn width(&self) -> usize {
        self.vertices.shape()[1]
    }

    /// Whether the rows have simplex width. For edges (`dim == 1`) the two
    /// conventions coincide and this returns true.
    pub fn is_simplicial(&self) -> bool {
        self.width() == self.dim + 1
    }

    pub fn vertices(&self) -> &IndexTensor {
        &self.vertices
    }

    pub fn weights(&self) -> &Tensor {
        &self.weights
    }

    /// Iterates over `(vertex row, weight)` pairs.
    pub fn cells(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.vertices
            .data()
            .chunks_exact(self.width().max(1))
            .zip(self.weights.data().iter().copied())
    }
}

/// A weighted complex: optional coordinates, vertex weights, and cell
/// blocks sorted by ascending dimension (dimensions with no cells are
/// simply absent).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComplex {
    coords: Option<Tensor>,
    vertex_weights: Tensor,
    cells: Vec<CellBlock>,
}

impl WeightedComplex {
    /// Assembles a complex. `coords`, when present, must be 2-D with one row
    /// per vertex. Blocks may arrive in any order but at most one per
    /// dimension; empty blocks are dropped.
    pub fn new(
        coords: Option<Tensor>,
        vertex_weights: Tensor,
        mut cells: Vec<CellBlock>,
    ) -> Result<WeightedComplex, ComplexError> {
        if vertex_weights.ndim() != 1 {
            return Err(ComplexError::Invalid(format!(
                "vertex weights must be 1-dimensional, got shape {:?}",
                vertex_weights.shape()
            )));
        }
        let k0 = vertex_weights.shape()[0];
        if let Some(c) = &coords {
            if c.ndim() != 2 || c.shape()[0] != k0 {
                return Err(ComplexError::Invalid(format!(
                    "coordinates must be a ({k0}, n) tensor, got shape {:?}",
                    c.shape()
                )));
            }
            if c.shape()[1] == 0 {
                return Err(ComplexError::Invalid(
                    "coordinates need at least one ambient dimension; use None for abstract complexes"
                        .into(),
                ));
            }
        }
        cells.retain(|b| b.count() > 0);
        cells.sort_by_key(|b| b.dim());
        for pair in cells.windows(2) {
            if pair[0].dim() == pair[1].dim() {
                return Err(ComplexError::Invalid(format!(
                    "two cell blocks share dimension {}",
                    pair[0].dim()
                )));
            }
        }
        Ok(WeightedComplex {
            coords,
            vertex_weights,
            cells,
        })
    }

    /// A complex with vertices only.
    pub fn vertices_only(
        coords: Option<Tensor>,
        vertex_weights: Tensor,
    ) -> Result<WeightedComplex, ComplexError> {
        WeightedComplex::new(coords, vertex_weights, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_weights.shape()[0]
    }

    /// Ambient dimension of the embedding, if coordinates are present.
    pub fn ambient_dim(&self) -> Option<usize> {
        self.coords.as_ref().map(|c| c.shape()[1])
    }

    /// Largest dimension carrying cells; 0 for a complex of bare vertices.
    pub fn dim(&self) -> usize {
        self.cells.last().map_or(0, |b| b.dim())
    }

    pub fn coords(&self) -> Option<&Tensor> {
        self.coords.as_ref()
    }

    pub fn vertex_weights(&self) -> &Tensor {
        &self.vertex_weights
    }

    /// Cell blocks in ascending dimension, positive dimensions only.
    pub fn cell_blocks(&self) -> &[CellBlock] {
        &self.cells
    }

    /// The block of dimension `dim`, if any cells of that dimension exist.
    pub fn block(&self, dim: usize) -> Option<&CellBlock> {
        self.cells.iter().find(|b| b.dim() == dim)
    }

    /// Total number of cells, vertices included.
    pub fn cell_count(&self) -> usize {
        self.vertex_count() + self.cells.iter().map(|b| b.count()).sum::<usize>()
    }

    /// The weighted Euler characteristic: the sum over all cells of the
    /// cell's weight, with sign `(-1)^dim`. With unit weights this is the
    /// classic alternating cell count.
    pub fn weighted_euler_characteristic(&self) -> f64 {
        let mut chi: f64 = self.vertex_weights.data().iter().sum();
        for block in &self.cells {
            let total: f64 = block.weights().data().iter().sum();
            if block.dim() % 2 == 0 {
                chi += total;
            } else {
                chi -= total;
            }
        }
        chi
    }

    /// The same complex with every weight (vertices and cells) set to 1.
    pub fn unit_weights(&self) -> WeightedComplex {
        let ones = |n: usize| Tensor::from_vec(&[n], vec![1.0; n]).expect("weight vector");
        WeightedComplex {
            coords: self.coords.clone(),
            vertex_weights: ones(self.vertex_count()),
            cells: self
                .cells
                .iter()
                .map(|b| CellBlock {
                    dim: b.dim,
                    vertices: b.vertices.clone(),
                    weights: ones(b.count()),
                })
                .collect(),
        }
    }

    /// Structural checks: every vertex index in range, no repeated vertices
    /// within a cell, and closure under faces (each simplex facet or cube
    /// face of every cell must itself be present one dimension down).
    /// Returns all violations found; an empty list means the complex is
    /// well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let k0 = self.vertex_count();
        let mut out = Vec::new();

        // Sorted vertex rows per dimension, for face lookups.
        let mut present: Vec<HashSet<Vec<usize>>> = Vec::new();
        for block in &self.cells {
            let mut set = HashSet::with_capacity(block.count());
            for (row, _) in block.cells() {
                let mut key = row.to_vec();
                key.sort_unstable();
                set.insert(key);
            }
            present.push(set);
        }

        for (bi, block) in self.cells.iter().enumerate() {
            let dim = block.dim();
            let faces_of = |row: &[usize]| -> Vec<Vec<usize>> {
                if block.is_simplicial() {
                    // Facets of a simplex: drop one vertex at a time.
                    (0..row.len())
                        .map(|skip| {
                            let mut f: Vec<usize> = row
                                .iter()
                                .enumerate()
                                .filter(|&(p, _)| p != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            f.sort_unstable();
                            f
                        })
                        .collect()
                } else {
                    // Faces of a cube: fix one axis to one side. Corner `p`
                    // belongs to face `(axis, side)` when bit `axis` of `p`
                    // equals `side`.
                    let mut faces = Vec::with_capacity(2 * dim);
                    for axis in 0..dim {
                        for side in 0..2 {
                            let mut f: Vec<usize> = (0..row.len())
                                .filter(|p| (p >> axis) & 1 == side)
                                .map(|p| row[p])
                                .collect();
                            f.sort_unstable();
                            faces.push(f);
                        }
                    }
                    faces
                }
            };
            for (cell, (row, _)) in block.cells().enumerate() {
                let mut local_bad = false;
                for &v in row {
                    if v >= k0 {
                        out.push(Violation::VertexIndexOutOfRange { dim, cell, index: v });
                        local_bad = true;
                    }
                }
                let mut seen = row.to_vec();
                seen.sort_unstable();
                for pair in seen.windows(2) {
                    if pair[0] == pair[1] {
                        out.push(Violation::RepeatedVertex {
                            dim,
                            cell,
                            index: pair[0],
                        });
                        local_bad = true;
                        break;
                    }
                }
                // Face checks on a cell that already failed vertex checks
                // would only echo the same defect.
                if local_bad || dim == 1 {
                    continue;
                }
                let below = if bi > 0 && self.cells[bi - 1].dim() == dim - 1 {
                    Some(&present[bi - 1])
                } else {
                    None
                };
                for face in faces_of(row) {
                    if below.map_or(true, |set| !set.contains(&face)) {
                        out.push(Violation::MissingFace {
                            dim,
                            cell,
                            face,
                        });
                    }
                }
            }
        }
        out
    }
}

/// One structural defect found by [`WeightedComplex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A cell references a vertex index at or beyond the vertex count.
    VertexIndexOutOfRange { dim: usize, cell: usize, index: usize },
    /// A cell lists the same vertex more than once.
    RepeatedVertex { dim: usize, cell: usize, index: usize },
    /// A facet of a cell is absent from the block one dimension down.
    MissingFace { dim: usize, cell: usize, face: Vec<usize> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexIndexOutOfRange { dim, cell, index } => write!(
                f,
                "{dim}-cell {cell}: vertex index {index} out of range"
            ),
            Violation::RepeatedVertex { dim, cell, index } => {
                write!(f, "{dim}-cell {cell}: vertex {index} repeated")
            }
            Violation::MissingFace { dim, cell, face } => write!(
                f,
                "{dim}-cell {cell}: face {face:?} is not present in dimension {}",
                dim - 1
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(w: &[f64]) -> Tensor {
        Tensor::from_vec(&[w.len()], w.to_vec()).unwrap()
    }

    fn block(dim: usize, width: usize, rows: &[usize], w: &[f64]) -> CellBlock {
        let vertices = IndexTensor::new(&[w.len(), width], rows.to_vec(), usize::MAX).unwrap();
        CellBlock::new(dim, vertices, weights(w)).unwrap()
    }

    /// Boundary of the octahedron: 6 vertices, 12 edges, 8 triangles.
    pub fn octahedron() -> WeightedComplex {
        let edges: Vec<usize> = [
            (0, 2), (0, 3), (0, 4), (0, 5),
            (1, 2), (1, 3), (1, 4), (1, 5),
            (2, 4), (2, 5), (3, 4), (3, 5),
        ]
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect();
        let tris: Vec<usize> = [
            (0, 2, 4), (0, 2, 5), (0, 3, 4), (0, 3, 5),
            (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5),
        ]
        .iter()
        .flat_map(|&(a, b, c)| [a, b, c])
        .collect();
        let coords = Tensor::from_vec(
            &[6, 3],
            vec![
                0.0, 0.0, 1.0, //
                0.0, 0.0, -1.0, //
                1.0, 0.0, 0.0, //
                -1.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, //
                0.0, -1.0, 0.0,
            ],
        )
        .unwrap();
        WeightedComplex::new(
            Some(coords),
            weights(&[1.0; 6]),
            vec![
                block(1, 2, &edges, &[1.0; 12]),
                block(2, 3, &tris, &[1.0; 8]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn euler_characteristic_of_a_point_is_one() {
        let c = WeightedComplex::vertices_only(None, weights(&[1.0])).unwrap();
        assert_eq!(c.weighted_euler_characteristic(), 1.0);
        assert_eq!(c.dim(), 0);
        assert_eq!(c.cell_count(), 1);
    }

    #[test]
    fn euler_characteristic_of_the_octahedron_is_two() {
        let c = octahedron();
        assert_eq!(c.cell_count(), 26);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.weighted_euler_characteristic(), 2.0);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn weights_enter_the_characteristic_with_alternating_signs() {
        // Two vertices of weight 1 joined by an edge of weight 0.5.
        let c = WeightedComplex::new(
            None,
            weights(&[1.0, 1.0]),
            vec![block(1, 2, &[0, 1], &[0.5])],
        )
        .unwrap();
        assert_eq!(c.weighted_euler_characteristic(), 1.5);
        assert_eq!(c.unit_weights().weighted_euler_characteristic(), 1.0);
    }

    #[test]
    fn empty_blocks_are_dropped_and_duplicates_rejected() {
        let empty = CellBlock::new(
            1,
            IndexTensor::new(&[0, 2], vec![], 0).unwrap(),
            weights(&[]),
        )
        .unwrap();
        let c = WeightedComplex::new(None, weights(&[1.0, 1.0]), vec![empty]).unwrap();
        assert!(c.cell_blocks().is_empty());

        let twice = vec![block(1, 2, &[0, 1], &[1.0]), block(1, 2, &[0, 1], &[1.0])];
        assert!(WeightedComplex::new(None, weights(&[1.0, 1.0]), twice).is_err());
    }

    #[test]
    fn cell_block_rejects_wrong_widths() {
        let vertices = IndexTensor::new(&[1, 3], vec![0, 1, 2], 3).unwrap();
        assert!(CellBlock::new(1, vertices.clone(), weights(&[1.0])).is_err());
        assert!(CellBlock::new(2, vertices.clone(), weights(&[1.0])).is_ok());
        // Width 4 is a square for dim 2 and a tetrahedron for dim 3; width 5
        // is nothing for dim 3 (simplices have 4 vertices, cubes 8).
        let square = IndexTensor::new(&[1, 4], vec![0, 1, 2, 3], 4).unwrap();
        assert!(CellBlock::new(2, square.clone(), weights(&[1.0])).is_ok());
        assert!(CellBlock::new(3, square, weights(&[1.0])).is_ok());
        let five = IndexTensor::new(&[1, 5], vec![0, 1, 2, 3, 4], 5).unwrap();
        assert!(CellBlock::new(3, five, weights(&[1.0])).is_err());
    }

    #[test]
    fn validate_reports_out_of_range_and_repeats() {
        let c = WeightedComplex::new(
            None,
            weights(&[1.0, 1.0]),
            vec![block(1, 2, &[0, 5, 1, 1], &[1.0, 1.0])],
        )
        .unwrap();
        let v = c.validate();
        assert!(v.contains(&Violation::VertexIndexOutOfRange { dim: 1, cell: 0, index: 5 }));
        assert!(v.contains(&Violation::RepeatedVertex { dim: 1, cell: 1, index: 1 }));
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn validate_requires_simplex_facets() {
        // A triangle with only two of its three edges.
        let c = WeightedComplex::new(
            None,
            weights(&[1.0; 3]),
            vec![
                block(1, 2, &[0, 1, 1, 2], &[1.0, 1.0]),
                block(2, 3, &[0, 1, 2], &[1.0]),
            ],
        )
        .unwrap();
        let v = c.validate();
        assert_eq!(
            v,
            vec![Violation::MissingFace { dim: 2, cell: 0, face: vec![0, 2] }]
        );
    }

    #[test]
    fn validate_requires_cube_faces() {
        // A square (corner order: 00, 01, 10, 11 over axes) with the edge
        // fixing axis 1 to side 1 missing: corners 2 and 3, i.e. {2, 3}.
        let c = WeightedComplex::new(
            None,
            weights(&[1.0; 4]),
            vec![
                block(1, 2, &[0, 1, 0, 2, 1, 3], &[1.0; 3]),
                block(2, 4, &[0, 1, 2, 3], &[1.0]),
            ],
        )
        .unwrap();
        let v = c.validate();
        assert_eq!(
            v,
            vec![Violation::MissingFace { dim: 2, cell: 0, face: vec![2, 3] }]
        );
        // Adding that edge clears the report.
        let ok = WeightedComplex::new(
            None,
            weights(&[1.0; 4]),
            vec![
                block(1, 2, &[0, 1, 0, 2, 1, 3, 2, 3], &[1.0; 4]),
                block(2, 4, &[0, 1, 2, 3], &[1.0]),
            ],
        )
        .unwrap();
        assert!(ok.validate().is_empty());
    }

    #[test]
    fn validate_flags_cells_with_no_layer_below() {
        let c = WeightedComplex::new(
            None,
            weights(&[1.0; 3]),
            vec![block(2, 3, &[0, 1, 2], &[1.0])],
        )
        .unwrap();
        assert_eq!(c.validate().len(), 3);
    }
}
