//! Shared fixtures and random generators for the integration tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wect::complex::CellBlock;
use wect::engine::FilterSet;
use wect::{IndexTensor, Tensor, WeightedComplex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn weights(w: &[f64]) -> Tensor {
    Tensor::from_vec(&[w.len()], w.to_vec()).unwrap()
}

pub fn block(dim: usize, width: usize, rows: &[usize], w: &[f64], k0: usize) -> CellBlock {
    let vertices = IndexTensor::new(&[w.len(), width], rows.to_vec(), k0).unwrap();
    CellBlock::new(dim, vertices, weights(w)).unwrap()
}

/// A single weighted point.
pub fn point() -> WeightedComplex {
    WeightedComplex::vertices_only(None, weights(&[1.0])).unwrap()
}

/// A path of `n` vertices joined by `n - 1` edges, unit weights.
pub fn path(n: usize) -> WeightedComplex {
    let rows: Vec<usize> = (0..n - 1).flat_map(|i| [i, i + 1]).collect();
    WeightedComplex::new(
        None,
        weights(&vec![1.0; n]),
        vec![block(1, 2, &rows, &vec![1.0; n - 1], n)],
    )
    .unwrap()
}

/// The boundary of a triangle: three vertices, three edges, no interior.
pub fn triangle_boundary() -> WeightedComplex {
    WeightedComplex::new(
        None,
        weights(&[1.0; 3]),
        vec![block(1, 2, &[0, 1, 1, 2, 0, 2], &[1.0; 3], 3)],
    )
    .unwrap()
}

/// Boundary of the octahedron, embedded in 3-space: 6 vertices, 12 edges,
/// 8 triangles; Euler characteristic 2.
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
            block(1, 2, &edges, &[1.0; 12], 6),
            block(2, 3, &tris, &[1.0; 8], 6),
        ],
    )
    .unwrap()
}

/// Draws `count` distinct vertex indices below `k0`.
fn distinct_vertices(rng: &mut ChaCha8Rng, k0: usize, count: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(count);
    while picked.len() < count {
        let v = rng.random_range(0..k0);
        if !picked.contains(&v) {
            picked.push(v);
        }
    }
    picked
}

/// A random weighted complex: up to `max_vertices` vertices, at most
/// `max_cells` cells in total, dimensions up to 3, weights in `[-1, 1]`.
/// Blocks are randomly simplicial or cubical per dimension. The result is
/// generally not closed under faces — curve computations never need that.
/// With `embed`, vertices get coordinates in `[-1, 1]^n`.
pub fn random_complex(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_cells: usize,
    embed: Option<usize>,
) -> WeightedComplex {
    let k0 = rng.random_range(1..=max_vertices);
    let coords = embed.map(|n| {
        let data = (0..k0 * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        Tensor::from_vec(&[k0, n], data).unwrap()
    });
    let vweights = (0..k0).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut budget = max_cells.saturating_sub(k0);
    let mut blocks = Vec::new();
    for dim in 1..=3usize {
        let cube_width = 1 << dim;
        let simplex_width = dim + 1;
        let width = if rng.random_bool(0.5) && k0 >= cube_width {
            cube_width
        } else if k0 >= simplex_width {
            simplex_width
        } else {
            continue;
        };
        let most = budget.min(max_cells / 2).min(60);
        if most == 0 {
            break;
        }
        let count = rng.random_range(0..=most);
        if count == 0 {
            continue;
        }
        budget -= count;
        let mut rows = Vec::with_capacity(count * width);
        let mut cweights = Vec::with_capacity(count);
        for _ in 0..count {
            rows.extend(distinct_vertices(rng, k0, width));
            cweights.push(rng.random_range(-1.0..1.0));
        }
        blocks.push(block(dim, width, &rows, &cweights, k0));
    }
    WeightedComplex::new(coords, Tensor::from_vec(&[k0], vweights).unwrap(), blocks).unwrap()
}

/// A random filter bank of `m` filters with values in `[-range, range]`.
pub fn random_filters(rng: &mut ChaCha8Rng, k0: usize, m: usize, range: f64) -> FilterSet {
    let data = (0..k0 * m).map(|_| rng.random_range(-range..range)).collect();
    FilterSet::new(Tensor::from_vec(&[k0, m], data).unwrap()).unwrap()
}

/// Largest absolute difference between two equally shaped curve matrices.
pub fn max_abs_diff(a: &wect::WecfMatrix, b: &wect::WecfMatrix) -> f64 {
    assert_eq!(a.values().shape(), b.values().shape());
    a.values()
        .data()
        .iter()
        .zip(b.values().data())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
