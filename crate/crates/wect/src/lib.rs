//! Euler characteristic curves and transforms of weighted complexes.
//!
//! A weighted simplicial or cubical complex assigns a real weight to every
//! cell; its weighted Euler characteristic is the alternating sum of those
//! weights by dimension. Sweeping a vertex filter from low to high and
//! tracking that number over the growing sublevel complex yields a curve —
//! the weighted Euler characteristic function — and doing so for the
//! height filter of every direction in a set yields the weighted Euler
//! characteristic transform, a compact, invertible shape descriptor for
//! weighted data such as grayscale images.
//!
//! The crate provides:
//!
//! - [`tensor`]: the small dense-tensor kernel the engine is written in;
//! - [`complex`]: weighted complexes, validation, Euler characteristics;
//! - [`builders`]: images to complexes, direction sets, intensity filters;
//! - [`engine`]: the vectorized curve computation on a shared height grid;
//! - [`oracle`]: a deliberately naive reference implementation;
//! - [`io`]: the file formats (PGM, CSV grids, complex text, curve output);
//! - [`parallel`]: rayon-backed data parallelism with a sequential
//!   fallback (disable the `parallel` feature to build without rayon).
//!
//! ```
//! use wect::builders::{directions, freudenthal_from_image, GrayscaleImage};
//! use wect::engine::compute_wect;
//!
//! let img = GrayscaleImage::new(2, 2, vec![0.0, 0.5, 0.5, 1.0]).unwrap();
//! let complex = freudenthal_from_image(&img, None);
//! let dirs = directions(2, 4, 0).unwrap();
//! let wect = compute_wect(&complex, &dirs, 8).unwrap();
//! assert_eq!(wect.filter_count(), 4);
//! // At the top height every cell has entered, so each curve ends at the
//! // weighted Euler characteristic of the whole complex.
//! let chi = complex.weighted_euler_characteristic();
//! for p in 0..4 {
//!     assert!((wect.value(p, 7) - chi).abs() < 1e-12);
//! }
//! ```

pub mod builders;
pub mod complex;
pub mod engine;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod tensor;

pub use builders::{DirectionSet, GrayscaleImage};
pub use complex::{CellBlock, WeightedComplex};
pub use engine::{
    compute_wecfs, compute_wecfs_on_grid, compute_wect, compute_wect_on_grid, DiscretizationGrid,
    FilterSet, WecfMatrix,
};
pub use tensor::{IndexTensor, Tensor};
