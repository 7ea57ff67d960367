//! Engine-versus-oracle benchmarks on synthetic images.
//!
//! The bench IDs carry the execution mode so that a default build (rayon)
//! and a `--no-default-features` build (sequential) record side-by-side
//! baselines:
//!
//! ```text
//! cargo bench -p wect
//! cargo bench -p wect --no-default-features
//! ```

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use wect::builders::{directions, freudenthal_from_image, GrayscaleImage};
use wect::engine::{compute_wecfs_on_grid, DiscretizationGrid, FilterSet};
use wect::oracle::naive_wecfs;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "rayon"
    } else {
        "sequential"
    }
}

fn random_image(side: usize, seed: u64) -> GrayscaleImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..side * side).map(|_| rng.random::<f64>()).collect();
    GrayscaleImage::new(side, side, data).unwrap()
}

fn setup(side: usize) -> (wect::WeightedComplex, FilterSet, DiscretizationGrid) {
    let img = random_image(side, 7);
    let complex = freudenthal_from_image(&img, None);
    let dirs = directions(2, 8, 7).unwrap();
    let filters = FilterSet::from_directions(&complex, &dirs).unwrap();
    let grid = DiscretizationGrid::from_filters(&filters, 64).unwrap();
    (complex, filters, grid)
}

fn bench_engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("wecf");
    group.sample_size(10);
    for side in [64usize, 128] {
        let (complex, filters, grid) = setup(side);
        group.bench_function(format!("engine-{}/{side}x{side}", mode()), |b| {
            b.iter(|| {
                black_box(compute_wecfs_on_grid(&complex, &filters, &grid).unwrap());
            })
        });
    }
    // The oracle rescans the complex per height; keep its input small.
    let (complex, filters, grid) = setup(64);
    group.bench_function(format!("oracle/{}x{}", 64, 64), |b| {
        b.iter(|| {
            black_box(naive_wecfs(&complex, &filters, &grid).unwrap());
        })
    });
    group.finish();
}

criterion_group!(benches, bench_engine);
criterion_main!(benches);
