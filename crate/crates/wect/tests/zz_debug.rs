mod common;
use common::*;
use rand::Rng;
use wect::engine::{compute_wect_on_grid, DiscretizationGrid, FilterSet};
use wect::oracle::naive_wect;
use wect::builders::directions;

#[test]
fn debug_transform_divergence() {
    let mut rng = rng(0x5eed_0002);
    'outer: for n in [2usize, 3] {
        for _ in 0..10 {
            let complex = random_complex(&mut rng, 30, 120, Some(n));
            let d = rng.random_range(1..=9);
            let dirs = directions(n, d, rng.random()).unwrap();
            let filters = FilterSet::from_directions(&complex, &dirs).unwrap();
            let grid = DiscretizationGrid::from_filters(&filters, 16).unwrap();
            let fast = compute_wect_on_grid(&complex, &dirs, &grid).unwrap();
            let slow = naive_wect(&complex, &dirs, &grid).unwrap();
            if max_abs_diff(&fast, &slow) <= 1e-9 {
                continue;
            }
            let (p, q) = (4usize, 0usize);
            let m = filters.filter_count();
            let t = grid.beta(q).unwrap();
            println!("M={:.20e} t=beta(0)={:.20e}", grid.maxheight(), t);
            let k0 = complex.vertex_count();
            for a in 0..k0 {
                let v = filters.value(a, p);
                let bin = grid.bin_of(v);
                if bin == 0 || v <= t {
                    println!(
                        "vertex {a}: value={v:.20e} bin={bin} cmp={} w={}",
                        v <= t,
                        complex.vertex_weights().data()[a]
                    );
                }
            }
            for blockref in complex.cell_blocks() {
                for (ci, (row, w)) in blockref.cells().enumerate() {
                    let fmax = row
                        .iter()
                        .map(|&v| filters.value(v, p))
                        .fold(f64::NEG_INFINITY, f64::max);
                    let binmax = row.iter().map(|&v| grid.bin_of(filters.value(v, p))).max().unwrap();
                    if binmax == 0 || fmax <= t {
                        println!(
                            "dim {} cell {ci}: fmax={fmax:.20e} binmax={binmax} cmp={} w={w}",
                            blockref.dim(),
                            fmax <= t
                        );
                    }
                }
            }
            let _ = m;
            break 'outer;
        }
    }
}
