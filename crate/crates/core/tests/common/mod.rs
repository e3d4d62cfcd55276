#![allow(dead_code)]

use noisebench::{ImageGrid, Rng};

/// Uniform random image in `[0, 255)`.
pub fn random_image(w: usize, h: usize, seed: u64) -> ImageGrid {
    let mut rng = Rng::from_seed(seed);
    ImageGrid::from_fn(w, h, |_, _| 255.0 * rng.uniform01()).unwrap()
}

pub fn max_abs_diff(a: &ImageGrid, b: &ImageGrid) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
