//! Noise synthesis, denoising filters and PSNR benchmarking for grayscale
//! images.
//!
//! ```
//! use noisebench::{apply_noise, median_filter, psnr, synthetic_image, NoiseKind, NoiseSpec};
//!
//! let clean = synthetic_image(64, 64);
//! let noisy = apply_noise(&clean, &NoiseSpec::default_for(NoiseKind::SaltPepper), 42);
//! let restored = median_filter(&noisy, 3).unwrap();
//! assert!(psnr(&clean, &restored).unwrap().db > psnr(&clean, &noisy).unwrap().db);
//! ```

pub mod bench;
pub mod error;
pub mod filters;
pub mod grid;
pub mod imgio;
pub mod metrics;
pub mod noise;
mod par;
pub mod rng;
pub mod spectral;

pub use bench::{run_benchmark, synthetic_image, BenchPlan};
pub use error::{Error, PgmError, Result};
pub use filters::{
    bilateral_filter, gaussian_filter, highpass_filter, laplacian_filter, lowpass_filter,
    mean_filter, median_filter, wiener_filter, FilterKind, FilterSpec,
};
pub use grid::{clip_to_byte_range, histogram, Histogram, ImageGrid};
pub use imgio::{read_pgm, write_histogram_csv, write_pgm, BenchReport};
pub use metrics::{mse, psnr, PsnrValue};
pub use noise::{apply_noise, NoiseKind, NoiseParams, NoiseSpec};
pub use par::is_parallel;
pub use rng::Rng;
pub use spectral::{apply_frequency_response, fft2d, ifft2d, ComplexGrid};
