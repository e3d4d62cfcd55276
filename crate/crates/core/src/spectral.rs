//! 2D DFT and centered frequency-response filtering.
//!
//! Lengths that are powers of two use an iterative radix-2 FFT; every other
//! length goes through Bluestein's chirp-z algorithm so the frequency grid is
//! exactly the image grid (no padding).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::par;

/// Relative bound on the imaginary residue accepted by [`ifft2d`].
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-8;
/// Absolute residue always tolerated. Outputs that are themselves rounding
/// noise (a high-pass of a constant) have no meaningful relative scale.
pub const IMAGINARY_RESIDUE_FLOOR: f64 = 1e-9;

/// Row-major grid of complex bins.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    width: usize,
    height: usize,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn new(width: usize, height: usize, data: Vec<Complex64>) -> Result<Self> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(data.len()) {
            return Err(Error::Size(format!(
                "{} bins for a {width}x{height} spectrum",
                data.len()
            )));
        }
        if data.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::param("non-finite spectrum bin"));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[v * self.width + u]
    }
}

/// Precomputed forward transform for one length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    len: usize,
    algo: Algo,
}

#[derive(Debug, Clone)]
enum Algo {
    Identity,
    Radix2 {
        twiddles: Vec<Complex64>,
        bit_rev: Vec<usize>,
    },
    Bluestein {
        chirp: Vec<Complex64>,
        kernel_spectrum: Vec<Complex64>,
        inner: Box<FftPlan>,
    },
}

impl FftPlan {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        let algo = if len == 1 {
            Algo::Identity
        } else if len.is_power_of_two() {
            let bits = len.trailing_zeros();
            let twiddles = (0..len / 2)
                .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
                .collect();
            let bit_rev = (0..len)
                .map(|i| i.reverse_bits() >> (usize::BITS - bits))
                .collect();
            Algo::Radix2 { twiddles, bit_rev }
        } else {
            let m = (2 * len - 1).next_power_of_two();
            let inner = FftPlan::new(m);
            // exp(-i*pi*k^2/n), with k^2 reduced mod 2n to keep the angle small.
            let chirp: Vec<Complex64> = (0..len)
                .map(|k| {
                    let k2 = (k as u128 * k as u128 % (2 * len as u128)) as f64;
                    Complex64::from_polar(1.0, -PI * k2 / len as f64)
                })
                .collect();
            let mut kernel = vec![Complex64::new(0.0, 0.0); m];
            kernel[0] = chirp[0].conj();
            for k in 1..len {
                kernel[k] = chirp[k].conj();
                kernel[m - k] = chirp[k].conj();
            }
            inner.forward(&mut kernel);
            Algo::Bluestein {
                chirp,
                kernel_spectrum: kernel,
                inner: Box::new(inner),
            }
        };
        Self { len, algo }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward DFT, in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        match &self.algo {
            Algo::Identity => {}
            Algo::Radix2 { twiddles, bit_rev } => radix2(buf, twiddles, bit_rev),
            Algo::Bluestein {
                chirp,
                kernel_spectrum,
                inner,
            } => {
                let m = inner.len;
                let mut a = vec![Complex64::new(0.0, 0.0); m];
                for ((dst, x), w) in a.iter_mut().zip(buf.iter()).zip(chirp) {
                    *dst = x * w;
                }
                inner.forward(&mut a);
                for (x, k) in a.iter_mut().zip(kernel_spectrum) {
                    *x *= k;
                }
                inner.inverse_unnormalized(&mut a);
                let scale = 1.0 / m as f64;
                for ((out, c), w) in buf.iter_mut().zip(&a).zip(chirp) {
                    *out = c * w * scale;
                }
            }
        }
    }

    /// Unnormalized inverse DFT, in place.
    pub fn inverse_unnormalized(&self, buf: &mut [Complex64]) {
        buf.iter_mut().for_each(|c| *c = c.conj());
        self.forward(buf);
        buf.iter_mut().for_each(|c| *c = c.conj());
    }
}

fn radix2(buf: &mut [Complex64], twiddles: &[Complex64], bit_rev: &[usize]) {
    let n = buf.len();
    for (i, &j) in bit_rev.iter().enumerate() {
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut size = 2;
    while size <= n {
        let half = size / 2;
        let step = n / size;
        for start in (0..n).step_by(size) {
            for k in 0..half {
                let t = buf[start + k + half] * twiddles[k * step];
                let u = buf[start + k];
                buf[start + k] = u + t;
                buf[start + k + half] = u - t;
            }
        }
        size *= 2;
    }
}

fn transpose(data: &[Complex64], width: usize, height: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = data[y * width + x];
        }
    }
    out
}

/// Transforms every row, then every column.
fn transform_2d(data: &mut Vec<Complex64>, width: usize, height: usize, inverse: bool) {
    let pass = |buf: &mut [Complex64], len: usize| {
        let plan = FftPlan::new(len);
        par::for_each_chunk(buf, len, |_, line| {
            if inverse {
                plan.inverse_unnormalized(line)
            } else {
                plan.forward(line)
            }
        });
    };
    pass(data, width);
    let mut cols = transpose(data, width, height);
    pass(&mut cols, height);
    *data = transpose(&cols, height, width);
}

/// Forward unnormalized 2D DFT.
pub fn fft2d(img: &ImageGrid) -> ComplexGrid {
    let (w, h) = (img.width(), img.height());
    let mut data: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_2d(&mut data, w, h, false);
    ComplexGrid {
        width: w,
        height: h,
        data,
    }
}

/// Inverse 2D DFT scaled by `1/(W*H)`. Fails when the result is not real to
/// within [`IMAGINARY_RESIDUE_LIMIT`] of its largest magnitude (or
/// [`IMAGINARY_RESIDUE_FLOOR`], whichever is larger).
pub fn ifft2d(spec: &ComplexGrid) -> Result<ImageGrid> {
    let (w, h) = (spec.width, spec.height);
    let mut data = spec.data.clone();
    transform_2d(&mut data, w, h, true);
    let scale = 1.0 / (w * h) as f64;
    let mut residue = 0.0f64;
    let mut peak = 0.0f64;
    let real: Vec<f64> = data
        .iter()
        .map(|c| {
            let c = c * scale;
            residue = residue.max(c.im.abs());
            peak = peak.max(c.norm());
            c.re
        })
        .collect();
    let limit = (IMAGINARY_RESIDUE_LIMIT * peak).max(IMAGINARY_RESIDUE_FLOOR);
    if residue > limit {
        return Err(Error::NumericConsistency { residue, limit });
    }
    Ok(ImageGrid::from_raw(w, h, real))
}

/// Signed offset of DFT bin `k` from the centre `floor(n/2)` of the shifted
/// spectrum of length `n`.
#[inline]
pub fn centered_offset(k: usize, n: usize) -> i64 {
    ((k + n / 2) % n) as i64 - (n / 2) as i64
}

/// Multiplies the centred spectrum of `img` by `response(du, dv)`, where
/// `du, dv` are offsets from the DC bin, and transforms back.
pub fn apply_frequency_response<F>(img: &ImageGrid, response: F) -> Result<ImageGrid>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let (w, h) = (img.width(), img.height());
    let mut spec = fft2d(img);
    par::for_each_chunk(&mut spec.data, w, |v, row| {
        let dv = centered_offset(v, h) as f64;
        for (u, bin) in row.iter_mut().enumerate() {
            *bin *= response(centered_offset(u, w) as f64, dv);
        }
    });
    ifft2d(&spec)
}

/// Radial distance from the DC bin of the centred spectrum.
#[inline]
pub fn radial_distance(du: f64, dv: f64) -> f64 {
    du.hypot(dv)
}
