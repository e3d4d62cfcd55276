//! Grayscale image carrier, clipping and histograms.

use crate::error::{Error, Result};

/// Nominal display maximum; also the PSNR peak.
pub const MAX_INTENSITY: f64 = 255.0;

/// Row-major grid of real intensities. Values are nominally in `[0, 255]`
/// but may leave that range in unclipped pipelines; they are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImageGrid {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::Size(format!(
                "{} values for a {width}x{height} grid",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("non-finite pixel at index {i}")));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        check_dims(width, height)?;
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds a grid by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Internal constructor for buffers produced by finite arithmetic.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Pixel lookup with replicate-edge padding.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xi = x.clamp(0, self.width as isize - 1) as usize;
        let yi = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yi * self.width + xi]
    }

    pub fn same_shape(&self, other: &ImageGrid) -> Result<()> {
        if self.width == other.width && self.height == other.height {
            Ok(())
        } else {
            Err(Error::Shape {
                left_w: self.width,
                left_h: self.height,
                right_w: other.width,
                right_h: other.height,
            })
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ImageGrid {
        ImageGrid::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::Size(format!(
            "{width}x{height} has a zero dimension"
        )));
    }
    width
        .checked_mul(height)
        .ok_or_else(|| Error::Size(format!("{width}x{height} overflows")))?;
    Ok(())
}

/// Saturates every value into `[0, 255]` without rounding.
pub fn clip_to_byte_range(img: &ImageGrid) -> ImageGrid {
    img.map(|v| v.clamp(0.0, MAX_INTENSITY))
}

/// Clip then round half away from zero; the 8-bit quantizer used for
/// histograms and PGM output.
#[inline]
pub fn quantize(v: f64) -> u8 {
    v.clamp(0.0, MAX_INTENSITY).round() as u8
}

/// 256-bin intensity histogram of the quantized image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
    total: u64,
}

impl Histogram {
    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Bin counts divided by the total.
    pub fn normalized(&self) -> Vec<f64> {
        let t = self.total as f64;
        self.bins.iter().map(|&c| c as f64 / t).collect()
    }
}

pub fn histogram(img: &ImageGrid) -> Histogram {
    let mut bins = [0u64; 256];
    for &v in img.data() {
        bins[quantize(v) as usize] += 1;
    }
    Histogram {
        bins,
        total: img.len() as u64,
    }
}
