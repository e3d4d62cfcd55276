//! The eight denoising and enhancement filters.
//!
//! Spatial filters use replicate-edge padding. Frequency filters and the
//! Laplacian return unclipped values; clipping is left to the caller.

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::ImageGrid;
use crate::par;
use crate::spectral::{apply_frequency_response, radial_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterKind {
    Median,
    Mean,
    Wiener,
    Gaussian,
    Lowpass,
    Highpass,
    Bilateral,
    Laplacian,
}

impl FilterKind {
    /// Report column order; also the argmax tie-break order.
    pub const ALL: [FilterKind; 8] = [
        FilterKind::Median,
        FilterKind::Mean,
        FilterKind::Wiener,
        FilterKind::Gaussian,
        FilterKind::Lowpass,
        FilterKind::Highpass,
        FilterKind::Bilateral,
        FilterKind::Laplacian,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FilterKind::Median => "median",
            FilterKind::Mean => "mean",
            FilterKind::Wiener => "wiener",
            FilterKind::Gaussian => "gaussian",
            FilterKind::Lowpass => "lowpass",
            FilterKind::Highpass => "highpass",
            FilterKind::Bilateral => "bilateral",
            FilterKind::Laplacian => "laplacian",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == s)
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A filter and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterSpec {
    Median {
        window: usize,
    },
    Mean {
        window: usize,
    },
    /// `noise_var = None` estimates the noise as the mean local variance.
    Wiener {
        window: usize,
        noise_var: Option<f64>,
    },
    Gaussian {
        sigma: f64,
    },
    Lowpass {
        cutoff: f64,
    },
    Highpass {
        cutoff: f64,
    },
    Bilateral {
        sigma_s: f64,
        sigma_r: f64,
    },
    Laplacian,
}

pub const DEFAULT_WINDOW: usize = 3;
/// A 3x3 window estimates local variance from 9 samples, too few for the
/// adaptive gain to beat plain smoothing; 5x5 is the Wiener default.
pub const DEFAULT_WIENER_WINDOW: usize = 5;
pub const DEFAULT_GAUSSIAN_SIGMA: f64 = 1.0;
pub const DEFAULT_CUTOFF: f64 = 40.0;
pub const DEFAULT_SIGMA_S: f64 = 3.0;
pub const DEFAULT_SIGMA_R: f64 = 30.0;

impl FilterSpec {
    pub fn default_for(kind: FilterKind) -> Self {
        match kind {
            FilterKind::Median => FilterSpec::Median {
                window: DEFAULT_WINDOW,
            },
            FilterKind::Mean => FilterSpec::Mean {
                window: DEFAULT_WINDOW,
            },
            FilterKind::Wiener => FilterSpec::Wiener {
                window: DEFAULT_WIENER_WINDOW,
                noise_var: None,
            },
            FilterKind::Gaussian => FilterSpec::Gaussian {
                sigma: DEFAULT_GAUSSIAN_SIGMA,
            },
            FilterKind::Lowpass => FilterSpec::Lowpass {
                cutoff: DEFAULT_CUTOFF,
            },
            FilterKind::Highpass => FilterSpec::Highpass {
                cutoff: DEFAULT_CUTOFF,
            },
            FilterKind::Bilateral => FilterSpec::Bilateral {
                sigma_s: DEFAULT_SIGMA_S,
                sigma_r: DEFAULT_SIGMA_R,
            },
            FilterKind::Laplacian => FilterSpec::Laplacian,
        }
    }

    pub fn kind(&self) -> FilterKind {
        match self {
            FilterSpec::Median { .. } => FilterKind::Median,
            FilterSpec::Mean { .. } => FilterKind::Mean,
            FilterSpec::Wiener { .. } => FilterKind::Wiener,
            FilterSpec::Gaussian { .. } => FilterKind::Gaussian,
            FilterSpec::Lowpass { .. } => FilterKind::Lowpass,
            FilterSpec::Highpass { .. } => FilterKind::Highpass,
            FilterSpec::Bilateral { .. } => FilterKind::Bilateral,
            FilterSpec::Laplacian => FilterKind::Laplacian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FilterSpec::Median { window } | FilterSpec::Mean { window } => check_window(window),
            FilterSpec::Wiener { window, noise_var } => {
                check_window(window)?;
                match noise_var {
                    Some(v) if !(v.is_finite() && v >= 0.0) => Err(Error::param(format!(
                        "noise variance must be >= 0, got {v}"
                    ))),
                    _ => Ok(()),
                }
            }
            FilterSpec::Gaussian { sigma } => check_positive("sigma", sigma),
            FilterSpec::Lowpass { cutoff } | FilterSpec::Highpass { cutoff } => {
                check_positive("cutoff", cutoff)
            }
            FilterSpec::Bilateral { sigma_s, sigma_r } => {
                check_positive("sigma_s", sigma_s)?;
                check_positive("sigma_r", sigma_r)
            }
            FilterSpec::Laplacian => Ok(()),
        }
    }

    pub fn apply(&self, img: &ImageGrid) -> Result<ImageGrid> {
        match *self {
            FilterSpec::Median { window } => median_filter(img, window),
            FilterSpec::Mean { window } => mean_filter(img, window),
            FilterSpec::Wiener { window, noise_var } => wiener_filter(img, window, noise_var),
            FilterSpec::Gaussian { sigma } => gaussian_filter(img, sigma),
            FilterSpec::Lowpass { cutoff } => lowpass_filter(img, cutoff),
            FilterSpec::Highpass { cutoff } => highpass_filter(img, cutoff),
            FilterSpec::Bilateral { sigma_s, sigma_r } => bilateral_filter(img, sigma_s, sigma_r),
            FilterSpec::Laplacian => Ok(laplacian_filter(img)),
        }
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Median { window } | FilterSpec::Mean { window } => {
                write!(f, "window={window}")
            }
            FilterSpec::Wiener {
                window,
                noise_var: Some(v),
            } => write!(f, "window={window} noise_var={v}"),
            FilterSpec::Wiener {
                window,
                noise_var: None,
            } => write!(f, "window={window} noise_var=auto"),
            FilterSpec::Gaussian { sigma } => write!(f, "sigma={sigma}"),
            FilterSpec::Lowpass { cutoff } | FilterSpec::Highpass { cutoff } => {
                write!(f, "cutoff={cutoff}")
            }
            FilterSpec::Bilateral { sigma_s, sigma_r } => {
                write!(f, "sigma_s={sigma_s} sigma_r={sigma_r}")
            }
            FilterSpec::Laplacian => f.write_str("kernel=4-neighbour"),
        }
    }
}

fn check_window(w: usize) -> Result<()> {
    if w >= 1 && w % 2 == 1 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "window must be an odd integer >= 1, got {w}"
        )))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be > 0, got {v}")))
    }
}

/// Builds an output image row by row from `pixel(x, y)`.
fn map_pixels<F>(img: &ImageGrid, pixel: F) -> ImageGrid
where
    F: Fn(usize, usize) -> f64 + Sync + Send,
{
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0.0; w * h];
    par::for_each_row(&mut out, w, |y, row| {
        for (x, v) in row.iter_mut().enumerate() {
            *v = pixel(x, y);
        }
    });
    ImageGrid::from_raw(w, h, out)
}

pub fn median_filter(img: &ImageGrid, window: usize) -> Result<ImageGrid> {
    check_window(window)?;
    let r = (window / 2) as isize;
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0.0; w * h];
    par::for_each_row(&mut out, w, |y, row| {
        let mut buf = Vec::with_capacity(window * window);
        for (x, v) in row.iter_mut().enumerate() {
            buf.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    buf.push(img.get_clamped(x as isize + dx, y as isize + dy));
                }
            }
            let mid = buf.len() / 2;
            let (_, m, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
            *v = *m;
        }
    });
    Ok(ImageGrid::from_raw(w, h, out))
}

pub fn mean_filter(img: &ImageGrid, window: usize) -> Result<ImageGrid> {
    check_window(window)?;
    let r = (window / 2) as isize;
    let n = (window * window) as f64;
    Ok(map_pixels(img, |x, y| {
        let mut sum = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                sum += img.get_clamped(x as isize + dx, y as isize + dy);
            }
        }
        sum / n
    }))
}

/// Local mean and (population) variance over a `window`² neighbourhood.
fn local_moments(img: &ImageGrid, window: usize) -> (ImageGrid, ImageGrid) {
    let r = (window / 2) as isize;
    let n = (window * window) as f64;
    let mean = mean_filter(img, window).expect("window checked by caller");
    let var = map_pixels(img, |x, y| {
        let m = mean.get(x, y);
        let mut acc = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                let d = img.get_clamped(x as isize + dx, y as isize + dy) - m;
                acc += d * d;
            }
        }
        acc / n
    });
    (mean, var)
}

/// Locally adaptive Wiener estimate
/// `m + max(0, v - nu) / max(v, nu) * (x - m)`.
pub fn wiener_filter(img: &ImageGrid, window: usize, noise_var: Option<f64>) -> Result<ImageGrid> {
    FilterSpec::Wiener { window, noise_var }.validate()?;
    let (mean, var) = local_moments(img, window);
    let nu = noise_var.unwrap_or_else(|| var.mean());
    if nu == 0.0 {
        return Ok(img.clone());
    }
    Ok(map_pixels(img, |x, y| {
        let m = mean.get(x, y);
        let v = var.get(x, y);
        let gain = (v - nu).max(0.0) / v.max(nu);
        m + gain * (img.get(x, y) - m)
    }))
}

/// Kernel radius used for a Gaussian of width `sigma`.
pub fn kernel_radius(sigma: f64) -> usize {
    (3.0 * sigma).ceil() as usize
}

/// Normalized 1D Gaussian taps over `-r..=r`. The 2D kernel is their outer
/// product, which is the sampled 2D Gaussian renormalized to unit sum.
pub fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let r = kernel_radius(sigma) as isize;
    let taps: Vec<f64> = (-r..=r)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.into_iter().map(|t| t / sum).collect()
}

pub fn gaussian_filter(img: &ImageGrid, sigma: f64) -> Result<ImageGrid> {
    check_positive("sigma", sigma)?;
    let taps = gaussian_taps(sigma);
    let r = (taps.len() / 2) as isize;
    let horizontal = map_pixels(img, |x, y| {
        taps.iter()
            .enumerate()
            .map(|(i, t)| t * img.get_clamped(x as isize + i as isize - r, y as isize))
            .sum()
    });
    Ok(map_pixels(&horizontal, |x, y| {
        taps.iter()
            .enumerate()
            .map(|(i, t)| t * horizontal.get_clamped(x as isize, y as isize + i as isize - r))
            .sum()
    }))
}

/// Gaussian low-pass transfer function `exp(-D^2 / (2 D0^2))`.
pub fn lowpass_response(du: f64, dv: f64, cutoff: f64) -> f64 {
    let d = radial_distance(du, dv);
    (-(d * d) / (2.0 * cutoff * cutoff)).exp()
}

pub fn lowpass_filter(img: &ImageGrid, cutoff: f64) -> Result<ImageGrid> {
    check_positive("cutoff", cutoff)?;
    apply_frequency_response(img, |du, dv| lowpass_response(du, dv, cutoff))
}

pub fn highpass_filter(img: &ImageGrid, cutoff: f64) -> Result<ImageGrid> {
    check_positive("cutoff", cutoff)?;
    apply_frequency_response(img, |du, dv| 1.0 - lowpass_response(du, dv, cutoff))
}

/// Brute-force bilateral filter over radius `ceil(3 sigma_s)`.
pub fn bilateral_filter(img: &ImageGrid, sigma_s: f64, sigma_r: f64) -> Result<ImageGrid> {
    FilterSpec::Bilateral { sigma_s, sigma_r }.validate()?;
    let r = kernel_radius(sigma_s) as isize;
    let side = (2 * r + 1) as usize;
    let spatial: Vec<f64> = (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dx * dx + dy * dy) as f64))
        .map(|d2| (-d2 / (2.0 * sigma_s * sigma_s)).exp())
        .collect();
    let range_scale = -1.0 / (2.0 * sigma_r * sigma_r);
    Ok(map_pixels(img, |x, y| {
        let center = img.get(x, y);
        let mut num = 0.0;
        let mut den = 0.0;
        for dy in -r..=r {
            let row = ((dy + r) as usize) * side;
            for dx in -r..=r {
                let q = img.get_clamped(x as isize + dx, y as isize + dy);
                let diff = q - center;
                let wgt = spatial[row + (dx + r) as usize] * (diff * diff * range_scale).exp();
                num += wgt * q;
                den += wgt;
            }
        }
        num / den
    }))
}

/// Raw response of the 4-neighbour Laplacian `[[0,1,0],[1,-4,1],[0,1,0]]`.
pub fn laplacian_filter(img: &ImageGrid) -> ImageGrid {
    map_pixels(img, |x, y| {
        let (xi, yi) = (x as isize, y as isize);
        img.get_clamped(xi - 1, yi)
            + img.get_clamped(xi + 1, yi)
            + img.get_clamped(xi, yi - 1)
            + img.get_clamped(xi, yi + 1)
            - 4.0 * img.get(x, y)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn impulse(w: usize, h: usize, value: f64) -> ImageGrid {
        let mut d = vec![0.0; w * h];
        d[(h / 2) * w + w / 2] = value;
        ImageGrid::new(w, h, d).unwrap()
    }

    #[test]
    fn even_or_zero_windows_rejected() {
        let img = ImageGrid::filled(4, 4, 1.0).unwrap();
        assert!(median_filter(&img, 2).is_err());
        assert!(mean_filter(&img, 0).is_err());
        assert!(wiener_filter(&img, 4, None).is_err());
        assert!(wiener_filter(&img, 3, Some(-1.0)).is_err());
        assert!(gaussian_filter(&img, 0.0).is_err());
        assert!(lowpass_filter(&img, -1.0).is_err());
        assert!(highpass_filter(&img, 0.0).is_err());
        assert!(bilateral_filter(&img, 1.0, 0.0).is_err());
    }

    #[test]
    fn median_removes_isolated_spike() {
        let mut d = vec![5.0; 9];
        d[4] = 255.0;
        let img = ImageGrid::new(3, 3, d).unwrap();
        let out = median_filter(&img, 3).unwrap();
        assert!(out.data().iter().all(|&v| v == 5.0));
    }

    #[test]
    fn mean_of_center_spike() {
        let out = mean_filter(&impulse(3, 3, 9.0), 3).unwrap();
        assert_eq!(out.get(1, 1), 1.0);
    }

    #[test]
    fn unit_windows_are_identity() {
        let img = ImageGrid::from_fn(7, 5, |x, y| (x * 13 + y * 29) as f64 % 251.0).unwrap();
        assert_eq!(median_filter(&img, 1).unwrap(), img);
        assert_eq!(mean_filter(&img, 1).unwrap(), img);
    }

    #[test]
    fn wiener_with_zero_noise_is_identity() {
        let img = ImageGrid::from_fn(9, 9, |x, y| (x * y) as f64).unwrap();
        assert_eq!(wiener_filter(&img, 3, Some(0.0)).unwrap(), img);
    }

    #[test]
    fn wiener_collapses_to_local_mean_under_heavy_noise() {
        let img = ImageGrid::from_fn(9, 9, |x, y| ((x + 2 * y) % 5) as f64).unwrap();
        let out = wiener_filter(&img, 3, Some(1e9)).unwrap();
        let mean = mean_filter(&img, 3).unwrap();
        assert_eq!(out, mean);
    }

    #[test]
    fn gaussian_tap_ratio() {
        let taps = gaussian_taps(1.0);
        assert_eq!(taps.len(), 7);
        let c = taps[3] * taps[3];
        let e = taps[4] * taps[3];
        assert!((c / e - 0.5f64.exp()).abs() < 1e-12);
        assert!((taps.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn laplacian_impulse_stamps_kernel() {
        let out = laplacian_filter(&impulse(5, 5, 1.0));
        let want = [
            0.0, 0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, 0.0, //
            0.0, 1.0, -4.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 0.0, 0.0,
        ];
        assert_eq!(out.data(), &want);
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let out = laplacian_filter(&ImageGrid::filled(6, 4, 77.0).unwrap());
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bilateral_keeps_step_edge() {
        let img = ImageGrid::from_fn(32, 16, |x, _| if x < 16 { 0.0 } else { 255.0 }).unwrap();
        let out = bilateral_filter(&img, 3.0, 10.0).unwrap();
        let max_change = out
            .data()
            .iter()
            .zip(img.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_change < 1.0, "{max_change}");
    }

    #[test]
    fn spec_labels_roundtrip() {
        for k in FilterKind::ALL {
            assert_eq!(FilterKind::from_label(k.label()), Some(k));
            let s = FilterSpec::default_for(k);
            assert_eq!(s.kind(), k);
            assert!(s.validate().is_ok());
        }
    }
}
