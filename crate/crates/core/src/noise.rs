//! Noise models applied to clean images.
//!
//! Random kinds draw from one generator per row, seeded by
//! `derive_seed_indexed(seed, row)`, and consume it left to right. The output
//! therefore does not depend on how rows are scheduled.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{clip_to_byte_range, ImageGrid};
use crate::par;
use crate::rng::{derive_seed_indexed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    Gaussian,
    SaltPepper,
    Speckle,
    Poisson,
    Periodic,
    Erlang,
    Exponential,
    Rayleigh,
}

impl NoiseKind {
    /// Report order.
    pub const ALL: [NoiseKind; 8] = [
        NoiseKind::Gaussian,
        NoiseKind::SaltPepper,
        NoiseKind::Speckle,
        NoiseKind::Poisson,
        NoiseKind::Periodic,
        NoiseKind::Erlang,
        NoiseKind::Exponential,
        NoiseKind::Rayleigh,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::SaltPepper => "salt_pepper",
            NoiseKind::Speckle => "speckle",
            NoiseKind::Poisson => "poisson",
            NoiseKind::Periodic => "periodic",
            NoiseKind::Erlang => "erlang",
            NoiseKind::Exponential => "exponential",
            NoiseKind::Rayleigh => "rayleigh",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == s)
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-kind parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseParams {
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    /// `density` of replaced pixels; `salt_fraction` of those become 255.
    SaltPepper {
        density: f64,
        salt_fraction: f64,
    },
    /// Multiplier variance; realized as an Erlang(round(1/v), rate round(1/v)) factor.
    Speckle {
        variance: f64,
    },
    /// Per-pixel mean is `intensity * peak / 255`.
    Poisson {
        peak: f64,
    },
    Periodic {
        amplitude: f64,
        cycles_x: i32,
        cycles_y: i32,
        phase: f64,
    },
    Erlang {
        a: f64,
        b: u32,
    },
    Exponential {
        a: f64,
    },
    Rayleigh {
        a: f64,
        b: f64,
    },
}

impl NoiseParams {
    pub fn default_for(kind: NoiseKind) -> Self {
        match kind {
            NoiseKind::Gaussian => NoiseParams::Gaussian {
                mu: 0.0,
                sigma: 20.0,
            },
            NoiseKind::SaltPepper => NoiseParams::SaltPepper {
                density: 0.05,
                salt_fraction: 0.5,
            },
            NoiseKind::Speckle => NoiseParams::Speckle { variance: 0.01 },
            NoiseKind::Poisson => NoiseParams::Poisson { peak: 255.0 },
            NoiseKind::Periodic => NoiseParams::Periodic {
                amplitude: 50.0,
                cycles_x: 8,
                cycles_y: 8,
                phase: 0.0,
            },
            NoiseKind::Erlang => NoiseParams::Erlang {
                a: DEFAULT_ERLANG_A,
                b: DEFAULT_ERLANG_B,
            },
            NoiseKind::Exponential => NoiseParams::Exponential {
                a: DEFAULT_EXPONENTIAL_A,
            },
            NoiseKind::Rayleigh => NoiseParams::Rayleigh { a: 0.0, b: 100.0 },
        }
    }

    pub fn kind(&self) -> NoiseKind {
        match self {
            NoiseParams::Gaussian { .. } => NoiseKind::Gaussian,
            NoiseParams::SaltPepper { .. } => NoiseKind::SaltPepper,
            NoiseParams::Speckle { .. } => NoiseKind::Speckle,
            NoiseParams::Poisson { .. } => NoiseKind::Poisson,
            NoiseParams::Periodic { .. } => NoiseKind::Periodic,
            NoiseParams::Erlang { .. } => NoiseKind::Erlang,
            NoiseParams::Exponential { .. } => NoiseKind::Exponential,
            NoiseParams::Rayleigh { .. } => NoiseKind::Rayleigh,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be finite, got {v}")))
            }
        };
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be > 0, got {v}")))
            }
        };
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        match *self {
            NoiseParams::Gaussian { mu, sigma } => {
                finite("mu", mu)?;
                if !(sigma.is_finite() && sigma >= 0.0) {
                    return Err(Error::param(format!("sigma must be >= 0, got {sigma}")));
                }
            }
            NoiseParams::SaltPepper {
                density,
                salt_fraction,
            } => {
                unit("density", density)?;
                unit("salt_fraction", salt_fraction)?;
            }
            NoiseParams::Speckle { variance } => {
                if !(variance.is_finite() && variance >= 0.0) {
                    return Err(Error::param(format!(
                        "speckle variance must be >= 0, got {variance}"
                    )));
                }
            }
            NoiseParams::Poisson { peak } => positive("peak", peak)?,
            NoiseParams::Periodic {
                amplitude, phase, ..
            } => {
                finite("amplitude", amplitude)?;
                finite("phase", phase)?;
            }
            NoiseParams::Erlang { a, b } => {
                positive("erlang a", a)?;
                if b < 1 {
                    return Err(Error::param("erlang b must be a positive integer"));
                }
            }
            NoiseParams::Exponential { a } => positive("exponential a", a)?,
            NoiseParams::Rayleigh { a, b } => {
                finite("rayleigh a", a)?;
                positive("rayleigh b", b)?;
            }
        }
        Ok(())
    }
}

/// Default Erlang rate. Chosen with the shape below so the mean offset
/// (400) exceeds the intensity range and unclipped PSNR goes negative.
pub const DEFAULT_ERLANG_A: f64 = 0.01;
pub const DEFAULT_ERLANG_B: u32 = 4;
/// Default exponential rate; mean offset 500.
pub const DEFAULT_EXPONENTIAL_A: f64 = 0.002;

impl fmt::Display for NoiseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseParams::Gaussian { mu, sigma } => write!(f, "mu={mu} sigma={sigma}"),
            NoiseParams::SaltPepper {
                density,
                salt_fraction,
            } => {
                write!(f, "density={density} salt_fraction={salt_fraction}")
            }
            NoiseParams::Speckle { variance } => write!(f, "variance={variance}"),
            NoiseParams::Poisson { peak } => write!(f, "peak={peak}"),
            NoiseParams::Periodic {
                amplitude,
                cycles_x,
                cycles_y,
                phase,
            } => write!(
                f,
                "amplitude={amplitude} cycles_x={cycles_x} cycles_y={cycles_y} phase={phase}"
            ),
            NoiseParams::Erlang { a, b } => write!(f, "a={a} b={b}"),
            NoiseParams::Exponential { a } => write!(f, "a={a}"),
            NoiseParams::Rayleigh { a, b } => write!(f, "a={a} b={b}"),
        }
    }
}

/// A validated noise model plus clipping policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    params: NoiseParams,
    clip: bool,
}

impl NoiseSpec {
    pub fn new(params: NoiseParams, clip: bool) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, clip })
    }

    /// Default parameters for `kind`, clipping on.
    pub fn default_for(kind: NoiseKind) -> Self {
        Self {
            params: NoiseParams::default_for(kind),
            clip: true,
        }
    }

    pub fn with_clip(mut self, clip: bool) -> Self {
        self.clip = clip;
        self
    }

    pub fn params(&self) -> &NoiseParams {
        &self.params
    }

    pub fn kind(&self) -> NoiseKind {
        self.params.kind()
    }

    pub fn clip(&self) -> bool {
        self.clip
    }
}

/// Erlang stage count for a speckle variance; at least one stage.
pub fn speckle_stages(variance: f64) -> u32 {
    (1.0 / variance).round().clamp(1.0, u32::MAX as f64) as u32
}

/// Applies `spec` to `img`. Deterministic in `(img, spec, seed)`.
pub fn apply_noise(img: &ImageGrid, spec: &NoiseSpec, seed: u64) -> ImageGrid {
    let (w, h) = (img.width(), img.height());
    let mut out = img.data().to_vec();

    match *spec.params() {
        NoiseParams::Periodic {
            amplitude,
            cycles_x,
            cycles_y,
            phase,
        } => {
            if amplitude != 0.0 {
                par::for_each_row(&mut out, w, |y, row| {
                    let fy = cycles_y as f64 * y as f64 / h as f64;
                    for (x, v) in row.iter_mut().enumerate() {
                        let fx = cycles_x as f64 * x as f64 / w as f64;
                        *v += amplitude * (TAU * (fx + fy) + phase).sin();
                    }
                });
            }
        }
        NoiseParams::Speckle { variance: 0.0 } => {}
        params => {
            par::for_each_row(&mut out, w, |y, row| {
                let mut rng = Rng::from_seed(derive_seed_indexed(seed, y as u64));
                for v in row.iter_mut() {
                    *v = perturb(*v, &params, &mut rng);
                }
            });
        }
    }

    let noisy = ImageGrid::from_raw(w, h, out);
    if spec.clip() {
        clip_to_byte_range(&noisy)
    } else {
        noisy
    }
}

#[inline]
fn perturb(v: f64, params: &NoiseParams, rng: &mut Rng) -> f64 {
    match *params {
        NoiseParams::Gaussian { mu, sigma } => v + mu + sigma * rng.standard_normal(),
        NoiseParams::SaltPepper {
            density,
            salt_fraction,
        } => {
            let hit = rng.uniform01() < density;
            let salt = rng.uniform01() < salt_fraction;
            match (hit, salt) {
                (false, _) => v,
                (true, true) => 255.0,
                (true, false) => 0.0,
            }
        }
        NoiseParams::Speckle { variance } => {
            let k = speckle_stages(variance);
            v * rng.erlang_unchecked(k as f64, k)
        }
        NoiseParams::Poisson { peak } => {
            let lambda = v.max(0.0) * peak / 255.0;
            rng.poisson_unchecked(lambda) as f64 * 255.0 / peak
        }
        NoiseParams::Erlang { a, b } => v + rng.erlang_unchecked(a, b),
        NoiseParams::Exponential { a } => v + rng.exponential_unchecked(a),
        NoiseParams::Rayleigh { a, b } => v + rng.rayleigh_unchecked(a, b),
        NoiseParams::Periodic { .. } => unreachable!("periodic noise is deterministic"),
    }
}
