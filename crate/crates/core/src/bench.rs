//! Noise × filter benchmark: one noise realization per row, eight filters
//! scored against the clean image.

use std::f64::consts::TAU;
use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::filters::{FilterKind, FilterSpec};
use crate::grid::{clip_to_byte_range, ImageGrid};
use crate::imgio::{write_pgm, BenchReport, ReportRow};
use crate::metrics::psnr;
use crate::noise::{apply_noise, NoiseKind, NoiseParams, NoiseSpec};
use crate::par;
use crate::rng::derive_seed;

pub const DEFAULT_SEED: u64 = 42;
pub const SYNTHETIC_SIZE: usize = 256;
pub const SYNTHETIC_ID: &str = "synthetic-256";

/// Everything needed to regenerate the 8x8 matrix.
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub image: ImageGrid,
    pub image_id: String,
    pub seed: u64,
    pub clip: bool,
    /// Indexed by `NoiseKind as usize`.
    pub noise: [NoiseParams; 8],
    /// Indexed by `FilterKind as usize`.
    pub filters: [FilterSpec; 8],
    /// When set, the clean, noisy and filtered images are written here as PGM.
    pub dump_dir: Option<PathBuf>,
}

impl BenchPlan {
    pub fn new(image: ImageGrid, image_id: impl Into<String>) -> Self {
        Self {
            image,
            image_id: image_id.into(),
            seed: DEFAULT_SEED,
            clip: true,
            noise: NoiseKind::ALL.map(NoiseParams::default_for),
            filters: FilterKind::ALL.map(FilterSpec::default_for),
            dump_dir: None,
        }
    }

    /// Default plan on the built-in synthetic image.
    pub fn synthetic() -> Self {
        Self::new(
            synthetic_image(SYNTHETIC_SIZE, SYNTHETIC_SIZE),
            SYNTHETIC_ID,
        )
    }

    pub fn set_noise(&mut self, params: NoiseParams) {
        self.noise[params.kind() as usize] = params;
    }

    pub fn set_filter(&mut self, spec: FilterSpec) {
        self.filters[spec.kind() as usize] = spec;
    }

    pub fn validate(&self) -> Result<()> {
        for (k, p) in NoiseKind::ALL.iter().zip(&self.noise) {
            if p.kind() != *k {
                return Err(Error::param(format!(
                    "noise slot {k} holds {} parameters",
                    p.kind()
                )));
            }
            p.validate()
                .map_err(|e| cell_error(format!("noise {k}"), e))?;
        }
        for (k, f) in FilterKind::ALL.iter().zip(&self.filters) {
            if f.kind() != *k {
                return Err(Error::param(format!(
                    "filter slot {k} holds a {} spec",
                    f.kind()
                )));
            }
            f.validate()
                .map_err(|e| cell_error(format!("filter {k}"), e))?;
        }
        Ok(())
    }

    /// Sub-seed used for one noise row.
    pub fn row_seed(&self, kind: NoiseKind) -> u64 {
        derive_seed(self.seed, kind.label())
    }
}

fn cell_error(context: String, source: Error) -> Error {
    Error::Cell {
        context,
        source: Box::new(source),
    }
}

/// Runs all 64 cells. Rows and cells are evaluated in parallel when the
/// `parallel` feature is on; the report is identical either way.
pub fn run_benchmark(plan: &BenchPlan) -> Result<BenchReport> {
    plan.validate()?;
    if let Some(dir) = &plan.dump_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("clean.pgm"), write_pgm(&plan.image))?;
    }

    let rows = par::map_indexed(NoiseKind::ALL.len(), |i| run_row(plan, NoiseKind::ALL[i]));
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    BenchReport::new(
        plan.image_id.clone(),
        plan.seed,
        plan.clip,
        plan.filters,
        rows,
    )
}

fn run_row(plan: &BenchPlan, kind: NoiseKind) -> Result<ReportRow> {
    let spec = NoiseSpec::new(plan.noise[kind as usize], plan.clip)?;
    let noisy = apply_noise(&plan.image, &spec, plan.row_seed(kind));
    if let Some(dir) = &plan.dump_dir {
        fs::write(dir.join(format!("{kind}_noisy.pgm")), write_pgm(&noisy))
            .map_err(|e| cell_error(format!("noise {kind}"), e.into()))?;
    }

    let cells = par::map_indexed(FilterKind::ALL.len(), |j| {
        let filter = &plan.filters[j];
        let context = || format!("noise {kind}, filter {}", filter.kind());
        let mut out = filter.apply(&noisy).map_err(|e| cell_error(context(), e))?;
        if plan.clip {
            out = clip_to_byte_range(&out);
        }
        if let Some(dir) = &plan.dump_dir {
            fs::write(
                dir.join(format!("{kind}_{}.pgm", filter.kind())),
                write_pgm(&out),
            )
            .map_err(|e| cell_error(context(), e.into()))?;
        }
        psnr(&plan.image, &out).map_err(|e| cell_error(context(), e))
    });
    let cells: Vec<_> = cells.into_iter().collect::<Result<_>>()?;
    Ok(ReportRow {
        noise: spec,
        cells: cells.try_into().expect("eight filters"),
    })
}

/// Deterministic grayscale test card: smooth shading, hard-edged shapes
/// and a fine texture patch. Values stay inside `[30, 225]`.
pub fn synthetic_image(width: usize, height: usize) -> ImageGrid {
    let (w, h) = (width as f64, height as f64);
    ImageGrid::from_fn(width, height, |x, y| {
        let (u, v) = (x as f64 / w, y as f64 / h);
        let mut val = 60.0 + 70.0 * u + 40.0 * v + 15.0 * (TAU * 1.5 * u).sin() * (TAU * v).cos();

        if (0.15..0.45).contains(&u) && (0.55..0.85).contains(&v) {
            val = 210.0;
        }
        let (dx, dy) = (u - 0.7, v - 0.3);
        if dx * dx + dy * dy < 0.14 * 0.14 {
            val = 40.0;
        }
        if (0.6..0.9).contains(&u) && (0.6..0.9).contains(&v) {
            val += TEXTURE_AMPLITUDE * (TAU * x as f64 / 8.0).sin() * (TAU * y as f64 / 8.0).sin();
        }
        val.clamp(30.0, 225.0)
    })
    .expect("synthetic dimensions are positive")
}

const TEXTURE_AMPLITUDE: f64 = 20.0;
