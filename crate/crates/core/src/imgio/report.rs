use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::filters::{FilterKind, FilterSpec};
use crate::grid::Histogram;
use crate::metrics::PsnrValue;
use crate::noise::{NoiseKind, NoiseSpec};

pub const CSV_HEADER: &str =
    "noise,median,mean,wiener,gaussian,lowpass,highpass,bilateral,laplacian,best";

/// Argmax of a row; ties resolve to the earliest filter in [`FilterKind::ALL`].
pub fn best_filter(cells: &[PsnrValue; 8]) -> FilterKind {
    let mut best = 0;
    for (i, c) in cells.iter().enumerate().skip(1) {
        if c.db > cells[best].db {
            best = i;
        }
    }
    FilterKind::ALL[best]
}

/// One noise model's scores against all eight filters.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub noise: NoiseSpec,
    /// Cells in [`FilterKind::ALL`] order.
    pub cells: [PsnrValue; 8],
}

impl ReportRow {
    pub fn best(&self) -> FilterKind {
        best_filter(&self.cells)
    }

    pub fn cell(&self, filter: FilterKind) -> PsnrValue {
        self.cells[filter as usize]
    }
}

/// Full 8x8 PSNR matrix with run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub image_id: String,
    pub seed: u64,
    pub clip_mode: bool,
    pub filters: [FilterSpec; 8],
    rows: Vec<ReportRow>,
    pub tool_version: String,
}

impl BenchReport {
    /// Rows may arrive in any order; they are stored in report order. Every
    /// noise kind must appear exactly once.
    pub fn new(
        image_id: impl Into<String>,
        seed: u64,
        clip_mode: bool,
        filters: [FilterSpec; 8],
        mut rows: Vec<ReportRow>,
    ) -> Result<Self> {
        rows.sort_by_key(|r| r.noise.kind());
        let kinds: Vec<NoiseKind> = rows.iter().map(|r| r.noise.kind()).collect();
        if kinds != NoiseKind::ALL {
            return Err(Error::param(format!(
                "report needs one row per noise kind, got {kinds:?}"
            )));
        }
        if filters.iter().map(FilterSpec::kind).ne(FilterKind::ALL) {
            return Err(Error::param(
                "filter specs must follow the report column order",
            ));
        }
        Ok(Self {
            image_id: image_id.into(),
            seed,
            clip_mode,
            filters,
            rows,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    pub fn row(&self, noise: NoiseKind) -> &ReportRow {
        &self.rows[noise as usize]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row.noise.kind().label());
            for c in &row.cells {
                write!(out, ",{c}").unwrap();
            }
            writeln!(out, ",{}", row.best()).unwrap();
        }
        out
    }

    /// CSV bytes, LF line endings.
    pub fn write_csv(&self) -> Vec<u8> {
        self.to_csv().into_bytes()
    }

    /// Markdown table using the same cell strings as the CSV.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# PSNR benchmark (dB)\n").unwrap();
        writeln!(out, "- image: `{}`", self.image_id).unwrap();
        writeln!(out, "- seed: {}", self.seed).unwrap();
        writeln!(
            out,
            "- clipping: {}",
            if self.clip_mode { "on" } else { "off" }
        )
        .unwrap();
        writeln!(out, "- version: {}\n", self.tool_version).unwrap();

        out.push_str("| noise |");
        for f in FilterKind::ALL {
            write!(out, " {f} |").unwrap();
        }
        out.push_str(" best |\n|---|");
        out.push_str(&"---:|".repeat(8));
        out.push_str("---|\n");
        for row in &self.rows {
            write!(out, "| {} |", row.noise.kind()).unwrap();
            for c in &row.cells {
                write!(out, " {c} |").unwrap();
            }
            writeln!(out, " {} |", row.best()).unwrap();
        }

        out.push_str("\n## Parameters\n\n");
        for row in &self.rows {
            writeln!(out, "- {}: {}", row.noise.kind(), row.noise.params()).unwrap();
        }
        for f in &self.filters {
            writeln!(out, "- {}: {}", f.kind(), f).unwrap();
        }
        out
    }
}

/// `bin,count` lines for bins 0..=255.
pub fn write_histogram_csv(h: &Histogram) -> Vec<u8> {
    let mut out = String::with_capacity(256 * 8);
    for (b, c) in h.bins().iter().enumerate() {
        writeln!(out, "{b},{c}").unwrap();
    }
    out.into_bytes()
}
