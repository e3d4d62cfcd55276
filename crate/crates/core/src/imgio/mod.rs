//! Binary PGM codec and benchmark report serializers.

mod pgm;
mod report;

pub use pgm::{read_pgm, write_pgm};
pub use report::{best_filter, write_histogram_csv, BenchReport, ReportRow, CSV_HEADER};
