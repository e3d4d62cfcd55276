use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use noisebench::bench::{SYNTHETIC_ID, SYNTHETIC_SIZE};
use noisebench::{
    apply_noise, histogram, psnr, read_pgm, run_benchmark, synthetic_image, write_histogram_csv,
    write_pgm, BenchPlan, Error, FilterKind, FilterSpec, ImageGrid, NoiseKind, NoiseParams,
    NoiseSpec,
};

const THREADS_ENV: &str = "NOISEBENCH_THREADS";

#[derive(Parser)]
#[command(
    name = "noisebench",
    version,
    about = "Noise models, denoising filters and PSNR benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add noise to a PGM image.
    Noise {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_noise_kind)]
        kind: NoiseKind,
        #[arg(long, default_value_t = noisebench::bench::DEFAULT_SEED)]
        seed: u64,
        /// Keep out-of-range intensities (they are still saturated when written as PGM).
        #[arg(long)]
        no_clip: bool,
        #[command(flatten)]
        params: NoiseArgs,
    },
    /// Apply one filter to a PGM image.
    Filter {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_filter_kind)]
        kind: FilterKind,
        #[command(flatten)]
        params: FilterArgs,
    },
    /// PSNR of an image against a reference.
    Psnr {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// 256-bin histogram as `bin,count` CSV.
    Hist {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full 8x8 noise/filter PSNR matrix.
    Bench {
        /// Clean input image; the built-in synthetic test card when omitted.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// CSV report; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = noisebench::bench::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        no_clip: bool,
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// Write clean, noisy and filtered images here.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        filters: FilterArgs,
    },
    /// Write the synthetic test card as PGM.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = SYNTHETIC_SIZE)]
        width: usize,
        #[arg(long, default_value_t = SYNTHETIC_SIZE)]
        height: usize,
    },
}

#[derive(Args, Default)]
struct NoiseArgs {
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    noise_sigma: Option<f64>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    salt_fraction: Option<f64>,
    /// Speckle multiplier variance.
    #[arg(long)]
    variance: Option<f64>,
    /// Poisson peak (photon count at intensity 255).
    #[arg(long)]
    peak: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    cycles_x: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    cycles_y: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<f64>,
    #[arg(long)]
    erlang_a: Option<f64>,
    #[arg(long)]
    erlang_b: Option<u32>,
    #[arg(long)]
    exp_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rayleigh_a: Option<f64>,
    #[arg(long)]
    rayleigh_b: Option<f64>,
}

impl NoiseArgs {
    /// Defaults for `kind` with any given flags applied.
    fn params_for(&self, kind: NoiseKind) -> NoiseParams {
        let mut p = NoiseParams::default_for(kind);
        match &mut p {
            NoiseParams::Gaussian { mu, sigma } => {
                set(mu, self.mu);
                set(sigma, self.noise_sigma);
            }
            NoiseParams::SaltPepper {
                density,
                salt_fraction,
            } => {
                set(density, self.density);
                set(salt_fraction, self.salt_fraction);
            }
            NoiseParams::Speckle { variance } => set(variance, self.variance),
            NoiseParams::Poisson { peak } => set(peak, self.peak),
            NoiseParams::Periodic {
                amplitude,
                cycles_x,
                cycles_y,
                phase,
            } => {
                set(amplitude, self.amplitude);
                set(cycles_x, self.cycles_x);
                set(cycles_y, self.cycles_y);
                set(phase, self.phase);
            }
            NoiseParams::Erlang { a, b } => {
                set(a, self.erlang_a);
                set(b, self.erlang_b);
            }
            NoiseParams::Exponential { a } => set(a, self.exp_a),
            NoiseParams::Rayleigh { a, b } => {
                set(a, self.rayleigh_a);
                set(b, self.rayleigh_b);
            }
        }
        p
    }
}

#[derive(Args, Default)]
struct FilterArgs {
    /// Window for median, mean and wiener.
    #[arg(long)]
    window: Option<usize>,
    /// Wiener noise variance; estimated from the image when omitted.
    #[arg(long)]
    noise_var: Option<f64>,
    /// Gaussian filter sigma.
    #[arg(long)]
    sigma: Option<f64>,
    /// Low/high-pass cutoff D0 in frequency bins.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    sigma_s: Option<f64>,
    #[arg(long)]
    sigma_r: Option<f64>,
}

impl FilterArgs {
    fn spec_for(&self, kind: FilterKind) -> FilterSpec {
        let mut spec = FilterSpec::default_for(kind);
        match &mut spec {
            FilterSpec::Median { window } | FilterSpec::Mean { window } => set(window, self.window),
            FilterSpec::Wiener { window, noise_var } => {
                set(window, self.window);
                if self.noise_var.is_some() {
                    *noise_var = self.noise_var;
                }
            }
            FilterSpec::Gaussian { sigma } => set(sigma, self.sigma),
            FilterSpec::Lowpass { cutoff } | FilterSpec::Highpass { cutoff } => {
                set(cutoff, self.cutoff)
            }
            FilterSpec::Bilateral { sigma_s, sigma_r } => {
                set(sigma_s, self.sigma_s);
                set(sigma_r, self.sigma_r);
            }
            FilterSpec::Laplacian => {}
        }
        spec
    }
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn parse_noise_kind(s: &str) -> Result<NoiseKind, String> {
    NoiseKind::from_label(s).ok_or_else(|| {
        let all: Vec<_> = NoiseKind::ALL.iter().map(|k| k.label()).collect();
        format!(
            "unknown noise kind {s:?} (expected one of {})",
            all.join(", ")
        )
    })
}

fn parse_filter_kind(s: &str) -> Result<FilterKind, String> {
    FilterKind::from_label(s).ok_or_else(|| {
        let all: Vec<_> = FilterKind::ALL.iter().map(|k| k.label()).collect();
        format!(
            "unknown filter kind {s:?} (expected one of {})",
            all.join(", ")
        )
    })
}

fn load(path: &Path) -> Result<ImageGrid, Error> {
    let bytes = fs::read(path).map_err(|e| io_context(path, e))?;
    Ok(read_pgm(&bytes)?)
}

fn save(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    fs::write(path, bytes).map_err(|e| io_context(path, e))
}

fn io_context(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(p) => save(p, bytes),
        None => Ok(io::stdout().lock().write_all(bytes)?),
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::Param(format!(
            "{THREADS_ENV} must be a positive integer, got {raw:?}"
        ))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Param(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    configure_threads()?;
    match cli.command {
        Command::Noise {
            input,
            out,
            kind,
            seed,
            no_clip,
            params,
        } => {
            let spec = NoiseSpec::new(params.params_for(kind), !no_clip)?;
            let img = load(&input)?;
            save(&out, &write_pgm(&apply_noise(&img, &spec, seed)))
        }
        Command::Filter {
            input,
            out,
            kind,
            params,
        } => {
            let spec = params.spec_for(kind);
            spec.validate()?;
            let img = load(&input)?;
            save(&out, &write_pgm(&spec.apply(&img)?))
        }
        Command::Psnr { reference, input } => {
            let value = psnr(&load(&reference)?, &load(&input)?)?;
            println!("{value}");
            Ok(())
        }
        Command::Hist { input, out } => {
            let h = histogram(&load(&input)?);
            emit(out.as_deref(), &write_histogram_csv(&h))
        }
        Command::Bench {
            input,
            out,
            seed,
            no_clip,
            markdown,
            dump_dir,
            noise,
            filters,
        } => {
            let mut plan = match &input {
                Some(path) => BenchPlan::new(load(path)?, path.display().to_string()),
                None => BenchPlan::new(
                    synthetic_image(SYNTHETIC_SIZE, SYNTHETIC_SIZE),
                    SYNTHETIC_ID,
                ),
            };
            plan.seed = seed;
            plan.clip = !no_clip;
            plan.noise = NoiseKind::ALL.map(|k| noise.params_for(k));
            plan.filters = FilterKind::ALL.map(|k| filters.spec_for(k));
            plan.dump_dir = dump_dir;
            let report = run_benchmark(&plan)?;
            if let Some(md) = &markdown {
                save(md, report.to_markdown().as_bytes())?;
            }
            emit(out.as_deref(), &report.write_csv())
        }
        Command::Synth { out, width, height } => {
            if width == 0 || height == 0 {
                return Err(Error::Param(
                    "synthetic image needs positive dimensions".into(),
                ));
            }
            save(&out, &write_pgm(&synthetic_image(width, height)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("noisebench: {e}");
            if e.is_param() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
