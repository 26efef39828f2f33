//! `hkd`: Hilbert-Kunz density functions of graded rings reduced mod p.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 invalid input or a
//! mathematical precondition (bad prime, infinite colength, invalid HN data,
//! classification failure), 3 a configured size cap was exceeded.

mod cache;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hkd_core::curvehn::{self, RefinedHNData};
use hkd_core::densityfn::{self, StepFunction, View};
use hkd_core::exactalg::rational;
use hkd_core::gradedring::{ComputeOptions, GradedPresentation, ModPFiber, DEFAULT_DEGREE_CAP};
use hkd_core::segre;

use cache::{Cache, CacheKey};

#[derive(Parser)]
#[command(
    name = "hkd",
    version,
    about = "Hilbert-Kunz density functions of graded rings reduced mod p"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest degree, and largest q = p^n, any computation may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u64,
    /// Cache directory; the HKD_CACHE_DIR environment variable takes precedence.
    #[arg(long, global = true, default_value = "./.hkcache")]
    cache_dir: PathBuf,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute every cache hit and fail if it differs from the stored entry.
    #[arg(long, global = true)]
    verify_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewArg {
    Full,
    Tail,
}

impl From<ViewArg> for View {
    fn from(v: ViewArg) -> View {
        match v {
            ViewArg::Full => View::Full,
            ViewArg::Tail => View::Tail,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Density function f_n of a ring file at q = p^n.
    Density {
        ring: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        power: u32,
        #[arg(long, value_enum, default_value = "full")]
        view: ViewArg,
        /// CSV columns are j, x_lo, num, den; x_lo is a float for plotting,
        /// the exact value is num/den.
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate l(R/I^[q]) / q^d and its split at x = 1, as JSON.
    Ehk {
        ring: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convergence table across powers and primes, as JSON. Per-prime status
    /// lines go to standard error as they finish.
    Converge {
        ring: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        primes: Vec<u64>,
        #[arg(long)]
        max_power: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Density of the Segre product of two rings, assembled degreewise.
    Segre {
        ring_r: PathBuf,
        ring_s: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        power: u32,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Vector bundles on curves.
    Curve {
        #[command(subcommand)]
        command: CurveCommand,
    },
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Density on x >= 1 from (refined) HN data, next to the limit density of
    /// the unrefined data.
    Hn {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classify a plane trinomial curve, e.g. "x^3*y + y^3*z + z^3*x".
    Trinomial {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Limit e_HK of the Segre product of two curves with semistable syzygy
    /// bundles of ranks r >= s.
    SegreEhk {
        #[arg(long)]
        d1: u64,
        #[arg(long)]
        d2: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
    },
}

struct Settings {
    options: ComputeOptions,
    cache: Option<Cache>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            match err.downcast_ref::<hkd_core::Error>() {
                Some(e) => eprintln!("error: {}: {e}", e.name()),
                None => eprintln!("error: {err:#}"),
            }
            exit_code(&err)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> ExitCode {
    match err.downcast_ref::<hkd_core::Error>() {
        Some(e) if e.is_cap() => ExitCode::from(3),
        Some(_) => ExitCode::from(2),
        None => ExitCode::from(1),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let cache_dir = std::env::var_os("HKD_CACHE_DIR").map_or(cli.cache_dir, PathBuf::from);
    let settings = Settings {
        options: ComputeOptions {
            degree_cap: cli.degree_cap,
            ..ComputeOptions::default()
        },
        cache: (!cli.no_cache).then(|| Cache::new(&cache_dir, cli.verify_cache)),
    };
    match cli.command {
        Command::Density {
            ring,
            prime,
            power,
            view,
            out,
            output,
        } => {
            let fiber = ModPFiber::with_options(&read_ring(&ring)?, prime, settings.options)?;
            let f = cached_density(&settings, &fiber, power, view.into())?;
            emit(output.as_deref(), &render(&f.trimmed(), out))?;
        }
        Command::Ehk {
            ring,
            prime,
            power,
            output,
        } => {
            let fiber = ModPFiber::with_options(&read_ring(&ring)?, prime, settings.options)?;
            let d = densityfn::ehk_decomposition(&fiber, power)?;
            emit(output.as_deref(), &serde_json::to_string_pretty(&d)?)?;
        }
        Command::Converge {
            ring,
            primes,
            max_power,
            output,
        } => {
            let pres = read_ring(&ring)?;
            let report = densityfn::convergence_report_with(&pres, &primes, max_power, settings.options, |r| {
                let line = serde_json::json!({
                    "prime": r.prime,
                    "status": r.status,
                    "error": r.error,
                    "levels": r.rows.len(),
                });
                eprintln!("{line}");
            })?;
            emit(output.as_deref(), &report.to_json())?;
            if report.succeeded() == 0 {
                eprintln!("error: every prime failed");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Segre {
            ring_r,
            ring_s,
            prime,
            power,
            out,
            output,
        } => {
            let fr = ModPFiber::with_options(&read_ring(&ring_r)?, prime, settings.options)?;
            let fs = ModPFiber::with_options(&read_ring(&ring_s)?, prime, settings.options)?;
            let dr = cached_density(&settings, &fr, power, View::Full)?;
            let ds = cached_density(&settings, &fs, power, View::Full)?;
            let f = segre::segre_density_finite(
                &dr,
                &segre::hs_partial(&fr, power)?,
                &ds,
                &segre::hs_partial(&fs, power)?,
            )?;
            emit(output.as_deref(), &render(&f.trimmed(), out))?;
        }
        Command::Curve { command } => run_curve(command)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn run_curve(command: CurveCommand) -> Result<()> {
    match command {
        CurveCommand::Hn { data, output } => {
            let text = fs::read_to_string(&data).with_context(|| format!("reading {}", data.display()))?;
            let hn = RefinedHNData::from_json(&text)?;
            let density = curvehn::density_from_hn(&hn)?;
            let finf = curvehn::finf_from_hn(&hn.unrefined())?;
            let body = serde_json::json!({
                "trivial_refinement": hn.is_trivial(),
                "density": density,
                "finf": finf,
                "density_integral": rational::to_json(&density.integrate()),
                "finf_integral": rational::to_json(&finf.integrate()),
            });
            emit(output.as_deref(), &serde_json::to_string_pretty(&body)?)?;
        }
        CurveCommand::Trinomial { poly, output } => {
            let c = curvehn::classify_trinomial_str(&poly)?;
            emit(output.as_deref(), &serde_json::to_string_pretty(&c)?)?;
        }
        CurveCommand::SegreEhk { d1, d2, r, s } => {
            let v = curvehn::ehk_inf_segre_curves(d1, d2, r, s)?;
            emit(None, &rational::to_json(&v).to_string())?;
        }
    }
    Ok(())
}

fn read_ring(path: &Path) -> Result<GradedPresentation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(GradedPresentation::from_json(&text)?)
}

fn cached_density(settings: &Settings, fiber: &ModPFiber, power: u32, view: View) -> Result<StepFunction> {
    // Check the cap up front so errors do not depend on what is cached.
    fiber.frobenius_q(power)?;
    let compute = || densityfn::density_function(fiber, power, view);
    match &settings.cache {
        None => Ok(compute()?),
        Some(cache) => {
            let key = CacheKey {
                ring_hash: fiber.ring_hash().to_string(),
                prime: fiber.prime(),
                power,
                view,
            };
            cache.get_or_compute(&key, compute)
        }
    }
}

fn render(f: &StepFunction, format: Format) -> String {
    match format {
        Format::Csv => f.to_csv(),
        Format::Json => f.to_json() + "\n",
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    let text = if text.ends_with('\n') {
        text.to_string()
    } else {
        format!("{text}\n")
    };
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
