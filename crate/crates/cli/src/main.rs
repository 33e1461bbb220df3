//! Command-line driver: construct spaces, run certificates, emit scan data.
//!
//! Exit codes: 0 PASS, 1 FAIL, 2 error (invalid input or a library error).

mod commands;
mod config;
mod report;
mod input;

use clap::{Args, Parser, Subcommand};
use commands::Output;
use isospec::endospace::{clifford_space, parse_endo_space};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "isospec", version, about = "Isospectral metric Lie groups: certificates and scans")]
struct Cli {
    /// Seed of the single random generator; recorded in every report.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the report (or CSV) here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or load an endomorphism space and validate it.
    Construct(ConstructArgs),
    /// Run a certificate; exit 0 on PASS, 1 on FAIL.
    #[command(subcommand)]
    Verify(Verify),
    /// Emit CSV series for plotting.
    #[command(subcommand)]
    Scan(Scan),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Clifford family member, e.g. `--clifford l=3 a=1 b=1`.
    #[arg(long, num_args = 2..=3, value_name = "KEY=VALUE")]
    clifford: Option<Vec<String>>,
    /// Space file in the structured-text format.
    #[arg(long, value_name = "FILE")]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    source: Source,
    /// Write the serialized space here (otherwise it is appended to the report).
    #[arg(long, value_name = "FILE")]
    space_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// κ-intertwining certificate of the boundary-Laplacian families.
    Intertwine {
        #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
        pair: Vec<String>,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
    /// Curvature-operator spectra compared as sets and multisets.
    Isotonal {
        #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
        pair: Vec<String>,
        /// Extension parameter for solvable names (sh…).
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Constructive √D conjugator on seeded random unit-anticommutator instances.
    Conjugator {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Geodesic sphere of a quaternionic solvable group: κ̃, tensor L, Ricci.
    Geosphere {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 30)]
        points: usize,
    },
    /// Reduced Fourier-mode operators: exact equivalence and eigenvalue window.
    Fourier {
        #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
        pair: Vec<String>,
        /// Comma-separated Z-frequency β.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        exact_n: usize,
        /// Hermite scale (defaults to 1).
        #[arg(long)]
        scale: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
enum Scan {
    /// κ̃ and dκ̃/dτ of a profile's surface in the 3-dimensional Heisenberg group.
    Hopf {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// κ̃, its closed form and the determinant criterion along a Hopf hull line.
    Hull {
        #[arg(long)]
        group: String,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        tau_max: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Per-point κ̃, tensor L and Ricci margin on a geodesic sphere.
    Geosphere {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 30)]
        points: usize,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ISOSPEC_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("ISOSPEC_THREADS = '{v}' is not a positive integer"))?;
    if n == 0 {
        return Err("ISOSPEC_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn emit(path: &Option<PathBuf>, text: &str) -> isospec::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| isospec::Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> isospec::Result<i32> {
    let seed = cli.seed;
    let output: Output = match cli.command {
        Command::Construct(args) => {
            let (label, space) = match (&args.source.clifford, &args.source.matrix) {
                (Some(items), _) => {
                    let (l, a, b) = input::clifford_triple(items)?;
                    (format!("clifford l={l} a={a} b={b}"), clifford_space(l, a, b)?)
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| isospec::Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                    (format!("file {}", path.display()), parse_endo_space(&text)?)
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let (mut out, serialized) = commands::construct(&label, space, seed)?;
            match &args.space_out {
                Some(p) => emit(&Some(p.clone()), &serialized)?,
                None => out.text = format!("{}\n[serialized space]\n{serialized}", out.text),
            }
            out
        }
        Command::Verify(v) => match v {
            Verify::Intertwine { pair, rmax } => commands::intertwine(&pair[0], &pair[1], rmax, seed)?,
            Verify::Isotonal { pair, c } => commands::isotonal(&pair[0], &pair[1], c, seed)?,
            Verify::Conjugator { instances, tol } => commands::conjugator(instances, tol, seed)?,
            Verify::Geosphere { group, s, points } => commands::geosphere(&group, s, points, seed)?,
            Verify::Fourier { pair, beta, n, count, exact_n, scale } => {
                let args = commands::FourierArgs { first: &pair[0], second: &pair[1], beta: &beta, n, count, exact_n, scale };
                commands::fourier(&args, seed)?
            }
        },
        Command::Scan(s) => {
            let csv = match s {
                Scan::Hopf { profile, samples } => commands::scan_hopf(&profile, samples, seed)?,
                Scan::Hull { group, profile, tau_max, samples } => commands::scan_hull(&group, &profile, tau_max, samples, seed)?,
                Scan::Geosphere { group, s, points } => commands::scan_geosphere(&group, s, points, seed)?,
            };
            Output { text: csv, verdict: report::Verdict::Pass }
        }
    };
    emit(&cli.out, &output.text)?;
    Ok(output.verdict.exit_code())
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: Parse: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: InvalidParameter: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("reason = {}", commands::reason(&e));
            ExitCode::from(2)
        }
    }
}
