//! `colorent`: sweeps, mutual information, verification and lattice dumps for color codes.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use colorent::colex::{validate, BoundaryKind, Colex, Dims, Link, Plaquette};
use colorent::spec::{parse_colors, parse_grid, parse_lambda, LatticeSpec, RegionSpec};
use colorent::sweep::{run_sweep, to_csv, Grid, SweepConfig};
use colorent::thermo::Limit;
use colorent::verify::{run_verify, Fault, VerifyConfig};
use colorent::{ByColor, Color};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "colorent", version, about = "Finite-temperature entanglement of 2D color codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the lattice invariants of a color code.
    Validate {
        #[arg(long, value_parser = lattice)]
        lattice: LatticeSpec,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Entropy (and topological entropy for levinwen regions) over a grid.
    Sweep(SweepArgs),
    /// Mutual information between a region and its complement over a grid.
    Mutual(SweepArgs),
    /// Compare closed forms against the brute-force oracle.
    Verify {
        #[arg(long, value_parser = lattice)]
        lattice: LatticeSpec,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Temperatures per coupling set.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Seeded random regions added to the standard ones.
        #[arg(long, default_value_t = 2)]
        random_regions: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Print plaquettes, supports and links.
    DumpLattice {
        #[arg(long, value_parser = lattice)]
        lattice: LatticeSpec,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_parser = lattice)]
    lattice: LatticeSpec,
    /// hexagon:ID, annulus:R,r, levinwen:R,r or qubits:LIST.
    #[arg(long, value_parser = region)]
    region: RegionSpec,
    /// Per-color transverse couplings R,B,G (or one value for all).
    #[arg(long = "lambda-x", value_parser = lambda, default_value = "1")]
    lambda_x: ByColor<f64>,
    /// Temperature grid start:stop:step.
    #[arg(long, value_parser = grid, conflicts_with = "ksigma", required_unless_present = "ksigma")]
    temps: Option<Points>,
    /// K Sigma grid start:stop:step for the enclosed component (uniform lambda only).
    #[arg(long, value_parser = grid)]
    ksigma: Option<Points>,
    /// Hard-constrained colors, e.g. r,b (their k is set to zero).
    #[arg(long = "hard-x", value_parser = colors)]
    hard_x: Option<Colors>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = LimitArg::Exact)]
    limit: LimitArg,
    /// Also report I_AB between the region and its complement.
    #[arg(long)]
    with_mutual: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LimitArg {
    Exact,
    Thermodynamic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    Cardinality,
}

fn lattice(s: &str) -> Result<LatticeSpec, String> {
    s.parse().map_err(|e: colorent::Error| e.to_string())
}

fn region(s: &str) -> Result<RegionSpec, String> {
    s.parse().map_err(|e: colorent::Error| e.to_string())
}

fn lambda(s: &str) -> Result<ByColor<f64>, String> {
    parse_lambda(s).map_err(|e| e.to_string())
}

/// Grid values (a newtype so clap treats the list as one argument value).
#[derive(Clone, Debug)]
struct Points(Vec<f64>);

#[derive(Clone, Debug)]
struct Colors(Vec<Color>);

fn grid(s: &str) -> Result<Points, String> {
    parse_grid(s).map(Points).map_err(|e| e.to_string())
}

fn colors(s: &str) -> Result<Colors, String> {
    parse_colors(s).map(Colors).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct LatticeDump<'a> {
    lattice: String,
    boundary_kind: BoundaryKind,
    dims: Dims,
    qubit_count: usize,
    plaquettes: &'a [Plaquette],
    links: &'a [Link],
}

fn dump(spec: &LatticeSpec, colex: &Colex, format: ReportFormat) -> Result<String, String> {
    match format {
        ReportFormat::Json => {
            let d = LatticeDump {
                lattice: spec.to_string(),
                boundary_kind: colex.boundary_kind(),
                dims: colex.dims(),
                qubit_count: colex.qubit_count(),
                plaquettes: colex.plaquettes(),
                links: colex.links(),
            };
            serde_json::to_string_pretty(&d).map(|s| s + "\n").map_err(|e| e.to_string())
        }
        ReportFormat::Text => {
            let mut out = format!(
                "{spec}: {} qubits, {} plaquettes, {} links\n",
                colex.qubit_count(),
                colex.plaquettes().len(),
                colex.links().len()
            );
            for p in colex.plaquettes() {
                let s: Vec<String> = p.support.iter().map(|q| q.to_string()).collect();
                out += &format!("plaquette {} {} [{}]\n", p.id, p.color.letter(), s.join(" "));
            }
            for l in colex.links() {
                out += &format!("link {} {} {}\n", l.a, l.b, l.color.letter());
            }
            Ok(out)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

fn sweep(args: SweepArgs, mutual: bool) -> Result<(), String> {
    let grid = match (args.temps, args.ksigma) {
        (Some(t), None) => Grid::Temps(t.0),
        (None, Some(k)) => Grid::KSigma(k.0),
        _ => return Err("exactly one of --temps and --ksigma is required".into()),
    };
    let cfg = SweepConfig {
        lattice: args.lattice,
        region: args.region,
        lambda: args.lambda_x,
        grid,
        hard: args.hard_x.map(|c| c.0).unwrap_or_default(),
        limit: match args.limit {
            LimitArg::Exact => Limit::Exact,
            LimitArg::Thermodynamic => Limit::Thermodynamic,
        },
        with_mutual: mutual || args.with_mutual,
    };
    let rows = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let text = match args.format {
        TableFormat::Csv => to_csv(&rows),
        TableFormat::Json => serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())? + "\n",
    };
    emit(&text, args.out.as_ref())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Validate { lattice, format } => {
            let colex = lattice.build().map_err(|e| e.to_string())?;
            let report = validate(&colex);
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n",
                ReportFormat::Text => {
                    let mut s = String::new();
                    for c in &report.checks {
                        s += &format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                    }
                    s
                }
            };
            emit(&text, None)?;
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY_FAILED) })
        }
        Command::Sweep(args) => sweep(args, false).map(|_| ExitCode::SUCCESS),
        Command::Mutual(args) => sweep(args, true).map(|_| ExitCode::SUCCESS),
        Command::Verify { lattice, seed, grid, random_regions, format, inject_fault } => {
            let cfg = VerifyConfig {
                lattice,
                seed,
                grid,
                random_regions,
                fault: inject_fault.map(|FaultArg::Cardinality| Fault::Cardinality),
            };
            let report = run_verify(&cfg).map_err(|e| e.to_string())?;
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n",
                ReportFormat::Text => format!("{report}\n"),
            };
            emit(&text, None)?;
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY_FAILED) })
        }
        Command::DumpLattice { lattice, format } => {
            let colex = lattice.build().map_err(|e| e.to_string())?;
            emit(&dump(&lattice, &colex, format)?, None).map(|_| ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
