// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vdc_core::bounds::{AlphaExponentMode, BoundConfig, SearchMode, SupremumScope};
use vdc_core::correlation::k2inf_norm;
use vdc_core::kernels::{
    hyperkloosterman_direct, hyperkloosterman_fast, write_kernel, DIRECT_BUDGET,
};
use vdc_core::spectral::{poisson_check, PeriodicTable, TestFunction};
use vdc_core::{Complex64, Modulus, Scheme};

use vdc_audit::defaults;
use vdc_audit::grid::{render_csv, GridSpec};
use vdc_audit::{audit_cell, AuditError, AuditResult, CellSpec, KernelSpec, Record};

#[derive(Parser)]
#[command(
    name = "vdc-audit",
    version,
    about = "Audits of iterated van der Corput bounds over Z/c"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit one (c, kernel, coefficients, M, N, k) cell.
    Single(SingleArgs),
    /// Sweep a JSON grid spec and write CSV.
    Grid(GridArgs),
    #[command(subcommand)]
    Kernel(KernelCommand),
    #[command(subcommand)]
    Poisson(PoissonCommand),
}

#[derive(Subcommand)]
enum KernelCommand {
    /// Write a kernel table in the text format.
    Dump {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value = "kl2-product")]
        kernel: String,
        /// Destination file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size and norm audits; Weil bound and oracle agreement for hyper-Kloosterman kernels.
    Check {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value = "kl2-product")]
        kernel: String,
        /// Slack for the Weil bound and oracle agreement.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum PoissonCommand {
    /// Twisted Poisson summation for a seeded random unimodular K on Z/c.
    Check {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bump support; defaults to [1/2, 3c + 1/2].
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphaMode {
    AsStated,
    Recomposed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    Joint,
    PerTerm,
}

#[derive(Args)]
struct SingleArgs {
    #[arg(long)]
    c: u64,
    #[arg(long, default_value = "kl2-product")]
    kernel: String,
    /// Start of the m-range `[M, 2M)`; defaults to max(1, c/8).
    #[arg(long = "M")]
    m: Option<u64>,
    /// Start of the n-range `[N, 2N)`; defaults to max(1, c/8).
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "random-signs")]
    scheme: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = defaults::BUDGET)]
    budget: u128,
    #[arg(long, default_value_t = defaults::SHIFT_CAP_CONSTANT)]
    shift_cap: f64,
    /// Sample this many shift tuples instead of searching exhaustively.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = defaults::SAMPLE_SEED)]
    sample_seed: u64,
    #[arg(long, value_enum, default_value_t = AlphaMode::AsStated)]
    alpha_exponent: AlphaMode,
    #[arg(long, value_enum, default_value_t = Scope::Joint)]
    scope: Scope,
}

#[derive(Args)]
struct GridArgs {
    spec: PathBuf,
    /// Overrides the spec's `output`; stdout when neither is set.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the spec's `workers`.
    #[arg(long)]
    workers: Option<usize>,
}

fn run_single(args: SingleArgs) -> AuditResult<()> {
    if !(args.shift_cap > 0.0) {
        return Err(AuditError::Config("--shift-cap must be > 0".into()));
    }
    let cell = CellSpec {
        c: args.c,
        kernel: args.kernel.parse()?,
        scheme: args.scheme.parse::<Scheme>()?,
        seed: args.seed,
        m: args.m.unwrap_or(defaults::default_size(args.c)),
        n: args.n.unwrap_or(defaults::default_size(args.c)),
        depth: args.k,
    };
    let cfg = BoundConfig {
        depth: args.k,
        shift_cap_constant: args.shift_cap,
        search: match args.samples {
            Some(count) => SearchMode::Sampled {
                count,
                seed: args.sample_seed,
            },
            None => SearchMode::Exhaustive,
        },
        alpha_exponent: match args.alpha_exponent {
            AlphaMode::AsStated => AlphaExponentMode::AsStated,
            AlphaMode::Recomposed => AlphaExponentMode::Recomposed,
        },
        scope: match args.scope {
            Scope::Joint => SupremumScope::Joint,
            Scope::PerTerm => SupremumScope::PerTerm,
        },
        budget: args.budget,
    };
    // Budget and size errors surface before any kernel is built.
    cell.precheck(&cfg)?;
    let kernel = cell.kernel.build(cell.c)?;
    let audit = audit_cell(&kernel, &cell, &cfg)?;
    let record = Record::new(&cell, &audit);
    eprint!("{}", record.breakdown());
    println!("{}", serde_json::to_string(&record)?);
    Ok(())
}

fn run_grid_cmd(args: GridArgs) -> AuditResult<()> {
    let mut spec = GridSpec::load(&args.spec)?;
    if args.workers.is_some() {
        spec.workers = args.workers;
    }
    let csv = render_csv(&spec)?;
    match args.out.or(spec.output) {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().write_all(&csv)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct KernelCheck {
    c: u64,
    kernel: String,
    family: String,
    sup_on_units: f64,
    sup_overall: f64,
    within_size_assumption: bool,
    k2inf_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weil_bound: Option<WeilCheck>,
    passed: bool,
}

#[derive(Serialize)]
struct WeilCheck {
    order: u32,
    sup: f64,
    holds: bool,
    /// `max |fast - direct|`, when the direct oracle is affordable.
    oracle_error: Option<f64>,
    /// `max |Im Kl_2|`, for order 2.
    max_imaginary: Option<f64>,
}

fn run_kernel_check(c: u64, kernel: &str, tol: f64) -> AuditResult<bool> {
    let spec: KernelSpec = kernel.parse()?;
    let k = spec.build(c)?;
    let profile = *k.magnitude_profile();
    let weil = match &spec {
        KernelSpec::HyperKloosterman { k: order, .. } => {
            let p = Modulus::new(c)?;
            let fast = hyperkloosterman_fast::<f64>(&p, *order)?;
            let sup = fast.sup_norm();
            let oracle_error = hyperkloosterman_direct::<f64>(&p, *order, DIRECT_BUDGET)
                .ok()
                .map(|d| {
                    d.values()
                        .iter()
                        .zip(fast.values())
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max)
                });
            let max_imaginary =
                (*order == 2).then(|| fast.values().iter().map(|z| z.im.abs()).fold(0.0, f64::max));
            Some(WeilCheck {
                order: *order,
                sup,
                holds: sup <= *order as f64 + tol,
                oracle_error,
                max_imaginary,
            })
        }
        _ => None,
    };
    let passed = weil.as_ref().is_none_or(|w| {
        w.holds
            && w.oracle_error.is_none_or(|e| e <= tol)
            && w.max_imaginary.is_none_or(|e| e <= tol)
    });
    let report = KernelCheck {
        c,
        kernel: spec.to_string(),
        family: k.family().to_string(),
        sup_on_units: profile.sup_on_units,
        sup_overall: profile.sup_overall,
        within_size_assumption: profile.within_size_assumption(c, tol),
        k2inf_norm: k2inf_norm(&k).k2inf,
        weil_bound: weil,
        passed,
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(passed)
}

#[derive(Serialize)]
struct PoissonJson {
    c: u64,
    seed: u64,
    support: (f64, f64),
    lhs: (f64, f64),
    rhs: (f64, f64),
    residual: f64,
    n_max: usize,
    passed: bool,
}

fn run_poisson_check(
    c: u64,
    seed: u64,
    lo: Option<f64>,
    hi: Option<f64>,
    n_max: Option<usize>,
    tol: f64,
) -> AuditResult<bool> {
    let m = Modulus::new(c)?;
    let kernel = vdc_core::kernels::build_random_unimodular::<f64>(&m, seed)?;
    // One row of a seeded unimodular kernel is a seeded unimodular periodic function.
    let row: Vec<Complex64> = kernel.row(0).to_vec();
    let table = PeriodicTable::new(m, row)?;
    let support = (lo.unwrap_or(0.5), hi.unwrap_or(3.0 * c as f64 + 0.5));
    let v = TestFunction::bump(support.0, support.1)?;
    let report = poisson_check(&table, &v, n_max)?;
    let passed = report.residual < tol;
    let out = PoissonJson {
        c,
        seed,
        support,
        lhs: (report.lhs.re, report.lhs.im),
        rhs: (report.rhs.re, report.rhs.im),
        residual: report.residual,
        n_max: report.n_max,
        passed,
    };
    println!("{}", serde_json::to_string(&out)?);
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Single(args) => run_single(args).map(|_| true),
        Command::Grid(args) => run_grid_cmd(args).map(|_| true),
        Command::Kernel(KernelCommand::Dump { c, kernel, out }) => (|| {
            let k = kernel.parse::<KernelSpec>()?.build(c)?;
            match out {
                Some(path) => vdc_core::kernels::save_kernel(&k, path)?,
                None => write_kernel(&k, std::io::stdout().lock())?,
            }
            Ok(true)
        })(),
        Command::Kernel(KernelCommand::Check { c, kernel, tol }) => {
            run_kernel_check(c, &kernel, tol)
        }
        Command::Poisson(PoissonCommand::Check {
            c,
            seed,
            lo,
            hi,
            n_max,
            tol,
        }) => run_poisson_check(c, seed, lo, hi, n_max, tol),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("vdc-audit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
