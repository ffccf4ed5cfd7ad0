use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oddcycle::arith::order2_oracle;
use oddcycle::conjectures::{
    check_fermat_cycles, check_mersenne_counts, check_mersenne_symmetry, fermat_number, screen,
    ScreenOptions, Target,
};
use oddcycle::cycles::{
    self, decompose, DecomposeOptions, ElementPolicy, OddModulus, DEFAULT_MEMORY_BUDGET,
};
use oddcycle::group::{quotient_group, verify_group_axioms, AxiomBudgets, AxiomMode, DEFAULT_TABLE_CAP};
use oddcycle::output::{
    render_decomposition, render_group, render_order, render_report, render_screen, render_sweep,
    Format,
};
use oddcycle::sweep::{run_sweep, CheckSet, SweepOptions};
use oddcycle::Error;

const WORKERS_ENV: &str = "ODDCYCLE_WORKERS";

#[derive(Parser)]
#[command(
    name = "oddcycle",
    version,
    about = "Cycle decomposition of odd moduli, the order of 2 by orbit walking, \
             and Mersenne/Fermat cycle-symmetry verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit JSON instead of text
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV instead of text
    #[arg(long, global = true)]
    csv: bool,

    /// Memory budget in bytes for decomposition scratch space
    #[arg(long, global = true, value_name = "BYTES")]
    max_memory: Option<u64>,

    /// Drop element lists from decompositions (statistics stay exact)
    #[arg(long, global = true)]
    no_elements: bool,

    /// Seed for sampled axiom checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweeps and screens (default: ODDCYCLE_WORKERS,
    /// else all cores); results do not depend on this
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AxiomModeArg {
    /// Exhaustive when affordable, otherwise sampled
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the odd residues below Q into cycles
    Decompose {
        q: u64,
    },
    /// Multiplicative order of 2 modulo Q, computed by walking the cycle of 1
    Order {
        q: u64,
        /// Also compute the order by direct powering and compare
        #[arg(long)]
        verify: bool,
    },
    /// Classes of the quotient group and an axiom verification report
    Group {
        q: u64,
        /// Include the full class multiplication table (small class counts)
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = AxiomModeArg::Auto)]
        mode: AxiomModeArg,
        /// Trials per axiom in sampled mode
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Check that all cycles of F_N (or of --divisor D) have length 2^N
    Fermat {
        n: u32,
        #[arg(long, value_name = "D")]
        divisor: Option<u64>,
    },
    /// Check the cycle counts of M_P against (p-1)!/(k!(p-k)!), or the
    /// count symmetry of --divisor D
    Mersenne {
        p: u64,
        #[arg(long, value_name = "D")]
        divisor: Option<u64>,
    },
    /// Screen odd moduli in [LO, HI] for the target's cycle criterion
    Screen {
        lo: u64,
        hi: u64,
        /// Screen against M_P
        #[arg(long, value_name = "P", conflicts_with = "fermat")]
        mersenne: Option<u64>,
        /// Screen against F_N
        #[arg(long, value_name = "N")]
        fermat: Option<u32>,
        /// Decompose every modulus instead of order-prefiltering
        #[arg(long)]
        no_prefilter: bool,
    },
    /// Verify identities for every odd q in [LO, HI]
    Sweep {
        lo: u64,
        hi: u64,
        /// Comma-separated: order, tau, prop3, group, all
        #[arg(long, default_value = "order,tau,prop3")]
        checks: String,
    },
}

fn worker_count(cli: &Cli) -> usize {
    cli.workers
        .or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

fn format_of(cli: &Cli) -> Format {
    if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::MemoryBudget { .. } | Error::TrialBudget { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let format = format_of(cli);
    let budget = cli.max_memory.unwrap_or(DEFAULT_MEMORY_BUDGET);
    let workers = worker_count(cli);

    match &cli.command {
        Command::Decompose { q } => {
            let q = OddModulus::new(*q)?;
            let opts = DecomposeOptions {
                elements: if cli.no_elements {
                    ElementPolicy::Drop
                } else {
                    ElementPolicy::Auto
                },
                max_memory_bytes: budget,
            };
            let d = decompose(q, &opts)?;
            print!("{}", render_decomposition(&d, format));
            Ok(0)
        }
        Command::Order { q, verify } => {
            let q = OddModulus::new(*q)?;
            let eps = cycles::epsilon(q);
            let oracle = verify.then(|| order2_oracle(q));
            print!("{}", render_order(q.get(), eps, oracle, format));
            Ok(if oracle.is_some_and(|o| o != eps) { 1 } else { 0 })
        }
        Command::Group { q, table, mode, samples } => {
            let q = OddModulus::new(*q)?;
            let g = quotient_group(q, *table, DEFAULT_TABLE_CAP)?;
            let mode = match mode {
                AxiomModeArg::Auto => AxiomMode::Auto,
                AxiomModeArg::Exhaustive => AxiomMode::Exhaustive,
                AxiomModeArg::Sampled => AxiomMode::Sampled { trials: *samples },
            };
            let report = verify_group_axioms(q, mode, cli.seed, &AxiomBudgets::default())?;
            print!("{}", render_group(&g, &report, format));
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Fermat { n, divisor } => {
            let d = match divisor {
                Some(d) => *d,
                None => fermat_number(*n)?,
            };
            let d = OddModulus::new(d)?;
            let report = check_fermat_cycles(d, *n, budget)?;
            eprintln!("checked {} in {:.3}s", d, report.elapsed.as_secs_f64());
            print!("{}", render_report(&report, format));
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Mersenne { p, divisor } => {
            let report = match divisor {
                None => check_mersenne_counts(*p, budget)?,
                Some(d) => check_mersenne_symmetry(OddModulus::new(*d)?, *p, budget)?,
            };
            eprintln!(
                "checked {} in {:.3}s",
                report.subject,
                report.elapsed.as_secs_f64()
            );
            print!("{}", render_report(&report, format));
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Screen { lo, hi, mersenne, fermat, no_prefilter } => {
            let target = match (mersenne, fermat) {
                (Some(p), None) => Target::Mersenne { p: *p },
                (None, Some(n)) => Target::Fermat { n: *n },
                _ => {
                    eprintln!("error: screen requires exactly one of --mersenne P or --fermat N");
                    return Ok(2);
                }
            };
            let opts = ScreenOptions {
                prefilter: !no_prefilter,
                workers,
                max_memory_bytes: budget,
            };
            let outcome = screen(*lo, *hi, target, &opts)?;
            eprintln!(
                "screened [{lo}, {hi}] in {:.3}s",
                outcome.elapsed.as_secs_f64()
            );
            let violations = outcome.violations();
            print!("{}", render_screen(&outcome, format));
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Command::Sweep { lo, hi, checks } => {
            let checks = match CheckSet::parse(checks) {
                Ok(c) => c,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return Ok(2);
                }
            };
            let opts = SweepOptions {
                checks,
                workers,
                seed: cli.seed,
                max_memory_bytes: budget,
                ..Default::default()
            };
            let results = run_sweep(*lo, *hi, &opts)?;
            let total: f64 = results.iter().map(|r| r.elapsed.as_secs_f64()).sum();
            eprintln!("swept {} moduli in {total:.3}s of check time", results.len());
            let failed = results.iter().any(|r| r.failed());
            print!("{}", render_sweep(&results, format));
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
