//! Command-line front end. All output is UTF-8 line-delimited JSON, one
//! object per instance, to stdout or `--out`. Exit codes: 0 on success,
//! 1 when a verification suite finds violations, 2 on input errors.

use clap::{Parser, Subcommand, ValueEnum};
use g2jac_cli::pipelines::{self, SweepConfig};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "g2jac",
    about = "Genus-2 Jacobian and quartic-CM verification harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Ed1,
    C2,
    Geometric,
    SylowGen,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count points, build P(X), and (within the enumeration bound)
    /// compute the group structure and Sylow ranks of one curve.
    AnalyzeCurve {
        #[arg(long)]
        p: u64,
        /// Coefficients of f, lowest degree first (6 or 7 values).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
        /// Primes to report embedding degrees for (default: odd primes
        /// dividing the order, excluding p).
        #[arg(long, value_delimiter = ',')]
        ell: Option<Vec<u64>>,
        #[arg(long, default_value_t = g2jac::DEFAULT_ENUM_BOUND)]
        enum_bound: u64,
    },
    /// Validate a CM instance (D, a, b, c1..c4), compute p and P(X), and
    /// run the congruence predicates for each applicable ell.
    AnalyzeCm {
        #[arg(long = "D")]
        d: u64,
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        /// The four Frobenius coefficients c1,c2,c3,c4.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        ell: Option<Vec<u64>>,
    },
    /// Enumerate CM parameter tuples and emit every instance with a prime
    /// Frobenius norm p <= p-max and a Weil-valid P(X).
    Sweep {
        #[arg(long = "D-max")]
        d_max: u64,
        /// Bound for a (1..=ab-max) and |b|.
        #[arg(long)]
        ab_max: i64,
        /// Bound for |c1|..|c4|.
        #[arg(long)]
        c_max: i64,
        #[arg(long)]
        p_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: rayon's choice).
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite; exits nonzero on any violation.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 31)]
        ell_max: u64,
        #[arg(long, default_value_t = 30)]
        curves: usize,
        #[arg(long, default_value_t = 61)]
        p_max: u64,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random search for a generator of the ell-Sylow subgroup.
    SylowGen {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        f: Vec<i64>,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1000)]
        max_trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit_lines(out: Option<PathBuf>, lines: &[String]) -> std::io::Result<()> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            for l in lines {
                writeln!(file, "{l}")?;
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for l in lines {
                writeln!(lock, "{l}")?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, Box<dyn std::error::Error>> {
    match cli.cmd {
        Cmd::AnalyzeCurve {
            p,
            f,
            ell,
            enum_bound,
        } => {
            let report = pipelines::analyze_curve(p, &f, ell, enum_bound)?;
            emit_lines(None, &[serde_json::to_string(&report)?])?;
            Ok(0)
        }
        Cmd::AnalyzeCm { d, a, b, c, ell } => {
            let c: [i64; 4] = c
                .try_into()
                .map_err(|_| "expected exactly four Frobenius coefficients --c c1,c2,c3,c4")?;
            let report = pipelines::analyze_cm_instance(d, a, b, c, ell)?;
            emit_lines(None, &[serde_json::to_string(&report)?])?;
            Ok(0)
        }
        Cmd::Sweep {
            d_max,
            ab_max,
            c_max,
            p_max,
            out,
            threads,
            seed,
        } => {
            if p_max > 1 << 31 {
                return Err("--p-max must be at most 2^31".into());
            }
            let cfg = SweepConfig {
                d_max,
                ab_max,
                c_max,
                p_max,
                seed,
                threads,
            };
            let outcome = pipelines::sweep_cm_params(&cfg);
            let lines: Vec<String> = outcome
                .records
                .iter()
                .map(|r| serde_json::to_string(r).expect("serializable record"))
                .collect();
            emit_lines(out, &lines)?;
            eprintln!(
                "scanned {} tuples: {} instances, {} skipped ({})",
                outcome.scanned,
                outcome.records.len(),
                outcome.skipped.total(),
                serde_json::to_string(&outcome.skipped)?
            );
            Ok(0)
        }
        Cmd::Verify {
            suite,
            ell_max,
            curves,
            p_max,
            trials,
            seed,
        } => {
            let summary = match suite {
                Suite::Ed1 => pipelines::verify_ed1(ell_max),
                Suite::C2 => pipelines::verify_c2(ell_max),
                Suite::Geometric => pipelines::verify_geometric(curves, p_max, seed),
                Suite::SylowGen => pipelines::verify_sylow_gen(trials, p_max, seed),
            };
            emit_lines(None, &[serde_json::to_string(&summary)?])?;
            Ok(if summary.passed { 0 } else { 1 })
        }
        Cmd::SylowGen {
            p,
            f,
            ell,
            max_trials,
            seed,
        } => {
            let record = pipelines::run_sylow_gen(p, &f, ell, max_trials, seed)?;
            emit_lines(None, &[serde_json::to_string(&record)?])?;
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
