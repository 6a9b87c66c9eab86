//! ask: key polynomials, nonsymmetric Macdonald polynomials, almost
//! symmetric Schur functions, and the property suites that tie them together.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource guard tripped.

use clap::{Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

use ask_core::almost::{
    almost_schur_by_combinatorics, almost_schur_by_recursion, key_polynomial, kostka_almost,
};
use ask_core::combinatorics::{parse_composition, render_composition};
use ask_core::filling::compute_e;
use ask_core::operators::DEFAULT_BLOCK_LIMIT;
use ask_core::verify::{suite_with_limit, Check, CheckResult};
use ask_core::{Partition, SigmaPair, TailBasis};
use std::time::{Duration, Instant};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;

#[derive(Parser)]
#[command(name = "ask", version, about = "Exact engine for key polynomials and almost symmetric Schur functions")]
struct Cli {
    /// Worker threads for verification suites.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    jobs: usize,

    /// Largest symmetrization block the operators will expand.
    #[arg(long, global = true, value_name = "SIZE")]
    max_sym_cost: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Copy, Clone, Default, PartialEq, Eq, ValueEnum)]
enum Basis {
    Monomial,
    #[default]
    Schur,
}

#[derive(Copy, Clone, Default, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    #[default]
    Recursion,
    Combinatorial,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Key polynomial of a composition, e.g. `ask key 3,2,1`.
    Key {
        alpha: String,
        /// Pad with trailing zeros up to this many variables.
        #[arg(long, value_name = "N")]
        vars: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Nonsymmetric Macdonald polynomial of a composition.
    E {
        mu: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Expand an almost symmetric Schur function, e.g. `ask as-schur "mu=2;lambda=3,1"`.
    AsSchur {
        pair: String,
        #[arg(long, value_enum, default_value_t)]
        basis: Basis,
        /// `both` runs the operator recursion and the labelling count and
        /// fails if they disagree.
        #[arg(long, value_enum, default_value_t)]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Kostka coefficients of a pair: one value with --head/--tail, else the table.
    Kostka {
        pair: String,
        #[arg(long, requires = "tail")]
        head: Option<String>,
        #[arg(long, requires = "head")]
        tail: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a property suite: relations, specialization, positivity, or stability.
    Verify {
        suite: String,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

fn usage<T>(msg: String) -> Result<T, Failure> {
    Err((EXIT_USAGE, msg))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let limit = cli.max_sym_cost.unwrap_or(DEFAULT_BLOCK_LIMIT);
    match cli.command {
        Command::Key { alpha, vars, format } => {
            let mut a = parse_composition(&alpha).map_err(|e| (EXIT_USAGE, e))?;
            if let Some(n) = vars {
                if n < a.len() {
                    return usage(format!(
                        "--vars {n} is below the composition length {}",
                        a.len()
                    ));
                }
                a.resize(n, 0);
            }
            print_q_polynomial(&key_polynomial(&a), format);
            Ok(ExitCode::SUCCESS)
        }
        Command::E { mu, format } => {
            let m = parse_composition(&mu).map_err(|e| (EXIT_USAGE, e))?;
            let e = compute_e(&m);
            match format {
                Format::Text => println!("{e}"),
                Format::Json => println!("{}", e.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::AsSchur { pair, basis, algorithm, format } => {
            let pair = SigmaPair::parse(&pair).map_err(|e| (EXIT_USAGE, e))?;
            let basis = match basis {
                Basis::Monomial => TailBasis::Monomial,
                Basis::Schur => TailBasis::Schur,
            };
            let recursion = || {
                almost_schur_by_recursion(&pair)
                    .map(|f| f.convert(basis))
                    .map_err(|e| (EXIT_VERIFY, format!("{pair}: {e}")))
            };
            let result = match algorithm {
                Algorithm::Recursion => recursion()?,
                Algorithm::Combinatorial => almost_schur_by_combinatorics(&pair).convert(basis),
                Algorithm::Both => {
                    let rec = recursion()?;
                    let comb = almost_schur_by_combinatorics(&pair).convert(basis);
                    if rec != comb {
                        eprintln!("error: the two algorithms disagree for {pair}");
                        eprintln!("  recursion:  {rec}");
                        eprintln!("  labellings: {comb}");
                        return Ok(ExitCode::from(EXIT_VERIFY));
                    }
                    rec
                }
            };
            match format {
                Format::Text => println!("{result}"),
                Format::Json => println!("{}", result.to_json(Some(&pair))),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kostka { pair, head, tail, format } => {
            let pair = SigmaPair::parse(&pair).map_err(|e| (EXIT_USAGE, e))?;
            match (head, tail) {
                (Some(h), Some(t)) => {
                    let alpha = parse_composition(&h).map_err(|e| (EXIT_USAGE, e))?;
                    let nu = parse_composition(&t)
                        .and_then(|p| {
                            Partition::new(p).ok_or_else(|| format!("--tail {t} is not a partition"))
                        })
                        .map_err(|e| (EXIT_USAGE, e))?;
                    let value = kostka_almost(&pair, &alpha, &nu);
                    match format {
                        Format::Text => println!("{value}"),
                        Format::Json => println!(
                            "{}",
                            serde_json::json!({
                                "pair": pair.render(),
                                "head": alpha,
                                "tail": nu.parts(),
                                "value": value,
                            })
                        ),
                    }
                }
                (None, None) => {
                    let table = almost_schur_by_combinatorics(&pair);
                    match format {
                        Format::Text => {
                            for ((head, tail), coeff) in table.sorted_terms() {
                                println!(
                                    "K(({}|{})) = {coeff}",
                                    render_composition(&head),
                                    tail
                                );
                            }
                        }
                        Format::Json => println!("{}", table.to_json(Some(&pair))),
                    }
                }
                // clap's `requires` already rejects one flag without the other.
                _ => unreachable!(),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, degree, seed } => {
            let checks = suite_with_limit(&suite, degree, seed, limit).ok_or_else(|| {
                (
                    EXIT_USAGE,
                    format!(
                        "unknown suite {suite:?}; expected relations, specialization, \
                         positivity, or stability"
                    ),
                )
            })?;
            let total = checks.len();
            let results = run_suite(checks, cli.jobs);
            let mut failures = 0;
            let mut guard_only = true;
            for (r, took) in &results {
                match &r.outcome {
                    Ok(()) => println!("check {}: PASS [{took:.2?}]", r.name),
                    Err(msg) => {
                        failures += 1;
                        guard_only &= msg.starts_with("resource guard");
                        println!("check {}: FAIL [{took:.2?}] {msg}", r.name);
                    }
                }
            }
            println!("suite {suite}: {} passed, {failures} failed", total - failures);
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else if guard_only {
                ExitCode::from(EXIT_GUARD)
            } else {
                ExitCode::from(EXIT_VERIFY)
            })
        }
    }
}

fn run_suite(checks: Vec<Check>, jobs: usize) -> Vec<(CheckResult, Duration)> {
    fn timed((name, run): Check) -> (CheckResult, Duration) {
        let start = Instant::now();
        let outcome = run();
        (CheckResult { name, outcome }, start.elapsed())
    }
    if jobs <= 1 {
        return checks.into_iter().map(timed).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("worker pool");
    pool.install(|| {
        use rayon::prelude::*;
        checks.into_par_iter().map(timed).collect()
    })
}

fn print_q_polynomial(p: &ask_core::poly::QPolynomial, format: Format) {
    match format {
        Format::Text => println!("{p}"),
        Format::Json => println!("{}", p.to_json()),
    }
}
