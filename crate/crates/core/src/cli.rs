//! Command-line front end: JSON instances in, single-line JSON results out.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde_json::json;

use crate::counting::{approx_count, count_exact, count_mod_prime, count_mod_prime_power, PrimePower};
use crate::decider::decide_with;
use crate::error::{Error, Result};
use crate::model::{parse_instance, InstanceKind, ParsedInstance, DEFAULT_MAX_CAPACITY};
use crate::oracle::oracle_count;
use crate::sampler::sample_with_rng;
use crate::vector::{knapsack_optimize_with, vector_decide_with, Method};

#[derive(Parser)]
#[command(name = "subsum", version, about = "Subset-sum decision, counting, and sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the JSON instance (stdin when omitted)
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,

    /// Report peak working-register bits alongside the result
    #[arg(long, global = true)]
    meter: bool,

    /// Refuse instances whose capacity C exceeds this bound
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_CAPACITY)]
    max_capacity: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether any subset hits the target
    Decide,
    /// Count solutions modulo a prime power or exactly
    Count {
        /// Modulus as p or p^k
        #[arg(long)]
        modulus: Option<String>,
        /// Exact count via CRT over enough primes
        #[arg(long)]
        exact: bool,
        /// Exact count via the brute-force oracle (debugging)
        #[arg(long, hide = true)]
        oracle: bool,
    },
    /// Approximate the count to a given number of significant bits
    Approx {
        #[arg(long, default_value_t = 12)]
        bits: u32,
    },
    /// Draw uniform solutions
    Sample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// Maximize the value sum under the weight bound
    Knapsack,
    /// Decide a vector-valued instance
    VectorDecide {
        #[arg(long, value_enum, default_value_t = MethodArg::Scalarize)]
        method: MethodArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Scalarize,
    Multivariate,
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", json!({ "error": error_name(&e) }));
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Vec<String>> {
    let kind = match cli.command {
        Command::Knapsack => InstanceKind::Knapsack,
        Command::VectorDecide { .. } => InstanceKind::Vector,
        _ => InstanceKind::Scalar,
    };
    let text = read_input(cli)?;
    let parsed = parse_instance(&text, kind, cli.max_capacity)?;

    match (&cli.command, parsed) {
        (Command::Decide, ParsedInstance::Scalar(inst)) => {
            let (result, report) = decide_with(&inst, cli.meter, cli.max_capacity)?;
            let out = if cli.meter {
                json!({ "result": result, "space": report })
            } else {
                json!({ "result": result })
            };
            Ok(vec![out.to_string()])
        }
        (Command::Count { modulus, exact, oracle }, ParsedInstance::Scalar(inst)) => {
            match (modulus, exact, oracle) {
                (Some(spec), false, false) => {
                    let (p, k) = parse_modulus(spec)?;
                    let r = if k == 1 {
                        if !crate::numtheory::is_prime(p) {
                            return Err(Error::ParseError(format!("{p} is not prime")));
                        }
                        count_mod_prime(&inst, p)?
                    } else {
                        count_mod_prime_power(&inst, PrimePower::new(p, k)?)?
                    };
                    let name = if k == 1 { format!("{p}") } else { format!("{p}^{k}") };
                    Ok(vec![json!({ "modulus": name, "residue": r.value }).to_string()])
                }
                (None, true, false) => {
                    let a = count_exact(&inst)?;
                    Ok(vec![json!({ "count": a.to_string() }).to_string()])
                }
                (None, false, true) => {
                    let a = oracle_count(&inst)?;
                    Ok(vec![json!({ "count": a.to_string() }).to_string()])
                }
                _ => Err(Error::ParseError(
                    "count needs exactly one of --modulus, --exact, --oracle".into(),
                )),
            }
        }
        (Command::Approx { bits }, ParsedInstance::Scalar(inst)) => {
            let est = approx_count(&inst, *bits)?;
            Ok(vec![json!({
                "exponent": est.exponent,
                "mantissa": est.mantissa,
                "zero": est.zero,
            })
            .to_string()])
        }
        (Command::Sample { seed, samples }, ParsedInstance::Scalar(inst)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut lines = Vec::new();
            for _ in 0..*samples {
                let subset = sample_with_rng(&inst, &mut rng)?;
                lines.push(json!(subset).to_string());
            }
            Ok(lines)
        }
        (Command::Knapsack, ParsedInstance::Knapsack(inst)) => {
            let r = knapsack_optimize_with(&inst, cli.max_capacity)?;
            Ok(vec![serde_json::to_string(&r).expect("results serialize")])
        }
        (Command::VectorDecide { method }, ParsedInstance::Vector(inst)) => {
            let m = match method {
                MethodArg::Scalarize => Method::Scalarize,
                MethodArg::Multivariate => Method::Multivariate,
            };
            let result = vector_decide_with(&inst, m, cli.max_capacity)?;
            let name = match method {
                MethodArg::Scalarize => "scalarize",
                MethodArg::Multivariate => "multivariate",
            };
            Ok(vec![json!({ "method": name, "result": result }).to_string()])
        }
        _ => Err(Error::Internal("subcommand/instance mismatch".into())),
    }
}

fn read_input(cli: &Cli) -> Result<String> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::ParseError(format!("{}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::ParseError(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_modulus(spec: &str) -> Result<(u64, u32)> {
    let bad = || Error::ParseError(format!("bad modulus {spec:?}, expected p or p^k"));
    match spec.split_once('^') {
        None => Ok((spec.parse().map_err(|_| bad())?, 1)),
        Some((p, k)) => {
            let k: u32 = k.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            Ok((p.parse().map_err(|_| bad())?, k))
        }
    }
}

fn error_name(e: &Error) -> &'static str {
    match e {
        Error::CapacityExceeded(..) => "CapacityExceeded",
        Error::ParseError(_) => "ParseError",
        Error::ShapeError(_) => "ShapeError",
        Error::NotInvertible(..) => "NotInvertible",
        Error::OddPrimeRequired => "OddPrimeRequired",
        Error::OrderNotDividing(..) => "OrderNotDividing",
        Error::ModulusTooLarge(_) => "ModulusTooLarge",
        Error::PrimeTooSmall(..) => "PrimeTooSmall",
        Error::FieldTooSmall(..) => "FieldTooSmall",
        Error::NonRationalSum => "NonRationalSum",
        Error::ZeroInverse => "ZeroInverse",
        Error::DivisibilityViolation(..) => "DivisibilityViolation",
        Error::DuplicatePrime(_) => "DuplicatePrime",
        Error::ZeroCount => "ZeroCount",
        Error::NoSolution => "NoSolution",
        Error::NoFeasibleSubset => "NoFeasibleSubset",
        Error::TooLarge => "TooLarge",
        Error::Overflow(_) => "Overflow",
        Error::Internal(_) => "Internal",
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ParseError(_) | Error::ShapeError(_) => 2,
        Error::CapacityExceeded(..) | Error::ModulusTooLarge(_) => 3,
        Error::Internal(_) => 1,
        _ => 4,
    }
}
