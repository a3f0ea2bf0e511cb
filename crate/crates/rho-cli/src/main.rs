//! `rho`: exact counting of solutions of x_1^2 + ... + x_k^2 = lambda (mod n).
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 budget
//! or size refusal.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;

use rho_cli::output::OutputRecord;
use rho_cli::{bench, selftest, verify};
use rho_core::numbers::DEFAULT_EXACT_LIMIT_BITS;
use rho_core::{
    composer, parse_modulus, parse_structured, Engine, Error, Natural, OpCount,
};

#[derive(Parser)]
#[command(
    name = "rho",
    version,
    about = "Counts the solutions of x1^2 + ... + xk^2 = lambda (mod n) in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute rho_{k,lambda}(n)
    Compute(ComputeArgs),
    /// Run the differential verification suites
    Verify(VerifyArgs),
    /// Emit op-count and timing benchmarks as CSV
    Bench(BenchArgs),
    /// Validate the closed-form base tables against oracles
    Selftest,
}

#[derive(Args)]
struct ComputeArgs {
    /// Number of squares (decimal, any size)
    #[arg(long)]
    k: String,
    /// Target residue; structured form like 5^100000 is accepted
    #[arg(long)]
    lambda: String,
    /// Modulus; structured form like 2^3*5^2 is accepted
    #[arg(long)]
    n: String,
    /// Engine: closed | recursive | bruteforce | gauss | toth | matrix
    #[arg(long, default_value = "closed")]
    engine: String,
    /// Also report the value modulo M (repeatable; structured form allowed)
    #[arg(long = "mod", value_name = "M")]
    mods: Vec<String>,
    /// Force exact decimal rendering (size-guarded; see RHO_EXACT_LIMIT_BITS)
    #[arg(long)]
    exact: bool,
    /// Emit a JSON record instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exhaustive differential suite over all n up to this bound
    #[arg(long = "max-n", default_value_t = 48)]
    max_n: u64,
    #[arg(long = "max-k", default_value_t = 4)]
    max_k: u32,
    /// Additionally run COUNT random large closed-vs-recursive instances
    #[arg(long = "random-large", value_name = "COUNT")]
    random_large: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// scaling | engines
    #[arg(long)]
    suite: String,
    /// Write the CSV here instead of standard output
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Compute(args) => cmd_compute(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Selftest => Ok(cmd_selftest()),
    }
}

fn exact_limit_bits() -> u64 {
    std::env::var("RHO_EXACT_LIMIT_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_EXACT_LIMIT_BITS)
}

/// Writes to stdout, treating a closed pipe as a normal end of output.
fn print_out(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        std::process::exit(0);
    }
}

/// Values up to this many digits render exactly without being asked.
const AUTO_EXACT_DIGITS: u64 = 10_000;

fn cmd_compute(args: ComputeArgs) -> Result<i32, Error> {
    let k: Natural = args
        .k
        .trim()
        .parse()
        .map_err(|e| Error::Parse { pos: 0, msg: format!("--k: {e}") })?;
    let lambda = parse_structured(&args.lambda)?;
    let n = parse_modulus(&args.n)?;
    let engine = Engine::parse(&args.engine)?;

    let moduli: Vec<(String, Natural)> = args
        .mods
        .iter()
        .map(|text| -> Result<(String, Natural), Error> {
            let parsed = parse_structured(text)?;
            let value = parsed.eval(1 << 20)?;
            if value.is_zero() {
                return Err(Error::InvalidModulus);
            }
            Ok((parsed.to_string(), value))
        })
        .collect::<Result<_, _>>()?;

    let ops = OpCount::new();
    let t0 = Instant::now();
    let result = composer::rho_general_counted(&k, &lambda, &n, engine, &ops)?;
    let mut mod_evals = BTreeMap::new();
    for (name, m) in &moduli {
        mod_evals.insert(name.clone(), result.eval_mod(m)?.to_string());
    }
    let exact = if args.exact {
        Some(result.eval_exact_limited(exact_limit_bits())?.to_string())
    } else if result.digits_estimate() <= Natural::from(AUTO_EXACT_DIGITS) {
        Some(result.eval_exact_limited(exact_limit_bits())?.to_string())
    } else {
        None
    };
    let timings_ns = t0.elapsed().as_nanos() as u64;

    let record = OutputRecord::new(
        engine.name(),
        &args.k.trim().to_string(),
        &lambda.to_string(),
        &n.to_string(),
        &result,
        mod_evals,
        exact,
        timings_ns,
        ops.get(),
    );

    let mut text = String::new();
    if args.json {
        text = serde_json::to_string_pretty(&record).unwrap();
        text.push('\n');
    } else {
        match &record.exact {
            Some(v) => {
                text.push_str(v);
                text.push('\n');
            }
            None => {
                text.push_str(&format!(
                    "# value has about {} decimal digits\n",
                    record.digits10_estimate
                ));
                for f in &record.terms {
                    let terms: Vec<String> = f
                        .terms
                        .iter()
                        .map(|t| match (&t.step, &t.count) {
                            (Some(step), Some(count)) => format!(
                                "{}*{}^{}*G({}^{}, {})",
                                t.coeff, f.p, t.exp, f.p, step, count
                            ),
                            _ => format!("{}*{}^{}", t.coeff, f.p, t.exp),
                        })
                        .collect();
                    text.push_str(&format!("# factor {}^{}: {}\n", f.p, f.s, terms.join(" + ")));
                }
            }
        }
        for (m, v) in &record.mod_evals {
            text.push_str(&format!("mod {m}: {v}\n"));
        }
    }
    print_out(&text);
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let mut outcome = verify::exhaustive_suite(args.max_n, args.max_k)?;
    if let Some(count) = args.random_large {
        let extra = verify::random_large_suite(count, args.seed)?;
        outcome.cases += extra.cases;
        outcome.failures.extend(extra.failures);
    }
    if outcome.passed() {
        println!("PASS ({} cases)", outcome.cases);
        Ok(0)
    } else {
        println!(
            "FAIL ({} mismatches out of {} cases)",
            outcome.failures.len(),
            outcome.cases
        );
        println!("first failing tuple: {}", outcome.failures[0]);
        Ok(1)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32, Error> {
    let rows = match args.suite.as_str() {
        "scaling" => bench::scaling_suite()?,
        "engines" => bench::engines_suite()?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown bench suite '{other}' (expected scaling or engines)"
            )))
        }
    };
    let csv = bench::rows_to_csv(&rows);
    match args.out {
        Some(path) => {
            std::fs::write(&path, csv)
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        }
        None => print_out(&csv),
    }
    Ok(0)
}

fn cmd_selftest() -> i32 {
    match selftest::run() {
        Ok(identities) => {
            println!("SELFTEST PASS ({identities} identities)");
            0
        }
        Err(first_failure) => {
            println!("SELFTEST FAIL: {first_failure}");
            1
        }
    }
}
