use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qva_core::characters::{character_principal, character_quotient, charge_refinement, QSeries};
use qva_core::principal::enumerate_qp_basis_degree;
use qva_core::Rat;

mod suites;

use suites::{Suite, VerifyConfig};

#[derive(Parser, Debug)]
#[command(
    name = "qva",
    version,
    about = "Quasi-particle bases, characters and checks for the quantum principal subspace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Plain,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the basis quasi-particle monomials of one degree.
    Enumerate {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        max_charge: Option<u32>,
    },
    /// Graded dimensions up to a degree; with --level, of the level-k quotient.
    Character {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        level: Option<u32>,
        /// Also report counts by total charge.
        #[arg(long)]
        charges: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        h_order: Option<usize>,
        #[arg(long, default_value_t = 1)]
        level: u32,
        /// Shift parameter, an integer or "a/b".
        #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 3)]
        pmax: u32,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    s.parse::<Rat>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Enumeration {
    degree: u32,
    monomials: Vec<qva_core::principal::QPMonomial>,
}

#[derive(Serialize)]
struct Character {
    coeffs: Vec<u64>,
    tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    charges: Option<Vec<std::collections::BTreeMap<u32, u64>>>,
}

#[derive(Serialize)]
struct Report {
    suite: Suite,
    passed: bool,
    checks: Vec<suites::Check>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn render<T: Serialize>(value: &T, plain: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("serializable") + "\n",
        Format::Plain => plain(),
    }
}

fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    let compute = |e: qva_core::Error| Failure::Compute(e.to_string());
    match &cli.command {
        Command::Enumerate { degree, max_charge } => {
            if *max_charge == Some(0) {
                return Err(Failure::Usage("--max-charge must be positive".into()));
            }
            let monomials = enumerate_qp_basis_degree(*degree, *max_charge);
            let text = render(
                &Enumeration { degree: *degree, monomials: monomials.clone() },
                || monomials.iter().map(|m| format!("{m}\n")).collect(),
                cli.format,
            );
            Ok((text, true))
        }
        Command::Character { degree, level, charges } => {
            let series: QSeries = match level {
                Some(0) => return Err(Failure::Usage("--level must be positive".into())),
                Some(k) => character_quotient(*k, *degree).map_err(compute)?,
                None => character_principal(*degree),
            };
            let refinement = charges.then(|| charge_refinement(*degree, *level));
            let plain = || {
                let cs: Vec<String> = series.coeffs.iter().map(u64::to_string).collect();
                cs.join(" ") + "\n"
            };
            let c = Character { coeffs: series.coeffs.clone(), tag: series.tag.clone(), charges: refinement };
            Ok((render(&c, plain, cli.format), true))
        }
        Command::Verify { suite, h_order, level, t, degree, pmax, seed } => {
            if *level == 0 || *pmax == 0 || *h_order == Some(0) {
                return Err(Failure::Usage("--level, --pmax and --h-order must be positive".into()));
            }
            let cfg = VerifyConfig { order: *h_order, level: *level, t: t.clone(), degree: *degree, pmax: *pmax };
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let checks = suites::run(*suite, &cfg, &mut rng).map_err(compute)?;
            let passed = checks.iter().all(|c| c.passed);
            let report = Report { suite: *suite, passed, checks };
            let plain = || {
                let mut s = String::new();
                for c in &report.checks {
                    s += &format!("{} {} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.name, c.params);
                    if let Some(w) = &c.witness {
                        s += &format!(" witness: {w}");
                    }
                    s.push('\n');
                }
                s + if report.passed { "all passed\n" } else { "some checks failed\n" }
            };
            Ok((render(&report, plain, cli.format), passed))
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QVA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization only fails if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (text, ok) = match execute(&cli) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
