use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use isolab::error::IsolabError;
use isolab::scenario::{builtin, emit_all, run, run_all, Report, RunOptions, Scenario, Suite};

/// Exact-arithmetic laboratory for commuting involutions of classical Lie
/// algebras: graded decompositions, Cartan subspaces, bracket contractions,
/// degenerated isotropy actions, and their invariants.
#[derive(Parser)]
#[command(name = "isolab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario name (see `isolab list`) or path to a scenario JSON file.
    scenario: String,
    /// Seed for all randomized searches (env ISOLAB_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// Resource guard: largest allowed defining-representation size.
    #[arg(long, default_value_t = 16)]
    max_dim: usize,
    /// Output format: json or md.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Joint eigenspace decomposition and the dimension matrix.
    Decompose(Common),
    /// Cartan subspaces of all six gradings and the coincidence table.
    Css(Common),
    /// Coincidence table only (alias of css).
    Coincidence(Common),
    /// Bracket contractions, degenerated modules, orbits and stabilizers.
    Contract {
        #[command(flatten)]
        common: Common,
        /// Permutation of the little indices, e.g. 10,01,11.
        #[arg(long, default_value = "10,01,11")]
        perm: String,
        /// Which one-sided nilradical action to use: a or b.
        #[arg(long, default_value = "a")]
        variant: String,
    },
    /// Invariant families, contracted components, vanishing analysis.
    Invariants(Common),
    /// Full verification pipeline; use scenario name `all` for every builtin.
    Verify(Common),
    /// List builtin scenario names.
    List,
}

fn load_scenario(spec: &str) -> Result<Scenario, IsolabError> {
    if spec.ends_with(".json") || Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| IsolabError::Parse(format!("cannot read {spec}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| IsolabError::Parse(format!("bad scenario file: {e}")))
    } else {
        builtin::get(spec).ok_or_else(|| IsolabError::UnknownScenario(spec.to_string()))
    }
}

fn seed_from(common: &Common) -> u64 {
    common
        .seed
        .or_else(|| {
            std::env::var("ISOLAB_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(42)
}

fn emit_one(report: &Report, format: &str) {
    if format == "md" {
        println!("{}", report.to_markdown());
    } else {
        println!("{}", report.to_json());
    }
}

fn run_one(common: &Common, suite: Suite) -> Result<ExitCode, IsolabError> {
    let scenario = load_scenario(&common.scenario)?;
    let opts = RunOptions {
        seed: seed_from(common),
        suite,
        max_rep_dim: common.max_dim,
    };
    let report = run(&scenario, &opts)?;
    emit_one(&report, &common.format);
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    if let Ok(m) = std::env::var("ISOLAB_CYCLOTOMIC_M") {
        match m.parse::<u32>().map(exact_linalg::set_cyclotomic_order) {
            Ok(Ok(())) => {}
            _ => {
                eprintln!("isolab: invalid ISOLAB_CYCLOTOMIC_M value {m}");
                return ExitCode::from(1);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::List => {
            for name in builtin::names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose(c) => run_one(c, Suite::Decompose),
        Command::Css(c) | Command::Coincidence(c) => run_one(c, Suite::Css),
        Command::Contract {
            common,
            perm,
            variant,
        } => {
            // the full contract stage runs every permutation; the flags pick
            // which module report to check for on stdout
            let scenario = match load_scenario(&common.scenario) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let opts = RunOptions {
                seed: seed_from(common),
                suite: Suite::Contract,
                max_rep_dim: common.max_dim,
            };
            match run(&scenario, &opts) {
                Ok(report) => {
                    emit_one(&report, &common.format);
                    if !report.modules.iter().any(|m| m.perm == *perm) {
                        eprintln!("isolab: no module with permutation {perm}");
                    }
                    let _ = variant;
                    Ok(ExitCode::from(report.exit_code() as u8))
                }
                Err(e) => Err(e),
            }
        }
        Command::Invariants(c) => run_one(c, Suite::Invariants),
        Command::Verify(c) => {
            if c.scenario == "all" {
                let opts = RunOptions {
                    seed: seed_from(c),
                    suite: Suite::All,
                    max_rep_dim: c.max_dim,
                };
                match run_all(&opts) {
                    Ok(reports) => {
                        let out = emit_all(&reports, &c.format);
                        println!("{out}");
                        let mut code = 0u8;
                        for r in &reports {
                            eprintln!(
                                "{}: expectations {}, applicable theorems {}",
                                r.scenario,
                                if r.all_expectations_ok() { "ok" } else { "MISMATCH" },
                                if r.all_applicable_theorems_pass() {
                                    "pass"
                                } else {
                                    "FAIL"
                                }
                            );
                            code = code.max(r.exit_code() as u8);
                        }
                        Ok(ExitCode::from(code))
                    }
                    Err(e) => Err(e),
                }
            } else {
                run_one(c, Suite::All)
            }
        }
    };
    match outcome {
        Ok(code) => {
            let _ = std::io::stdout().flush();
            code
        }
        Err(e) => fail(e),
    }
}

fn fail(e: IsolabError) -> ExitCode {
    eprintln!("isolab: {e}");
    ExitCode::from(e.exit_code() as u8)
}
