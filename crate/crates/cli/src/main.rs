//! `freeenergy`: free energy, nondeterminism and similarity of cost automata
//! stored as JSON documents.
//!
//! Exit codes: 0 success, 2 bad input or usage, 3 numerical failure,
//! 4 resource cap exceeded. `TOLERANCE` and `MAX_ITERS` in the environment
//! override the solver defaults; command-line flags override both.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use freeenergy::document::{to_json_pretty, AutomatonDocument, LinlenDocument, PairCostDocument};
use freeenergy::linlen::{linlen_energy_with, LinlenOptions};
use freeenergy::nondet::{branching_costs, lambda_exact_with, lambda_plus_with};
use freeenergy::oracle::{run_partition_series, word_partition_series};
use freeenergy::similarity::similarity_with;
use freeenergy::{
    estimate_limit, free_energy_with, implement_construction, linlen_word_oracle, CostAutomaton, EnergyOptions, Error,
    MatrixForm, PartitionSeries, SeriesKind, SolverConfig, DEFAULT_STATE_CAP,
};
use serde::Serialize;

/// Largest gap between the linear-length energy and its oracle estimate that
/// still counts as agreement.
const ORACLE_AGREEMENT: f64 = 0.1;

#[derive(Parser)]
#[command(name = "freeenergy", version, about = "Free energy of cost-weighted finite automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Compact,
    Bipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// All runs of length n.
    Runs,
    /// Runs from the initial state to an accepting state.
    AcceptingRuns,
    /// Accepted words weighted by a pair-cost file.
    Words,
}

#[derive(Subcommand)]
enum Command {
    /// Free energy of an automaton.
    Energy {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "compact")]
        form: Form,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Replace the file's costs by ln k(p,a), the log branching degree.
        #[arg(long)]
        branching_costs: bool,
        #[arg(long)]
        json: bool,
    },
    /// Nondeterminism: the estimate lambda+ and, with --exact, lambda.
    Nondet {
        path: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Shared free energy of two automata.
    Similarity {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also print delta / (E1 + E2).
        #[arg(long)]
        normalized: bool,
    },
    /// Build a cost automaton realising a pair-cost function on a DFA's language.
    Implement {
        dfa: PathBuf,
        pair_costs: PathBuf,
        out: PathBuf,
    },
    /// Partition sums computed directly, with a limit estimate.
    Oracle {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "accepting-runs")]
        kind: Kind,
        #[arg(long)]
        pair_costs: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
        #[arg(long, default_value_t = 50)]
        window: usize,
        #[arg(long)]
        json: bool,
    },
    /// Free energy of a language with linear length constraints.
    Linlen {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Compare against the enumeration oracle up to this length.
        #[arg(long)]
        oracle_check: Option<usize>,
        /// Largest number of block symbols the construction may create.
        #[arg(long, default_value_t = freeenergy::linlen::DEFAULT_BLOCK_CAP)]
        block_cap: usize,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Lib(Error::NotConverged { .. } | Error::Overflow { .. }) => 3,
            Failure::Lib(Error::StateCapExceeded { .. } | Error::BlockAlphabetTooLarge { .. }) => 4,
            Failure::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<CostAutomaton, Failure> {
    let doc = AutomatonDocument::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    doc.to_automaton()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_pair_costs(path: &Path) -> Result<PairCostDocument, Failure> {
    PairCostDocument::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Solver defaults with the environment overrides applied.
fn solver_from_env() -> Result<SolverConfig, Failure> {
    let mut solver = SolverConfig::default();
    if let Ok(v) = std::env::var("TOLERANCE") {
        solver.tolerance = v
            .parse()
            .ok()
            .filter(|t: &f64| *t > 0.0 && t.is_finite())
            .ok_or_else(|| Failure::Usage(format!("TOLERANCE must be a positive number, got {v:?}")))?;
    }
    if let Ok(v) = std::env::var("MAX_ITERS") {
        solver.max_iterations = v
            .parse()
            .ok()
            .filter(|&n: &u64| n > 0)
            .ok_or_else(|| Failure::Usage(format!("MAX_ITERS must be a positive integer, got {v:?}")))?;
    }
    Ok(solver)
}

fn energy(
    path: &Path,
    form: Form,
    tolerance: Option<f64>,
    branching: bool,
    json: bool,
    solver: SolverConfig,
) -> Outcome {
    let mut a = load_automaton(path)?;
    if branching {
        a = branching_costs(&a)?;
    }
    let mut options = EnergyOptions {
        form: match form {
            Form::Compact => MatrixForm::Compact,
            Form::Bipartite => MatrixForm::Bipartite,
        },
        solver,
    };
    if let Some(t) = tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("--tolerance must be positive, got {t}")));
        }
        options.solver.tolerance = t;
    }
    let report = free_energy_with(&a, &options)?;
    if json {
        println!("{}", to_json_pretty(&report));
    } else {
        println!("energy {:.6}", report.energy);
    }
    Ok(())
}

fn nondet(path: &Path, exact: bool, state_cap: usize, json: bool, solver: SolverConfig) -> Outcome {
    let a = load_automaton(path)?;
    let options = EnergyOptions {
        solver,
        ..Default::default()
    };
    let plus = lambda_plus_with(&a, &options)?;
    let report = if exact {
        match lambda_exact_with(&a, &options, state_cap) {
            Ok(r) => r,
            Err(e) => {
                // the estimate does not need the subset construction
                print_nondet(&plus, json);
                return Err(e.into());
            }
        }
    } else {
        plus
    };
    print_nondet(&report, json);
    Ok(())
}

fn print_nondet(r: &freeenergy::NondetReport, json: bool) {
    if json {
        println!("{}", to_json_pretty(r));
        return;
    }
    println!("lambda_plus {:.6}", r.lambda_plus);
    println!("energy_v {:.6}", r.energy_v);
    println!("energy_zero {:.6}", r.energy_zero);
    if let (Some(l), Some(e), Some(n)) = (r.lambda_exact, r.energy_dfa, r.dfa_states) {
        println!("lambda_exact {l:.6}");
        println!("energy_dfa {e:.6}");
        println!("dfa_states {n}");
    }
}

fn similarity(first: &Path, second: &Path, json: bool, normalized: bool, solver: SolverConfig) -> Outcome {
    let (a1, a2) = (load_automaton(first)?, load_automaton(second)?);
    let options = EnergyOptions {
        solver,
        ..Default::default()
    };
    let r = similarity_with(&a1, &a2, &options)?;
    if json {
        println!("{}", to_json_pretty(&r));
        return Ok(());
    }
    println!("delta {:.6}", r.delta);
    println!("energy_1 {:.6}", r.energy_1);
    println!("energy_2 {:.6}", r.energy_2);
    if normalized {
        match r.normalized {
            Some(x) => println!("normalized {x:.6}"),
            None => println!("normalized undefined"),
        }
    }
    Ok(())
}

fn implement(dfa: &Path, pair_costs: &Path, out: &Path) -> Outcome {
    let l = load_automaton(dfa)?;
    let u = load_pair_costs(pair_costs)?.to_function(&l.alphabet)?;
    let m = implement_construction(&l, &u)?;
    let text = to_json_pretty(&AutomatonDocument::from_automaton(&m));
    fs::write(out, text + "\n").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
    println!(
        "wrote {} states, {} transitions to {}",
        m.states.len(),
        m.transitions.len(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    series: PartitionSeries,
    estimate: f64,
    spread: f64,
    window: usize,
}

fn oracle(path: &Path, kind: Kind, pair_costs: Option<&Path>, max_n: usize, window: usize, json: bool) -> Outcome {
    if max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".into()));
    }
    if window == 0 {
        return Err(Failure::Usage("--window must be at least 1".into()));
    }
    let a = load_automaton(path)?;
    let series = match kind {
        Kind::Runs => run_partition_series(&a, SeriesKind::RunsAll, max_n)?,
        Kind::AcceptingRuns => run_partition_series(&a, SeriesKind::RunsAccepting, max_n)?,
        Kind::Words => {
            let doc = match pair_costs {
                Some(p) => load_pair_costs(p)?,
                None => PairCostDocument::default(),
            };
            word_partition_series(&a, &doc.to_function(&a.alphabet)?, max_n)?
        }
    };
    // lengths with nothing on them say nothing about the growth rate
    let (estimate, spread) = estimate_limit(&series.nonzero(), window);
    if json {
        let report = OracleReport {
            series,
            estimate,
            spread,
            window,
        };
        println!("{}", to_json_pretty(&report));
        return Ok(());
    }
    for (&(n, log), &(_, rate)) in series.log_values.iter().zip(&series.rates) {
        match log {
            Some(l) => println!("{n} {l:.6} {rate:.6}"),
            None => println!("{n} -inf {rate:.6}"),
        }
    }
    println!("estimate {estimate:.6}");
    println!("spread {spread:.6}");
    Ok(())
}

#[derive(Serialize)]
struct LinlenReport {
    energy: f64,
    members: Vec<f64>,
    oracle: Option<OracleCheck>,
}

#[derive(Serialize)]
struct OracleCheck {
    max_n: usize,
    estimate: f64,
    agrees: bool,
}

fn linlen(path: &Path, json: bool, oracle_check: Option<usize>, block_cap: usize, solver: SolverConfig) -> Outcome {
    let doc = LinlenDocument::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let specs = doc.to_specs()?;
    let options = LinlenOptions {
        block_cap,
        energy: EnergyOptions {
            solver,
            ..Default::default()
        },
    };
    let members = specs
        .iter()
        .map(|s| linlen_energy_with(s, &options).map(|r| r.energy))
        .collect::<Result<Vec<_>, _>>()?;
    let energy = members.iter().copied().fold(0.0, f64::max);
    let oracle = match oracle_check {
        None => None,
        Some(n) => {
            if n == 0 || n > freeenergy::linlen::ORACLE_MAX_N {
                return Err(Failure::Usage(format!(
                    "--oracle-check must lie in 1..={}",
                    freeenergy::linlen::ORACLE_MAX_N
                )));
            }
            let mut estimate: f64 = 0.0;
            for s in &specs {
                let series = linlen_word_oracle(s, n)?.nonzero();
                estimate = estimate.max(estimate_limit(&series, 12).0);
            }
            Some(OracleCheck {
                max_n: n,
                estimate,
                agrees: (estimate - energy).abs() <= ORACLE_AGREEMENT,
            })
        }
    };
    let disagrees = oracle.as_ref().is_some_and(|o| !o.agrees);
    if json {
        let report = LinlenReport {
            energy,
            members,
            oracle,
        };
        println!("{}", to_json_pretty(&report));
    } else {
        println!("energy {energy:.6}");
        if let Some(o) = &oracle {
            println!("oracle {:.6} at n = {}", o.estimate, o.max_n);
            println!("oracle agrees {}", o.agrees);
        }
    }
    if disagrees {
        return Err(Failure::Numerical(format!(
            "oracle estimate differs from the energy by more than {ORACLE_AGREEMENT}"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let solver = solver_from_env()?;
    match cli.command {
        Command::Energy {
            path,
            form,
            tolerance,
            branching_costs,
            json,
        } => energy(&path, form, tolerance, branching_costs, json, solver),
        Command::Nondet {
            path,
            exact,
            state_cap,
            json,
        } => nondet(&path, exact, state_cap, json, solver),
        Command::Similarity {
            first,
            second,
            json,
            normalized,
        } => similarity(&first, &second, json, normalized, solver),
        Command::Implement { dfa, pair_costs, out } => implement(&dfa, &pair_costs, &out),
        Command::Oracle {
            path,
            kind,
            pair_costs,
            max_n,
            window,
            json,
        } => oracle(&path, kind, pair_costs.as_deref(), max_n, window, json),
        Command::Linlen {
            path,
            json,
            oracle_check,
            block_cap,
        } => linlen(&path, json, oracle_check, block_cap, solver),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
