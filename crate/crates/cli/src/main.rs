use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lkt::flip::{self, Verdict};
use lkt::kernel::{check_with, CheckOptions, ProofDocument, Sequent};
use lkt::oracle::{self, TheoryOracle};
use lkt::search::{prove, SearchConfig, SearchOutcome};
use lkt::syntax::{parse_problem, ProblemFile};
use lkt::transform::{self, TransformError};

#[derive(Parser)]
#[command(name = "lkt", version, about = "Focused sequent calculus prover with theory calls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a proof of the problem's goal.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Write the proof found to this path.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
    },
    /// Check a proof file against a problem.
    Check {
        file: PathBuf,
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, default_value = "syntactic")]
        theory: String,
        /// Accept the cut rules.
        #[arg(long)]
        allow_cuts: bool,
    },
    /// Eliminate every cut from a proof file.
    Elim {
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, default_value = "syntactic")]
        theory: String,
        #[arg(short = 'o')]
        output: PathBuf,
        /// Write the rewrite trace here, one step per line.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run the randomized oracle axiom suite.
    Axioms {
        #[arg(long, default_value = "syntactic")]
        theory: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Prove the goal with a predicate's polarity flipped and compare.
    Flip {
        file: PathBuf,
        predicate: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "syntactic")]
    theory: String,
    #[arg(long, default_value_t = SearchConfig::default().max_decisions)]
    max_decisions: usize,
    #[arg(long, default_value_t = SearchConfig::default().max_witness_depth)]
    max_witness_depth: usize,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_decisions: self.max_decisions,
            max_witness_depth: self.max_witness_depth,
            ..SearchConfig::default()
        }
    }
}

/// Usage or I/O problem; reported with exit status 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<bool, Fatal>;

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fatal> {
    fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemFile, Fatal> {
    parse_problem(&read(path)?).map_err(|e| Fatal(format!("{}:{e}", path.display())))
}

fn load_proof(path: &Path) -> Result<ProofDocument, Fatal> {
    ProofDocument::from_json(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn theory(name: &str) -> Result<Box<dyn TheoryOracle>, Fatal> {
    oracle::by_name(name).ok_or_else(|| Fatal(format!("unknown theory `{name}` (expected syntactic or lia)")))
}

fn cmd_prove(file: &Path, search: &SearchArgs, emit: Option<&Path>) -> Outcome {
    let problem = load_problem(file)?;
    let oracle = theory(&search.theory)?;
    let goal = Sequent::goal(problem.goal_formula()?);
    match prove(&goal, &problem.signature, oracle.as_ref(), &search.config())? {
        SearchOutcome::Proved { proof, stats } => {
            println!("PROVED");
            println!("{stats}");
            print!("{proof}");
            if let Some(path) = emit {
                write(path, &ProofDocument::new(problem.signature, proof).to_json())?;
            }
            Ok(true)
        }
        SearchOutcome::Exhausted { stats, truncated } => {
            println!("EXHAUSTED");
            println!("{stats} bounds_hit={truncated}");
            Ok(false)
        }
    }
}

fn cmd_check(file: &Path, proof: &Path, theory_name: &str, allow_cuts: bool) -> Outcome {
    let problem = load_problem(file)?;
    let doc = load_proof(proof)?;
    let oracle = theory(theory_name)?;
    let goal = Sequent::goal(problem.goal_formula()?);
    let report = check_with(&doc.proof, &problem.signature, oracle.as_ref(), CheckOptions { allow_cuts });
    let wrong_goal = doc.proof.conclusion != goal;
    if report.ok() && !wrong_goal {
        println!("VALID");
        println!("nodes={}", report.nodes);
        return Ok(true);
    }
    println!("INVALID");
    if wrong_goal {
        println!("/ root: concludes `{}`, expected `{goal}`", doc.proof.conclusion);
    }
    for f in &report.failures {
        println!("{f}");
    }
    Ok(false)
}

fn cmd_elim(proof: &Path, theory_name: &str, output: &Path, trace: Option<&Path>) -> Outcome {
    let doc = load_proof(proof)?;
    let oracle = theory(theory_name)?;
    match transform::eliminate(&doc.proof, &doc.signature, oracle.as_ref()) {
        Ok(out) => {
            write(output, &ProofDocument::new(doc.signature, out.proof).to_json())?;
            if let Some(path) = trace {
                let mut text = out.trace.join("\n");
                text.push('\n');
                write(path, &text)?;
            }
            println!("ELIMINATED");
            println!("steps={} max_depth={}", out.trace.len(), out.max_depth);
            Ok(true)
        }
        Err(e @ TransformError::At { .. }) => {
            println!("INVALID");
            println!("{e}");
            Ok(false)
        }
        Err(e) => {
            println!("INVALID");
            println!("/ {e}");
            Ok(false)
        }
    }
}

fn cmd_axioms(theory_name: &str, seed: u64, samples: usize) -> Outcome {
    let oracle = theory(theory_name)?;
    let report = oracle::run_suite(oracle.as_ref(), seed, samples);
    println!("VIOLATIONS={}", report.violations.len());
    for (axiom, exercised) in oracle::Axiom::ALL.iter().zip(report.exercised) {
        println!("{axiom}: exercised={exercised} violations={}", report.violations_of(*axiom));
    }
    for v in report.violations.iter().take(10) {
        println!("{} sample {}: {}", v.axiom, v.sample, v.witness);
    }
    Ok(report.violations.is_empty())
}

fn cmd_flip(file: &Path, predicate: &str, search: &SearchArgs) -> Outcome {
    let problem = load_problem(file)?;
    let oracle = theory(&search.theory)?;
    let report = flip::flip(&problem, predicate, oracle.as_ref(), &search.config())?;
    println!("{report}");
    Ok(report.verdict != Verdict::Disagree)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Prove { file, search, emit_proof } => cmd_prove(&file, &search, emit_proof.as_deref()),
        Command::Check {
            file,
            proof,
            theory,
            allow_cuts,
        } => cmd_check(&file, &proof, &theory, allow_cuts),
        Command::Elim {
            proof,
            theory,
            output,
            trace,
        } => cmd_elim(&proof, &theory, &output, trace.as_deref()),
        Command::Axioms { theory, seed, samples } => cmd_axioms(&theory, seed, samples),
        Command::Flip { file, predicate, search } => cmd_flip(&file, &predicate, &search),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
