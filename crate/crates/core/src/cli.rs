//! Command-line front end.
//!
//! [`run`] does all the work and returns the text to print together with
//! the exit status, so it can be driven without spawning a process.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::automata::{lang_degree, FuzzyAutomaton, Word};
use crate::error::Error;
use crate::fuzzyrel::FuzzyRelation;
use crate::hmlogic::{eval_formula, hm_agreement, hm_degree_bounded_with, Formula, Fragment, HmOptions};
use crate::lattice::{Degree, LatticeKind};
use crate::simrel::{
    approx_degree, check_crisp_bisimulation, check_crisp_simulation, check_fuzzy_bisimulation, check_fuzzy_simulation,
    greatest, max_approx_lambda, norm, verify_preservation, RelationKind, SimReport, DEFAULT_MAX_ITERS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "fuzzybisim",
    version,
    about = "Fuzzy simulations and bisimulations between fuzzy automata"
)]
pub struct RunConfig {
    /// Residuated lattice on [0,1].
    #[arg(long, global = true, default_value = "godel")]
    pub lattice: LatticeKind,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// Sweep cap for fixpoint computations.
    #[arg(long, global = true, env = "FUZZYBISIM_MAX_ITERS", default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Sim,
    Bisim,
}

impl From<KindArg> for RelationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sim => RelationKind::Simulation,
            KindArg::Bisim => RelationKind::Bisimulation,
        }
    }
}

impl From<KindArg> for Fragment {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sim => Fragment::Sim,
            KindArg::Bisim => Fragment::Bisim,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Pair {
    pub left: PathBuf,
    pub right: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub automata: Pair,
    #[arg(long)]
    pub relation: PathBuf,
    /// Also require the initial-state condition.
    #[arg(long, conflicts_with = "lambda")]
    pub crisp: bool,
    /// Check for a λ-approximate relation instead (Gödel only).
    #[arg(long)]
    pub lambda: Option<Degree>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Degree to which an automaton accepts a word.
    Lang {
        automaton: PathBuf,
        /// Symbols separated by spaces or commas; single-character symbols
        /// may be run together.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Check whether a relation is a fuzzy simulation.
    CheckSim(CheckArgs),
    /// Check whether a relation is a fuzzy bisimulation.
    CheckBisim(CheckArgs),
    /// Greatest fuzzy simulation and its norm.
    GreatestSim(Pair),
    /// Greatest fuzzy bisimulation and its norm.
    GreatestBisim(Pair),
    /// Norm of a given relation.
    Norm {
        #[command(flatten)]
        automata: Pair,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Sim)]
        kind: KindArg,
    },
    /// Check language preservation on all words up to a length.
    VerifyPreservation {
        #[command(flatten)]
        automata: Pair,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Sim)]
        kind: KindArg,
    },
    /// Bounded Hennessy-Milner degree between the states of two automata.
    HmDegree {
        #[command(flatten)]
        automata: Pair,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Sim)]
        fragment: KindArg,
        /// Also compute the greatest relation and compare.
        #[arg(long)]
        compare: bool,
    },
    /// Evaluate a formula on every state of an automaton.
    EvalFormula {
        automaton: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        formula: String,
    },
    /// Largest λ admitting a λ-approximate simulation or bisimulation.
    MaxLambda {
        #[command(flatten)]
        automata: Pair,
        #[arg(long, value_enum, default_value_t = KindArg::Sim)]
        kind: KindArg,
    },
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome::with_code(EXIT_OK, stdout)
    }

    fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, message: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(source: &Path, err: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT_ERROR,
            message: format!("{}: {err}", source.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
            _ => EXIT_INPUT_ERROR,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(path, e))
}

fn load_automaton(path: &Path) -> Result<FuzzyAutomaton, Failure> {
    FuzzyAutomaton::from_json(&read(path)?).map_err(|e| Failure::input(path, e))
}

fn load_pair(pair: &Pair) -> Result<(FuzzyAutomaton, FuzzyAutomaton), Failure> {
    Ok((load_automaton(&pair.left)?, load_automaton(&pair.right)?))
}

fn load_relation(path: &Path, a: &FuzzyAutomaton, b: &FuzzyAutomaton) -> Result<FuzzyRelation, Failure> {
    let rel = FuzzyRelation::from_json(&read(path)?).map_err(|e| Failure::input(path, e))?;
    crate::simrel::validate_relation(a, b, &rel).map_err(|e| Failure::input(path, e))?;
    Ok(rel)
}

fn kind_name(kind: RelationKind) -> &'static str {
    match kind {
        RelationKind::Simulation => "simulation",
        RelationKind::Bisimulation => "bisimulation",
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn degree_text(d: &Degree) -> String {
    if d.is_zero() || d.is_one() {
        d.to_string()
    } else {
        format!("{d} (~{:.6})", d.to_f64())
    }
}

fn relation_text(rel: &FuzzyRelation) -> String {
    let mut out = String::new();
    for (x, y, d) in rel.iter() {
        let _ = writeln!(out, "  {x} {y}: {}", degree_text(d));
    }
    if rel.is_empty() {
        out.push_str("  (empty)\n");
    }
    out
}

fn report_text(report: &SimReport) -> String {
    format!(
        "greatest fuzzy {}\n{}norm: {}\niterations: {}\nconverged: {}\n",
        kind_name(report.kind),
        relation_text(&report.relation),
        degree_text(&report.norm),
        report.iterations,
        report.converged
    )
}

/// Executes one command.
pub fn run(config: &RunConfig) -> Outcome {
    match execute(config) {
        Ok(outcome) => outcome,
        Err(f) => Outcome::error(f.code, f.message),
    }
}

fn execute(config: &RunConfig) -> Result<Outcome, Failure> {
    let lat = &config.lattice;
    let text = config.output == OutputFormat::Text;
    match &config.command {
        Command::Lang { automaton, word } => {
            let a = load_automaton(automaton)?;
            let w = Word::parse(word, a.alphabet()).map_err(|e| Failure::input(Path::new("--word"), e))?;
            let d = lang_degree(lat, &a, &w)?;
            Ok(Outcome::ok(if text {
                format!("{w}: {}\n", degree_text(&d))
            } else {
                to_json(&d)
            }))
        }
        Command::CheckSim(args) => check(config, RelationKind::Simulation, args),
        Command::CheckBisim(args) => check(config, RelationKind::Bisimulation, args),
        Command::GreatestSim(pair) => greatest_cmd(config, RelationKind::Simulation, pair),
        Command::GreatestBisim(pair) => greatest_cmd(config, RelationKind::Bisimulation, pair),
        Command::Norm {
            automata,
            relation,
            kind,
        } => {
            let (a, b) = load_pair(automata)?;
            let phi = load_relation(relation, &a, &b)?;
            let kind = RelationKind::from(*kind);
            let value = norm(lat, kind, &a, &b, &phi);
            Ok(Outcome::ok(if text {
                format!("norm of {}: {}\n", kind_name(kind), degree_text(&value))
            } else {
                to_json(&json!({ "kind": kind, "norm": value }))
            }))
        }
        Command::VerifyPreservation {
            automata,
            relation,
            max_len,
            kind,
        } => {
            let (a, b) = load_pair(automata)?;
            let phi = load_relation(relation, &a, &b)?;
            let report = verify_preservation(lat, (*kind).into(), &a, &b, &phi, *max_len)?;
            let code = if report.pointwise_ok && report.global_ok {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILED
            };
            let out = if text {
                format!(
                    "words up to length {}\npointwise: {}\nglobal: {}\nexact: {}\nnorm: {}\nlanguage degree: {}\n",
                    report.max_len,
                    report.pointwise_ok,
                    report.global_ok,
                    report.exact,
                    degree_text(&report.norm),
                    degree_text(&report.language_degree)
                )
            } else {
                to_json(&report)
            };
            Ok(Outcome::with_code(code, out))
        }
        Command::HmDegree {
            automata,
            depth,
            fragment,
            compare,
        } => {
            let (a, b) = load_pair(automata)?;
            let options = HmOptions {
                max_iters: config.max_iters,
                ..HmOptions::default()
            };
            let fragment = Fragment::from(*fragment);
            if *compare {
                let agreement = hm_agreement(lat, &a, &b, *depth, fragment, &options)?;
                return Ok(Outcome::ok(if text {
                    format!(
                        "bounded degree (depth {depth})\n{}matches fixpoint: {}\n",
                        relation_text(&agreement.relation),
                        agreement.matches_fixpoint
                    )
                } else {
                    to_json(&agreement)
                }));
            }
            let relation = hm_degree_bounded_with(lat, &a, &b, *depth, fragment, &options);
            Ok(Outcome::ok(if text {
                format!("bounded degree (depth {depth})\n{}", relation_text(&relation))
            } else {
                to_json(&json!({ "fragment": fragment, "depth": depth, "relation": relation }))
            }))
        }
        Command::EvalFormula { automaton, formula } => {
            let a = load_automaton(automaton)?;
            let f: Formula = formula.parse().map_err(|e| Failure::input(Path::new("--formula"), e))?;
            let values = eval_formula(lat, &a, &f).map_err(|e| Failure::input(Path::new("--formula"), e))?;
            let all: BTreeMap<&str, Degree> = a.states().iter().map(|x| (x.as_str(), values.get(x))).collect();
            Ok(Outcome::ok(if text {
                let mut out = format!("{f}\n");
                for x in a.states() {
                    let _ = writeln!(out, "  {x}: {}", degree_text(&values.get(x)));
                }
                out
            } else {
                to_json(&json!({ "formula": f.to_string(), "values": all }))
            }))
        }
        Command::MaxLambda { automata, kind } => {
            let (a, b) = load_pair(automata)?;
            let kind = RelationKind::from(*kind);
            let lambda = max_approx_lambda(lat, kind, &a, &b, config.max_iters)?;
            Ok(Outcome::ok(if text {
                format!("maximal lambda ({}): {}\n", kind_name(kind), degree_text(&lambda))
            } else {
                to_json(&json!({ "kind": kind, "lambda": lambda }))
            }))
        }
    }
}

fn check(config: &RunConfig, kind: RelationKind, args: &CheckArgs) -> Result<Outcome, Failure> {
    let lat = &config.lattice;
    let (a, b) = load_pair(&args.automata)?;
    let phi = load_relation(&args.relation, &a, &b)?;
    let mut report = serde_json::Map::new();
    report.insert("kind".into(), json!(kind));
    let holds = if let Some(lambda) = &args.lambda {
        let degree = approx_degree(lat, kind, &a, &b, &phi)?;
        report.insert("mode".into(), json!("approximate"));
        report.insert("lambda".into(), json!(lambda));
        report.insert("degree".into(), json!(degree));
        *lambda <= degree
    } else if args.crisp {
        report.insert("mode".into(), json!("crisp"));
        match kind {
            RelationKind::Simulation => check_crisp_simulation(lat, &a, &b, &phi)?,
            RelationKind::Bisimulation => check_crisp_bisimulation(lat, &a, &b, &phi)?,
        }
    } else {
        report.insert("mode".into(), json!("fuzzy"));
        match kind {
            RelationKind::Simulation => check_fuzzy_simulation(lat, &a, &b, &phi)?,
            RelationKind::Bisimulation => check_fuzzy_bisimulation(lat, &a, &b, &phi)?,
        }
    };
    report.insert("holds".into(), json!(holds));
    let code = if holds { EXIT_OK } else { EXIT_PROPERTY_FAILED };
    let out = if config.output == OutputFormat::Text {
        let mode = report["mode"].as_str().unwrap_or_default();
        format!("{mode} {}: {}\n", kind_name(kind), if holds { "yes" } else { "no" })
    } else {
        to_json(&Value::Object(report))
    };
    Ok(Outcome::with_code(code, out))
}

fn greatest_cmd(config: &RunConfig, kind: RelationKind, pair: &Pair) -> Result<Outcome, Failure> {
    let (a, b) = load_pair(pair)?;
    let report = greatest(&config.lattice, kind, &a, &b, config.max_iters);
    let code = if report.converged { EXIT_OK } else { EXIT_NOT_CONVERGED };
    let out = if config.output == OutputFormat::Text {
        report_text(&report)
    } else {
        to_json(&report)
    };
    Ok(Outcome::with_code(code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn run_args(args: &[&str]) -> Outcome {
        let config = RunConfig::try_parse_from(std::iter::once("fuzzybisim").chain(args.iter().copied())).unwrap();
        run(&config)
    }

    #[test]
    fn lang_prints_a_json_string() {
        let out = run_args(&["lang", &fixture("A.json"), "--word", "s"]);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(out.stdout.trim(), "\"7/10\"");
    }

    #[test]
    fn greatest_sim_report() {
        let out = run_args(&["greatest-sim", &fixture("A.json"), &fixture("Aprime.json")]);
        assert_eq!(out.code, EXIT_OK);
        let report: SimReport = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(report.norm, Degree::new(3, 5).unwrap());
        assert!(report.converged);
    }

    #[test]
    fn exit_codes() {
        let (a, b) = (fixture("A.json"), fixture("Aprime.json"));
        let ones = fixture("approx_all_ones.json");
        let sim = fixture("greatest_sim_godel.json");
        assert_eq!(
            run_args(&["check-sim", &a, &b, "--relation", &ones, "--lambda", "0.6"]).code,
            EXIT_OK
        );
        assert_eq!(
            run_args(&["check-sim", &a, &b, "--relation", &sim, "--crisp"]).code,
            EXIT_PROPERTY_FAILED
        );
        let product = run_args(&[
            "--lattice",
            "product",
            "check-sim",
            &a,
            &b,
            "--relation",
            &ones,
            "--lambda",
            "0.6",
        ]);
        assert_eq!(product.code, EXIT_INPUT_ERROR);
        assert_eq!(
            run_args(&["greatest-sim", &a, &b, "--max-iters", "1"]).code,
            EXIT_NOT_CONVERGED
        );
        let missing = run_args(&["lang", "/nonexistent/x.json", "--word", "s"]);
        assert_eq!(missing.code, EXIT_INPUT_ERROR);
        assert!(missing.stderr.contains("/nonexistent/x.json"));
    }
}
