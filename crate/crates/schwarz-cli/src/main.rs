// SPDX-License-Identifier: MIT OR Apache-2.0
//! `schwarz`: exact pipeline between algebraic linear ODEs and invariant
//! dynamical systems, driven by JSON scenario manifests.
//!
//! Exit status is 0 when every comparison passes, 1 when a comparison
//! fails and 2 on errors (bad input, failed computation).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schwarz_cli::context::Context;
use schwarz_cli::manifest::{Equivariance, GroupFile, Scenario, Step};
use schwarz_cli::render::{self, Style};
use schwarz_cli::{run_scenario, CliError, Options, Report};
use schwarz_core::expr::{parse, parse_radical, to_poly, to_ratfn, Symbols};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "schwarz", version, about = "Exact algebra for algebraic linear ODEs and invariant dynamical systems")]
struct Cli {
    /// Conductor N of the coefficient field Q(ζ_N); overrides manifests.
    #[arg(long, global = true)]
    conductor: Option<u32>,
    /// Total-degree safety bound for rewriting and reductions.
    #[arg(long, global = true)]
    degree_bound: Option<u32>,
    /// Cancel common factors before printing fractions (default).
    #[arg(long, global = true, overrides_with = "no_reduce")]
    reduce: bool,
    /// Print fractions as computed.
    #[arg(long, global = true)]
    no_reduce: bool,
    /// Write the JSON output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print its canonical form.
    Parse(ParseArgs),
    /// Matrix group operations.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Invariant operations on a scenario.
    Invariants {
        #[command(subcommand)]
        cmd: InvariantsCmd,
    },
    /// Dynamical system operations on a scenario.
    Dynsys {
        #[command(subcommand)]
        cmd: DynsysCmd,
    },
    /// Search for a standardness witness.
    Witness(WitnessArgs),
    /// Conjugate an equation into standard form.
    Standardize(StandardizeArgs),
    /// Derive the linear ODE satisfied by the orbit coordinates.
    Derive(DeriveArgs),
    /// Gauge transforms and changes of variable.
    Transform {
        #[command(subcommand)]
        cmd: TransformCmd,
    },
    /// Lie bracket of two systems of a scenario.
    Bracket(BracketArgs),
    /// Run only the numeric checks of a scenario.
    Numcheck(NumcheckArgs),
    /// Scenario manifests.
    Scenario {
        #[command(subcommand)]
        cmd: ScenarioCmd,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Poly,
    Ratfn,
    Radical,
}

#[derive(Args, Debug)]
struct ParseArgs {
    text: String,
    #[arg(long, value_enum, default_value_t = Kind::Poly)]
    kind: Kind,
    /// Comma-separated symbol names.
    #[arg(long, value_delimiter = ',', default_values_t = ["X1".to_string(), "X2".into(), "X3".into(), "t".into()])]
    symbols: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum GroupCmd {
    /// Close the group generated by a group file and report its order.
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum InvariantsCmd {
    /// Invariance under the group and algebraic independence.
    Check { scenario: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EquivarianceArg {
    Exact,
    Sampled,
}

#[derive(Subcommand, Debug)]
enum DynsysCmd {
    /// Build a named system and check the defining identity.
    Build {
        scenario: PathBuf,
        #[arg(long)]
        system: String,
        #[arg(long, value_enum)]
        equivariance: Option<EquivarianceArg>,
    },
}

#[derive(Args, Debug)]
struct WitnessArgs {
    scenario: PathBuf,
    /// Evaluations overriding the scenario's, one per invariant.
    #[arg(long = "eval")]
    evaluations: Vec<String>,
}

#[derive(Args, Debug)]
struct StandardizeArgs {
    scenario: PathBuf,
    /// Coefficients a_0, …, a_{n-1} of the monic equation.
    #[arg(long = "coeff", required = true)]
    coefficients: Vec<String>,
    #[arg(long = "eval")]
    evaluations: Vec<String>,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    scenario: PathBuf,
    #[arg(long, default_value = "t")]
    variable: String,
    #[arg(long = "eval")]
    evaluations: Vec<String>,
    /// Parameter values `name=expr` substituted into the evaluations.
    #[arg(long = "at")]
    at: Vec<String>,
}

#[derive(Args, Debug)]
struct EquationArgs {
    /// Coefficients a_0, …, a_{n-1} of the monic equation.
    #[arg(long = "coeff", required = true)]
    coefficients: Vec<String>,
    #[arg(long, default_value = "t")]
    variable: String,
    /// Additional parameter names.
    #[arg(long, value_delimiter = ',')]
    params: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum TransformCmd {
    /// Conjugate by a radical monomial `f`: the solutions become `f·x`.
    Conjugate {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long)]
        factor: String,
    },
    /// Pull back along a rational map of the independent variable.
    Pullback {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long)]
        map: String,
    },
}

#[derive(Args, Debug)]
struct BracketArgs {
    scenario: PathBuf,
    first: String,
    second: String,
}

#[derive(Args, Debug)]
struct NumcheckArgs {
    scenario: PathBuf,
    /// Directory for CSV traces named in the scenario.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ScenarioCmd {
    /// Run scenario manifests; several files run in parallel.
    Run {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Number of worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for CSV traces named in the scenarios.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
}

enum Outcome {
    Pass(Value),
    Fail(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        conductor: cli.conductor,
        degree_bound: cli.degree_bound,
        style: Style {
            reduce: cli.reduce || !cli.no_reduce,
        },
        trace_dir: None,
    };
    let result = dispatch(&cli.command, opts);
    let (value, code) = match result {
        Ok(Outcome::Pass(v)) => (v, 0),
        Ok(Outcome::Fail(v)) => (v, 1),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("plain JSON");
    text.push('\n');
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn report_outcome(r: Report) -> Outcome {
    if r.passed {
        Outcome::Pass(r.value)
    } else {
        Outcome::Fail(r.value)
    }
}

/// Runs `steps` against the scenario at `path` in place of its own steps.
fn with_steps(path: &Path, steps: Vec<Step>, opts: &Options) -> Result<Outcome, CliError> {
    let mut s = Scenario::load(path)?;
    s.steps = steps;
    Ok(report_outcome(run_scenario(&s, opts)?))
}

fn evals(v: &[String]) -> Option<Vec<String>> {
    if v.is_empty() {
        None
    } else {
        Some(v.to_vec())
    }
}

fn dispatch(cmd: &Command, mut opts: Options) -> Result<Outcome, CliError> {
    let conductor = opts.conductor.unwrap_or(1);
    match cmd {
        Command::Parse(a) => {
            let syms = Symbols::new(a.symbols.iter().cloned(), conductor)?;
            let e = parse(&a.text)?;
            let canonical = match a.kind {
                Kind::Poly => render::poly(&to_poly(&e, &syms)?, &syms),
                Kind::Ratfn => render::ratfn(&to_ratfn(&e, &syms)?, &syms),
                Kind::Radical => render::radical(&parse_radical(&a.text, &syms)?, &syms),
            };
            Ok(Outcome::Pass(json!({"input": a.text, "canonical": canonical, "tree": e.to_string()})))
        }
        Command::Group { cmd: GroupCmd::Check { file } } => {
            let g = GroupFile::load(file)?;
            let ctx = Context::new(opts.conductor.unwrap_or(g.conductor), g.generators.first().map_or(0, Vec::len), &[], 1)?;
            let (gens, group) = ctx.group(&g)?;
            let ok = g.order.map_or(true, |o| o == group.order()) && group.is_closed();
            let v = json!({
                "name": g.name,
                "generators": gens.len(),
                "order": group.order(),
                "declared_order": g.order,
                "closed": group.is_closed(),
            });
            Ok(if ok { Outcome::Pass(v) } else { Outcome::Fail(v) })
        }
        Command::Invariants { cmd: InvariantsCmd::Check { scenario } } => {
            with_steps(scenario, vec![Step::InvariantsCheck { expect: BTreeMap::new() }], &opts)
        }
        Command::Dynsys {
            cmd: DynsysCmd::Build {
                scenario,
                system,
                equivariance,
            },
        } => {
            let equivariance = equivariance.map(|e| match e {
                EquivarianceArg::Exact => Equivariance::Exact,
                EquivarianceArg::Sampled => Equivariance::Sampled,
            });
            let step = Step::BuildSystem {
                system: system.clone(),
                expect_rhs: None,
                expect_negated: Vec::new(),
                equivariance,
                expect_rejected: false,
            };
            with_steps(scenario, vec![step], &opts)
        }
        Command::Witness(a) => {
            let step = Step::Witness {
                evaluations: evals(&a.evaluations),
                expect_b: None,
                expect_none: false,
            };
            with_steps(&a.scenario, vec![step], &opts)
        }
        Command::Standardize(a) => {
            let step = Step::Standardize {
                equation: a.coefficients.clone(),
                evaluations: evals(&a.evaluations),
                expect: None,
                expect_gauge: None,
                expect_evaluations: None,
            };
            with_steps(&a.scenario, vec![step], &opts)
        }
        Command::Derive(a) => {
            let mut at = BTreeMap::new();
            for kv in &a.at {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| CliError::Manifest(format!("`{kv}` is not of the form name=value")))?;
                at.insert(k.trim().to_string(), v.trim().to_string());
            }
            let step = Step::DeriveOde {
                variable: a.variable.clone(),
                evaluations: evals(&a.evaluations),
                at,
                expect: None,
            };
            with_steps(&a.scenario, vec![step], &opts)
        }
        Command::Transform { cmd } => {
            let (eq, step) = match cmd {
                TransformCmd::Conjugate { eq, factor } => (
                    eq,
                    Step::Conjugate {
                        variable: eq.variable.clone(),
                        equation: eq.coefficients.clone(),
                        factor: factor.clone(),
                        expect: None,
                    },
                ),
                TransformCmd::Pullback { eq, map } => (
                    eq,
                    Step::Pullback {
                        variable: eq.variable.clone(),
                        equation: eq.coefficients.clone(),
                        map: map.clone(),
                        expect: None,
                    },
                ),
            };
            let mut space = vec![eq.variable.clone()];
            space.extend(eq.params.iter().cloned());
            let s = ad_hoc("transform", conductor, space, vec![step]);
            Ok(report_outcome(run_scenario(&s, &opts)?))
        }
        Command::Bracket(a) => {
            let step = Step::Bracket {
                systems: [a.first.clone(), a.second.clone()],
                expect_zero: false,
            };
            with_steps(&a.scenario, vec![step], &opts)
        }
        Command::Numcheck(a) => {
            opts.trace_dir = a.trace_dir.clone();
            let s = Scenario::load(&a.scenario)?;
            let steps = s.steps.iter().filter(|st| matches!(st, Step::NumericCheck { .. })).cloned().collect();
            with_steps(&a.scenario, steps, &opts)
        }
        Command::Scenario {
            cmd: ScenarioCmd::Run { paths, jobs, trace_dir },
        } => {
            opts.trace_dir = trace_dir.clone();
            run_many(paths, *jobs, &opts)
        }
    }
}

fn ad_hoc(name: &str, conductor: u32, space: Vec<String>, steps: Vec<Step>) -> Scenario {
    let manifest = json!({"name": name, "conductor": conductor, "space": space});
    let mut s: Scenario = serde_json::from_value(manifest).expect("well-formed ad hoc manifest");
    s.steps = steps;
    s
}

/// Runs scenarios on `jobs` threads; one scenario per worker at a time.
fn run_many(paths: &[PathBuf], jobs: usize, opts: &Options) -> Result<Outcome, CliError> {
    if paths.len() == 1 {
        return Ok(report_outcome(schwarz_cli::run_scenario_file(&paths[0], opts)?));
    }
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Report, String>>>> = Mutex::new(vec![None; paths.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, paths.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= paths.len() {
                    break;
                }
                let r = schwarz_cli::run_scenario_file(&paths[i], opts).map_err(|e| format!("{}: {e}", paths[i].display()));
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    let mut reports = Vec::new();
    let mut passed = true;
    for r in results.into_inner().unwrap().into_iter().flatten() {
        match r {
            Ok(rep) => {
                passed &= rep.passed;
                reports.push(rep.value);
            }
            Err(e) => return Err(CliError::Manifest(e)),
        }
    }
    let v = json!({"passed": passed, "reports": reports});
    Ok(if passed { Outcome::Pass(v) } else { Outcome::Fail(v) })
}
