//! `npc`: batch front end for the n-dimensional propositional calculus.
//!
//! Exit codes: 0 success (valid, proved, check passed), 1 a negative answer
//! (invalid, refuted, check failed, out of budget), 2 usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use npc_core::algebra::{
    check_identities, intersection_property, iso_par_to_power, multideals, partition_algebra,
    ultramultideals,
};
use npc_core::classical::{parse_pc, to_2pc, to_pc};
use npc_core::harness::{exhaustive_count, formula_pool, run_family, Family, DEFAULT_SEED};
use npc_core::kernel::{check, from_json, to_json, to_json_value};
use npc_core::prover::{prove, ProveResult, DEFAULT_BUDGET};
use npc_core::semantics::{eval, holds, Environment, Verdict};
use npc_core::syntax::{parse_formula, parse_sequent};
use npc_core::Dimension;

const MAX_N: usize = 6;

#[derive(Parser)]
#[command(name = "npc", version, about = "n-dimensional propositional calculus")]
struct Cli {
    /// Dimension (number of truth values), 2 to 6.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Print one machine-readable JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof file with the kernel.
    Check { proof: PathBuf },
    /// Search for a cut-free proof or a counterexample.
    Prove {
        sequent: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Write the proof file here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a formula under an environment such as `X=2,Y=1`.
    Eval {
        formula: String,
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Decide a sequent by enumerating environments.
    Valid { sequent: String },
    /// Translate between classical and two-dimensional formulas.
    Translate {
        formula: String,
        #[arg(long, value_enum)]
        dir: Direction,
    },
    /// Report on the partition algebra of an n-partition of `points` points.
    Algebra {
        #[arg(value_enum)]
        check: AlgebraCheck,
        #[arg(long, default_value_t = 2)]
        points: usize,
    },
    /// Run the prover against the oracle on an exhaustive sequent family.
    Enumerate {
        /// Number of variables, taken from X, Y, Z, ...
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// Seeded formulas per depth 1, 2, ...; its length is the depth cap.
        #[arg(long, value_delimiter = ',', default_value = "30,12")]
        pool: Vec<usize>,
        /// Largest `|left| + |right|`.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    #[value(name = "pc-to-2pc")]
    PcTo2pc,
    #[value(name = "2pc-to-pc")]
    TwoPcToPc,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraCheck {
    /// The nCH law and B1–B4.
    Identities,
    /// Multideals, ultramultideals and the intersection property.
    Multideals,
    /// The isomorphism between n-partitions and the power n^X.
    Iso,
}

/// A finished command: its answer and whether that answer is positive.
struct Report {
    ok: bool,
    text: String,
    json: Value,
    /// Diagnostic for standard error on a negative answer.
    diagnostic: Option<String>,
}

impl Report {
    fn yes(text: impl Into<String>, json: Value) -> Self {
        Report {
            ok: true,
            text: text.into(),
            json,
            diagnostic: None,
        }
    }

    fn no(text: impl Into<String>, json: Value, diagnostic: impl Into<String>) -> Self {
        Report {
            ok: false,
            text: text.into(),
            json,
            diagnostic: Some(diagnostic.into()),
        }
    }
}

/// Usage or input errors; exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn env_json(env: &Environment) -> Value {
    Value::Object(env.iter().map(|(k, v)| (k.to_owned(), json!(v))).collect())
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    if !(2..=MAX_N).contains(&cli.n) {
        return Err(InputError(format!(
            "--n must be between 2 and {MAX_N}, found {}",
            cli.n
        )));
    }
    let n = Dimension::new(cli.n)?;
    Ok(match &cli.command {
        Command::Check { proof } => {
            let text =
                fs::read_to_string(proof).map_err(|e| format!("{}: {e}", proof.display()))?;
            let (tree, dim) = from_json(&text)?;
            match check(&tree, dim) {
                Ok(()) => Report::yes(
                    format!("ok: {}", tree.conclusion),
                    json!({"command": "check", "result": "ok", "n": dim.get(), "conclusion": tree.conclusion.to_string()}),
                ),
                Err(v) => Report::no(
                    format!("rejected: {v}"),
                    json!({"command": "check", "result": "rejected", "path": v.path, "error": v.to_string()}),
                    format!("check failed {v}"),
                ),
            }
        }
        Command::Prove {
            sequent,
            budget,
            out,
        } => {
            let s = parse_sequent(sequent, n)?;
            match prove(&s, n, *budget)? {
                ProveResult::Proved(tree) => {
                    let file = to_json(&tree, n);
                    let text = match out {
                        Some(path) => {
                            fs::write(path, format!("{file}\n"))
                                .map_err(|e| format!("{}: {e}", path.display()))?;
                            format!("proved: {s} (proof written to {})", path.display())
                        }
                        None => file,
                    };
                    Report::yes(
                        text,
                        json!({"command": "prove", "result": "proved", "sequent": s.to_string(),
                               "size": tree.size(), "proof": to_json_value(&tree, n)}),
                    )
                }
                ProveResult::Refuted(env) => Report::no(
                    format!("refuted: {env}"),
                    json!({"command": "prove", "result": "refuted", "sequent": s.to_string(), "counterexample": env_json(&env)}),
                    format!("`{s}` is not valid"),
                ),
                ProveResult::OutOfBudget(steps) => Report::no(
                    format!("unknown: out of budget after {steps} steps"),
                    json!({"command": "prove", "result": "out_of_budget", "sequent": s.to_string(), "steps": steps}),
                    "search budget exhausted; the sequent is undecided",
                ),
            }
        }
        Command::Eval { formula, env } => {
            let f = parse_formula(formula, n)?;
            let v = Environment::parse(env, n)?;
            let value = eval(&f, &v)?;
            Report::yes(
                value.to_string(),
                json!({"command": "eval", "formula": f.to_string(), "value": value}),
            )
        }
        Command::Valid { sequent } => {
            let s = parse_sequent(sequent, n)?;
            match holds(&s, n)? {
                Verdict::Valid => Report::yes(
                    "valid",
                    json!({"command": "valid", "result": "valid", "sequent": s.to_string()}),
                ),
                Verdict::Invalid(env) => Report::no(
                    format!("invalid: {env}"),
                    json!({"command": "valid", "result": "invalid", "sequent": s.to_string(), "counterexample": env_json(&env)}),
                    format!("`{s}` is falsified by {env}"),
                ),
            }
        }
        Command::Translate { formula, dir } => {
            if cli.n != 2 {
                return Err(InputError("translations are defined for --n 2 only".into()));
            }
            let image = match dir {
                Direction::PcTo2pc => to_2pc(&parse_pc(formula)?).to_string(),
                Direction::TwoPcToPc => to_pc(&parse_formula(formula, n)?)?.to_string(),
            };
            Report::yes(
                image.clone(),
                json!({"command": "translate", "input": formula, "output": image}),
            )
        }
        Command::Algebra { check, points } => algebra(*check, n, *points)?,
        Command::Enumerate {
            vars,
            pool,
            max_size,
            seed,
            budget,
        } => {
            let family = Family {
                n: cli.n,
                vars: *vars,
                per_depth: pool.clone(),
                max_size: *max_size,
                seed: *seed,
            };
            let pool_len = formula_pool(n, *vars, pool, *seed).len();
            let m = run_family(&family, *budget)?;
            let text = format!(
                "pool: {pool_len} formulas, expected sequents: {}\n{m}",
                exhaustive_count(pool_len, n, *max_size)
            );
            let body = json!({"command": "enumerate", "family": family, "pool": pool_len, "matrix": m, "agree": m.agree()});
            if m.agree() {
                Report::yes(text, body)
            } else {
                Report::no(text, body, "prover and oracle disagree")
            }
        }
    })
}

fn algebra(which: AlgebraCheck, n: Dimension, points: usize) -> Result<Report, InputError> {
    Ok(match which {
        AlgebraCheck::Identities => {
            let alg = partition_algebra(points, n)?;
            let checks = check_identities(&alg);
            let text = checks
                .iter()
                .map(|c| {
                    let status = if c.pass { "PASS" } else { "FAIL" };
                    let mode = if c.exhaustive {
                        "exhaustive"
                    } else {
                        "sampled"
                    };
                    let witness = c
                        .witness
                        .as_deref()
                        .map(|w| format!(", witness {w}"))
                        .unwrap_or_default();
                    format!("{status} {} ({} cases, {mode}){witness}", c.name, c.cases)
                })
                .collect::<Vec<_>>()
                .join("\n");
            let body = json!({"command": "algebra", "check": "identities", "algebra": alg.name(), "checks": checks});
            if checks.iter().all(|c| c.pass) {
                Report::yes(text, body)
            } else {
                Report::no(text, body, "an identity fails")
            }
        }
        AlgebraCheck::Multideals => {
            let alg = partition_algebra(points, n)?;
            let all = multideals(&alg)?;
            let ultra = ultramultideals(&alg)?;
            let mut failing = Vec::new();
            for m in &all {
                if !intersection_property(&alg, m)? {
                    failing.push(m.to_string());
                }
            }
            let text = format!(
                "{}: {} multideals, {} ultramultideals, intersection property fails on {}",
                alg.name(),
                all.len(),
                ultra.len(),
                failing.len()
            );
            let body = json!({"command": "algebra", "check": "multideals", "algebra": alg.name(),
                              "multideals": all.len(),
                              "ultramultideals": ultra.iter().map(ToString::to_string).collect::<Vec<_>>(),
                              "intersection_failures": failing});
            if ultra.len() == points && failing.is_empty() {
                Report::yes(text, body)
            } else {
                Report::no(text, body, "multideal checks failed")
            }
        }
        AlgebraCheck::Iso => {
            let r = iso_par_to_power(points, n)?;
            let text = format!(
                "Par({points}) -> {}^{points}: size {}, bijective {}, constants {}, q {} ({} tuples{})",
                n.get(),
                r.size,
                r.bijective,
                r.preserves_constants,
                r.preserves_q,
                r.tuples_checked,
                if r.exhaustive { ", exhaustive" } else { ", sampled" }
            );
            let body = json!({"command": "algebra", "check": "iso", "report": r, "pass": r.pass()});
            if r.pass() {
                Report::yes(text, body)
            } else {
                Report::no(text, body, "the map is not an isomorphism")
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&report.json).expect("serialisable report")
                );
            } else {
                println!("{}", report.text);
            }
            if let Some(d) = report.diagnostic {
                eprintln!("npc: {d}");
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(message)) => {
            if cli.json {
                println!("{}", json!({"error": message}));
            }
            eprintln!("npc: error: {message}");
            ExitCode::from(2)
        }
    }
}
