//! `amsolid`: command-line front end for the verification engine.
//!
//! Every subcommand prints a single JSON object `{"manifest": ..., "report":
//! ...}` on standard output. The manifest records the command, its
//! parameters, timing, and a digest of the canonical report with timing
//! fields stripped, so identical runs produce identical digests.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod checks;
mod expr;
mod golden;

use amsolid_core::amcycles::{build_am_relation_system, TorsionRelationSystem};
use amsolid_core::canonical::{result_digest, to_canonical_string};
use amsolid_core::enriques::{enumerate_decompositions, hodge_index_flag, DecompositionConstraint};
use amsolid_core::signlemma::{self, Strategy};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(name = "amsolid", version, about = "Exact verification of line, conic-bundle, sign, torsion, and decomposition computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Naive,
    Reduced,
    Propagation,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Naive => Strategy::Naive,
            StrategyArg::Reduced => Strategy::SymmetryReduced,
            StrategyArg::Propagation => Strategy::Propagation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the lines on the del Pezzo surface of the given degree.
    Lines {
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Enumerate the conic-bundle classes with their singular fibers.
    ConicBundles,
    /// Scan sign assignments on the 56 lines and verify the sign lemma.
    VerifySignLemma {
        #[arg(long, value_enum, default_value_t = StrategyArg::Reduced)]
        strategy: StrategyArg,
        /// Worker count; defaults to AMSOLID_SHARDS or the CPU count.
        #[arg(long)]
        shards: Option<usize>,
        /// Restrict to assignments with m positive A-signs ("m=4" or "4").
        #[arg(long)]
        slice: Option<String>,
        /// Also write the report JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run all three strategies and require exact agreement.
        #[arg(long)]
        full: bool,
    },
    /// Evaluate an intersection-number expression such as "(-K)^3".
    Intersection {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "amx")]
        space: String,
    },
    /// Row-reduce a torsion relation system and report forced consequences.
    TorsionSolve {
        /// Built-in system name; currently "am-full".
        #[arg(long, default_value = "am-full", conflicts_with = "system_file")]
        system: String,
        /// Read the relation system from a JSON file instead.
        #[arg(long)]
        system_file: Option<PathBuf>,
    },
    /// Enumerate constrained decompositions of a self-intersection number.
    EnriquesDecomp {
        #[arg(long)]
        total: i64,
        #[arg(long)]
        parts: usize,
        #[arg(long, default_value_t = 0)]
        min_square: i64,
        #[arg(long, default_value_t = 0)]
        min_cross: i64,
        /// Annotate each tuple with the two-class Hodge index diagnostic.
        #[arg(long)]
        hodge_flag: bool,
    },
    /// Run every verification and print a pass/fail table per claim.
    CheckAll {
        /// Use the exhaustive naive scan instead of the reduced one.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Rewrite the golden report files with stable canonical output.
    RegenGolden {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    started_at: u128,
    finished_at: u128,
    artifact_version: String,
    result_digest: String,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .expect("clock before epoch")
        .as_millis()
}

fn default_shards() -> usize {
    std::env::var("AMSOLID_SHARDS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(4)
        })
}

fn parse_slice(raw: &str) -> anyhow::Result<u32> {
    let digits = raw.strip_prefix("m=").unwrap_or(raw);
    let m: u32 = digits
        .parse()
        .with_context(|| format!("slice must be \"m=K\" or \"K\", got {raw:?}"))?;
    if m > 7 {
        bail!("slice m must be in 0..=7, got {m}");
    }
    Ok(m)
}

fn main() {
    // Clap handles usage errors itself with exit code 2.
    let cli = Cli::parse();
    let started_at = now_ms();
    match run(&cli.command) {
        Ok((command, parameters, report)) => {
            let digest = result_digest(&report).expect("digest");
            let manifest = RunManifest {
                command,
                parameters,
                started_at,
                finished_at: now_ms(),
                artifact_version: env!("CARGO_PKG_VERSION").to_string(),
                result_digest: digest,
            };
            let output = json!({ "manifest": manifest, "report": report });
            println!("{}", to_canonical_string(&output).expect("canonical json"));
            let failed = report
                .get("all_passed")
                .map(|v| v == &Value::Bool(false))
                .unwrap_or(false);
            std::process::exit(if failed { 1 } else { 0 });
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

type CommandOutput = (String, BTreeMap<String, String>, Value);

fn params(entries: &[(&str, String)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn run(command: &Command) -> anyhow::Result<CommandOutput> {
    match command {
        Command::Lines { degree } => {
            if *degree != 2 {
                bail!("only the degree-2 surface is supported, got {degree}");
            }
            let report = golden::lines_report()?;
            Ok((
                "lines".into(),
                params(&[("degree", degree.to_string())]),
                report,
            ))
        }
        Command::ConicBundles => {
            Ok(("conic-bundles".into(), params(&[]), golden::bundles_report()?))
        }
        Command::VerifySignLemma {
            strategy,
            shards,
            slice,
            report,
            full,
        } => {
            let shards = shards.unwrap_or_else(default_shards);
            let slice = slice.as_deref().map(parse_slice).transpose()?;
            let value = if *full {
                let reports = signlemma::verify_lemma_cross_check(shards, slice)?;
                serde_json::to_value(&reports)?
            } else {
                let r = signlemma::verify_lemma(Strategy::from(*strategy), shards, slice)?;
                serde_json::to_value(&r)?
            };
            if let Some(path) = report {
                std::fs::write(path, to_canonical_string(&value)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let mut parameters = params(&[
                ("strategy", format!("{:?}", Strategy::from(*strategy))),
                ("shards", shards.to_string()),
                ("full", full.to_string()),
            ]);
            if let Some(m) = slice {
                parameters.insert("slice".into(), format!("m={m}"));
            }
            Ok(("verify-sign-lemma".into(), parameters, value))
        }
        Command::Intersection { expr, space } => {
            let value = expr::evaluate(expr, space)?;
            Ok((
                "intersection".into(),
                params(&[("expr", expr.clone()), ("space", space.clone())]),
                json!({ "expr": expr, "space": space, "value": value }),
            ))
        }
        Command::TorsionSolve {
            system,
            system_file,
        } => {
            let (sys, source) = match system_file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    (TorsionRelationSystem::from_json(&text)?, path.display().to_string())
                }
                None => {
                    if system != "am-full" {
                        bail!("unknown built-in system {system:?}; expected \"am-full\"");
                    }
                    (build_am_relation_system(), system.clone())
                }
            };
            let report = sys.solve()?;
            Ok((
                "torsion-solve".into(),
                params(&[("system", source)]),
                serde_json::to_value(&report)?,
            ))
        }
        Command::EnriquesDecomp {
            total,
            parts,
            min_square,
            min_cross,
            hodge_flag,
        } => {
            let constraint = DecompositionConstraint {
                total_square: *total,
                num_parts: *parts,
                min_part_square: *min_square,
                min_cross: *min_cross,
            };
            let found = enumerate_decompositions(&constraint)?;
            let tuples: Vec<Value> = found
                .iter()
                .map(|d| {
                    let flat: Vec<i64> = d
                        .part_squares
                        .iter()
                        .chain(&d.cross_terms)
                        .copied()
                        .collect();
                    if *hodge_flag && d.part_squares.len() == 2 {
                        json!({
                            "tuple": flat,
                            "hodge_flag": hodge_index_flag(
                                d.part_squares[0],
                                d.part_squares[1],
                                d.cross_terms[0],
                            ),
                        })
                    } else {
                        json!(flat)
                    }
                })
                .collect();
            Ok((
                "enriques-decomp".into(),
                params(&[
                    ("total", total.to_string()),
                    ("parts", parts.to_string()),
                    ("min_square", min_square.to_string()),
                    ("min_cross", min_cross.to_string()),
                    ("hodge_flag", hodge_flag.to_string()),
                ]),
                json!({ "constraint": constraint, "decompositions": tuples }),
            ))
        }
        Command::CheckAll { full, shards } => {
            let shards = shards.unwrap_or_else(default_shards);
            let report = checks::check_all(*full, shards)?;
            Ok((
                "check-all".into(),
                params(&[("full", full.to_string()), ("shards", shards.to_string())]),
                report,
            ))
        }
        Command::RegenGolden { out_dir } => {
            let written = golden::regenerate(out_dir)?;
            Ok((
                "regen-golden".into(),
                params(&[("out_dir", out_dir.display().to_string())]),
                json!({ "written": written }),
            ))
        }
    }
}
