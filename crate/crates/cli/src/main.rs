//! Batch command-line front end with JSON input and output.
//!
//! Exit status discipline: 0 means success (feasible, invertible, holds),
//! 1 means a valid negative mathematical answer (infeasible, singular,
//! condition failed, nothing found), 2 means an input or usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use blocktri::complete3::{
    assemble, certify, check_conditions, construct_completion, factorize, CertifyError,
    CompleteError, Completion3, Instance3,
};
use blocktri::extdim::{decide_quotient_iso, ExtDim, ExtDimError};
use blocktri::gen;
use blocktri::harte::ghost_identity;
use blocktri::nblock::{
    check_necessary_n, extracted_invertible, reduce, search_completion_n, CompletionN, InstanceN,
    NblockError,
};
use blocktri::Mat;

#[derive(Parser)]
#[command(
    name = "blocktri",
    version,
    about = "Exact-arithmetic completion toolkit for block upper-triangular matrices"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the feasibility conditions of a 3-block instance.
    Check3 { instance: PathBuf },

    /// Construct an invertible completion with its trace and certificate.
    Complete3 { instance: PathBuf },

    /// Certify invertibility of a matrix, or report a kernel witness.
    Verify { matrix: PathBuf },

    /// Emit the five-factor decomposition of an assembled completion.
    Factor { instance: PathBuf, completion: PathBuf },

    /// Evaluate the ghost identity for the composition S·T.
    Ghost { s: PathBuf, t: PathBuf },

    /// Decide the quotient-matching problem over extended dimensions.
    /// Tokens are nonnegative integers or "inf".
    Dims {
        /// Kernel dimension of the middle block.
        #[arg(long)]
        k: String,
        /// Cokernel dimension of the first block.
        #[arg(long)]
        m: String,
        /// Cokernel dimension of the middle block.
        #[arg(long)]
        n: String,
        /// Kernel dimension of the last block.
        #[arg(long)]
        l: String,
    },

    /// Check the n-block necessary conditions.
    Checkn { instance: PathBuf },

    /// Reduce an invertible n-block completion to kernel/cokernel
    /// coordinates and extract the residual matrix.
    Reduce { instance: PathBuf, completion: PathBuf },

    /// Search for an invertible completion with seeded random trials.
    Search {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },

    /// Generate a seeded instance of the requested kind.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Upper bound for every space dimension.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Entries of random factors stay in [-bound, bound].
        #[arg(long, default_value_t = 2)]
        bound: i64,
        /// Number of diagonal blocks (random-n only).
        #[arg(long, default_value_t = 4)]
        blocks: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Feasible3,
    Infeasible3,
    Random3,
    #[value(name = "randomN", alias = "random-n")]
    RandomN,
}

/// Whether the mathematical answer was affirmative. Negative answers are
/// still well-formed reports; they only change the exit status.
enum Outcome {
    Success,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((value, outcome)) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut text = serde_json::to_string_pretty(&value)
                        .expect("reports serialize");
                    text.push('\n');
                    text
                }
                Format::Text => render_text(&value),
            };
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            match outcome {
                Outcome::Success => ExitCode::SUCCESS,
                Outcome::Negative => ExitCode::from(1),
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} file {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{what} file {}: {e}", path.display()))
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn run(command: &Command) -> Result<(Value, Outcome), String> {
    match command {
        Command::Check3 { instance } => {
            let inst: Instance3 = load(instance, "instance")?;
            let report = check_conditions(&inst);
            let mut value = to_value(&report);
            value["first_failure"] = to_value(&report.first_failure());
            let outcome = if report.feasible { Outcome::Success } else { Outcome::Negative };
            Ok((value, outcome))
        }
        Command::Complete3 { instance } => {
            let inst: Instance3 = load(instance, "instance")?;
            let report = check_conditions(&inst);
            match construct_completion(&inst) {
                Ok((completion, trace)) => {
                    let m = assemble(&inst, &completion).expect("constructed shapes match");
                    let certificate =
                        certify(&m).expect("feasible instances assemble to invertible matrices");
                    let value = json!({
                        "feasibility": report,
                        "completion": completion,
                        "trace": trace,
                        "certificate": certificate,
                    });
                    Ok((value, Outcome::Success))
                }
                Err(CompleteError::Infeasible(condition)) => {
                    let value = json!({
                        "feasibility": report,
                        "infeasible": true,
                        "failed_condition": condition,
                    });
                    Ok((value, Outcome::Negative))
                }
                Err(CompleteError::Shape(e)) => Err(e.to_string()),
            }
        }
        Command::Verify { matrix } => {
            let m: Mat = load(matrix, "matrix")?;
            match certify(&m) {
                Ok(certificate) => Ok((to_value(&certificate), Outcome::Success)),
                Err(CertifyError::NotSquare { rows, cols }) => {
                    let value = json!({
                        "invertible": false,
                        "reason": format!("not square ({rows}x{cols})"),
                    });
                    Ok((value, Outcome::Negative))
                }
                Err(CertifyError::Singular { rank, kernel_witness }) => {
                    let value = json!({
                        "invertible": false,
                        "reason": "singular",
                        "rank": rank,
                        "kernel_witness": kernel_witness,
                    });
                    Ok((value, Outcome::Negative))
                }
            }
        }
        Command::Factor { instance, completion } => {
            let inst: Instance3 = load(instance, "instance")?;
            let comp: Completion3 = load(completion, "completion")?;
            let factors = factorize(&inst, &comp).map_err(|e| e.to_string())?;
            let assembled = assemble(&inst, &comp).map_err(|e| e.to_string())?;
            let product = factors
                .iter()
                .skip(1)
                .fold(factors[0].clone(), |acc, f| acc.mul(f));
            let value = json!({
                "factors": factors,
                "product_matches_assembled": product == assembled,
                "factor2_invertible": factors[1].is_invertible(),
                "factor4_invertible": factors[3].is_invertible(),
            });
            Ok((value, Outcome::Success))
        }
        Command::Ghost { s, t } => {
            let s: Mat = load(s, "S matrix")?;
            let t: Mat = load(t, "T matrix")?;
            let report = ghost_identity(&s, &t).map_err(|e| e.to_string())?;
            let outcome = if report.holds { Outcome::Success } else { Outcome::Negative };
            Ok((to_value(&report), outcome))
        }
        Command::Dims { k, m, n, l } => {
            let parse = |text: &str, name: &str| -> Result<ExtDim, String> {
                text.parse().map_err(|e| format!("--{name}: {e}"))
            };
            let k = parse(k, "k")?;
            let m = parse(m, "m")?;
            let n = parse(n, "n")?;
            let l = parse(l, "l")?;
            match decide_quotient_iso(k, m, n, l) {
                Ok(witness) => Ok((to_value(&witness), Outcome::Success)),
                Err(ExtDimError::HypothesisViolated(violation)) => {
                    let value = json!({
                        "error": "hypothesis violated",
                        "violation": violation,
                        "detail": violation.to_string(),
                    });
                    Ok((value, Outcome::Negative))
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Checkn { instance } => {
            let inst: InstanceN = load(instance, "instance")?;
            let report = check_necessary_n(&inst);
            let outcome = if report.all_hold { Outcome::Success } else { Outcome::Negative };
            Ok((to_value(&report), outcome))
        }
        Command::Reduce { instance, completion } => {
            let inst: InstanceN = load(instance, "instance")?;
            let comp: CompletionN = load(completion, "completion")?;
            match reduce(&inst, &comp) {
                Ok(artifacts) => {
                    let mut value = to_value(&artifacts);
                    value["extracted_invertible"] = Value::Bool(extracted_invertible(&artifacts));
                    Ok((value, Outcome::Success))
                }
                Err(NblockError::NotInvertible { reason, kernel_witness }) => {
                    let value = json!({
                        "invertible": false,
                        "reason": reason,
                        "kernel_witness": kernel_witness,
                    });
                    Ok((value, Outcome::Negative))
                }
                Err(other) => Err(other.to_string()),
            }
        }
        Command::Search { instance, seed, trials, bound } => {
            let inst: InstanceN = load(instance, "instance")?;
            match search_completion_n(&inst, *seed, *trials, *bound) {
                Some((trial, completion)) => {
                    let value = json!({
                        "found": true,
                        "trial": trial,
                        "completion": completion,
                    });
                    Ok((value, Outcome::Success))
                }
                None => {
                    let value = json!({ "found": false, "trials": trials });
                    Ok((value, Outcome::Negative))
                }
            }
        }
        Command::Gen { kind, seed, max_dim, bound, blocks } => {
            let value = match kind {
                GenKind::Feasible3 => to_value(&gen::feasible3(*seed, *max_dim, *bound)),
                GenKind::Infeasible3 => {
                    let inst = gen::infeasible3(*seed, *max_dim, *bound)
                        .map_err(|e| e.to_string())?;
                    to_value(&inst)
                }
                GenKind::Random3 => to_value(&gen::random3(*seed, *max_dim, *bound)),
                GenKind::RandomN => {
                    if *blocks < 2 {
                        return Err(format!(
                            "--blocks must be at least 2 for random-n, got {blocks}"
                        ));
                    }
                    to_value(&gen::random_n(*seed, *blocks, *max_dim, *bound))
                }
            };
            Ok((value, Outcome::Success))
        }
    }
}

/// Plain-text rendering of the same report structure the JSON format
/// emits: nested keys indented, scalar lists inline, list items bulleted.
fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn is_scalar(value: &Value) -> bool {
    matches!(
        value,
        Value::Null | Value::Bool(_) | Value::Number(_) | Value::String(_)
    )
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn inline_array(items: &[Value]) -> String {
    let parts: Vec<String> = items.iter().map(scalar_text).collect();
    format!("[{}]", parts.join(", "))
}

fn render_into(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Object(map) => render_object(map, indent, out),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push_str(&format!("{pad}{}\n", inline_array(items)));
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Array(inner) if inner.iter().all(is_scalar) => {
                        out.push_str(&format!("{pad}- {}\n", inline_array(inner)));
                    }
                    scalar if is_scalar(scalar) => {
                        out.push_str(&format!("{pad}- {}\n", scalar_text(scalar)));
                    }
                    nested => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(nested, indent + 2, out);
                    }
                }
            }
        }
        scalar => out.push_str(&format!("{pad}{}\n", scalar_text(scalar))),
    }
}

fn render_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (key, value) in map {
        if is_scalar(value) {
            out.push_str(&format!("{pad}{key}: {}\n", scalar_text(value)));
        } else if let Value::Array(items) = value {
            if items.iter().all(is_scalar) {
                out.push_str(&format!("{pad}{key}: {}\n", inline_array(items)));
            } else {
                out.push_str(&format!("{pad}{key}:\n"));
                render_into(value, indent + 2, out);
            }
        } else {
            out.push_str(&format!("{pad}{key}:\n"));
            render_into(value, indent + 2, out);
        }
    }
}
