//! Command-line surface.
//!
//! Every command prints a single machine-readable payload on standard
//! output; notes and diagnostics go to standard error. With `--json` the
//! notes are suppressed so stdout carries the payload alone. Exit codes:
//! 0 on success (an `unknown` verdict is a success), 1 on domain failures
//! (failed certificates, missing witnesses, size bounds), 2 on usage and
//! parse errors.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::abelian::{
    parse_group, twisted_classes_bruteforce, BlockAutomorphism, ComponentAction,
    DEFAULT_BRUTE_BOUND,
};
use crate::certify::certify_finite_reidemeister;
use crate::classifier::classify;
use crate::error::{Error, Result};
use crate::json::{
    certificate_to_json, classification_to_json, matrix_to_numbers, numbers_to_matrix,
    witness_from_json, witness_to_json, WitnessJson,
};
use crate::matrix::IntMatrix;
use crate::oracle::{finite_lamplighter_reidemeister, DEFAULT_LAMPLIGHTER_BOUND};
use crate::snf::{coker_order, smith_normal_form, Cardinality};
use crate::wreath::DEFAULT_MAX_ORDER;

#[derive(Parser)]
#[command(
    name = "lamplighter",
    about = "Twisted-conjugacy toolkit for lamplighter-type groups G wr Z^k"
)]
pub struct Cli {
    /// Print only the JSON payload on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Decide whether every automorphism of G wr Z^k has infinite
    /// Reidemeister number.
    Classify {
        /// Lamp group as p^r:d components, e.g. "2^1:3,5^1:1".
        #[arg(long)]
        group: String,
        /// Lattice rank.
        #[arg(long)]
        k: usize,
    },
    /// Build a witness automorphism with finite Reidemeister number.
    Witness {
        #[arg(long)]
        group: String,
        #[arg(long)]
        k: usize,
        /// Also write the witness JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run all certificate checks for a witness file.
    Certify {
        #[arg(long)]
        witness: PathBuf,
    },
    /// Exact integer linear algebra.
    Linalg {
        #[command(subcommand)]
        op: LinalgOp,
    },
    /// Brute-force twisted-conjugacy oracles.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Subcommand)]
pub enum LinalgOp {
    /// Determinant of an integer matrix.
    Det {
        /// Matrix as a nested JSON array, e.g. "[[1,-1],[1,2]]".
        #[arg(long)]
        matrix: String,
    },
    /// Smith normal form U*M*V = S.
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Order of the cokernel Z^n / M Z^n.
    Coker {
        #[arg(long)]
        matrix: String,
    },
    /// Multiplicative order, over Z or modulo an integer.
    Order {
        #[arg(long)]
        matrix: String,
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
}

#[derive(Subcommand)]
pub enum OracleOp {
    /// Twisted classes of a scalar automorphism on a finite abelian group.
    Abelian {
        #[arg(long)]
        group: String,
        /// Multiplier applied to every component.
        #[arg(long)]
        m: u64,
    },
    /// Twisted classes of a witness on the finite analogue G wr (Z_n)^k.
    Lamplighter {
        #[arg(long)]
        group: String,
        /// Lattice modulus.
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Witness JSON file.
        #[arg(long)]
        witness: PathBuf,
    },
}

/// What a finished invocation writes where.
pub struct CommandResult {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Output {
    payload: String,
    notes: String,
    code: u8,
}

impl Output {
    fn ok(payload: String) -> Self {
        Output { payload, notes: String::new(), code: 0 }
    }
}

/// Runs one parsed invocation and renders its streams.
pub fn run(cli: &Cli) -> CommandResult {
    match execute(cli) {
        Ok(out) => CommandResult {
            exit_code: out.code,
            stdout: out.payload,
            stderr: if cli.json { String::new() } else { out.notes },
        },
        Err(e) => CommandResult {
            exit_code: if e.is_usage() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    Ok(format!("{}\n", serde_json::to_string(value)?))
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Classify { group, k } => {
            let g = parse_group(group)?;
            let c = classify(&g, *k)?;
            Ok(Output::ok(json_line(&classification_to_json(&c))?))
        }
        Command::Witness { group, k, out } => {
            let g = parse_group(group)?;
            let c = classify(&g, *k)?;
            let phi = c.witness.ok_or_else(|| {
                Error::NoWitness(format!(
                    "no witness for {group} with k = {k}: {}",
                    c.reason
                ))
            })?;
            let wire = witness_to_json(&phi);
            let payload = json_line(&wire)?;
            let mut notes = String::new();
            if let Some(path) = out {
                std::fs::write(path, &payload)?;
                let _ = writeln!(notes, "witness written to {}", path.display());
            }
            Ok(Output { payload, notes, code: 0 })
        }
        Command::Certify { witness } => {
            let text = std::fs::read_to_string(witness)?;
            let wire: WitnessJson = serde_json::from_str(&text)?;
            let phi = witness_from_json(&wire)?;
            let cert = certify_finite_reidemeister(&phi, DEFAULT_MAX_ORDER)?;
            let payload = json_line(&certificate_to_json(&wire, &cert))?;
            let code = if cert.is_valid() { 0 } else { 1 };
            let notes = match &cert.failure {
                Some(reason) => format!("certificate failed: {reason}\n"),
                None => String::new(),
            };
            Ok(Output { payload, notes, code })
        }
        Command::Linalg { op } => linalg(op),
        Command::Oracle { op } => oracle(op),
    }
}

fn parse_matrix_arg(text: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<serde_json::Number>> = serde_json::from_str(text)?;
    numbers_to_matrix(&rows)
}

fn linalg(op: &LinalgOp) -> Result<Output> {
    match op {
        LinalgOp::Det { matrix } => {
            let m = parse_matrix_arg(matrix)?;
            Ok(Output::ok(format!("{}\n", m.det()?)))
        }
        LinalgOp::Snf { matrix } => {
            let m = parse_matrix_arg(matrix)?;
            let snf = smith_normal_form(&m);
            #[derive(Serialize)]
            struct SnfJson {
                u: Vec<Vec<serde_json::Number>>,
                s: Vec<Vec<serde_json::Number>>,
                v: Vec<Vec<serde_json::Number>>,
            }
            Ok(Output::ok(json_line(&SnfJson {
                u: matrix_to_numbers(&snf.u),
                s: matrix_to_numbers(&snf.s),
                v: matrix_to_numbers(&snf.v),
            })?))
        }
        LinalgOp::Coker { matrix } => {
            let m = parse_matrix_arg(matrix)?;
            match coker_order(&m)? {
                Cardinality::Finite(n) => Ok(Output::ok(format!("{n}\n"))),
                Cardinality::Infinite => Ok(Output::ok("\"infinite\"\n".into())),
            }
        }
        LinalgOp::Order { matrix, modulus } => {
            let m = parse_matrix_arg(matrix)?;
            let order = match modulus {
                None => m.order(DEFAULT_MAX_ORDER)?,
                Some(q) => m.reduce_mod(*q)?.order(DEFAULT_MAX_ORDER)?,
            };
            let order = order.ok_or_else(|| {
                Error::OrderNotFound(format!(
                    "no multiplicative order up to {DEFAULT_MAX_ORDER}"
                ))
            })?;
            Ok(Output::ok(format!("{order}\n")))
        }
    }
}

fn oracle(op: &OracleOp) -> Result<Output> {
    match op {
        OracleOp::Abelian { group, m } => {
            let g = parse_group(group)?;
            let actions = g
                .components()
                .iter()
                .map(|_| ComponentAction::Scalar(*m))
                .collect();
            let phi = BlockAutomorphism::new(&g, actions)?;
            let (classes, reps) = twisted_classes_bruteforce(&g, &phi, DEFAULT_BRUTE_BOUND)?;
            #[derive(Serialize)]
            struct AbelianJson {
                classes: u64,
            }
            let mut notes = String::new();
            for rep in &reps {
                let _ = writeln!(notes, "representative: {:?}", rep.coords);
            }
            Ok(Output {
                payload: json_line(&AbelianJson { classes })?,
                notes,
                code: 0,
            })
        }
        OracleOp::Lamplighter { group, n, k, witness } => {
            let g = parse_group(group)?;
            let text = std::fs::read_to_string(witness)?;
            let wire: WitnessJson = serde_json::from_str(&text)?;
            let phi = witness_from_json(&wire)?;
            if phi.group()? != g {
                return Err(Error::Parameter(format!(
                    "witness is over {}, not {group}",
                    phi.group()?
                )));
            }
            if phi.k() != *k {
                return Err(Error::Parameter(format!(
                    "witness has k = {}, not {k}",
                    phi.k()
                )));
            }
            let report = finite_lamplighter_reidemeister(&phi, *n, None, DEFAULT_LAMPLIGHTER_BOUND)?;
            #[derive(Serialize)]
            struct LamplighterJson {
                classes: u64,
                sum_formula_ok: Option<bool>,
            }
            let mut notes = String::new();
            for rep in &report.representatives {
                let _ = writeln!(notes, "representative: {rep}");
            }
            if let Some(sf) = &report.sum_formula {
                let _ = writeln!(
                    notes,
                    "sum formula: {} lattice classes, summands {:?}, total {}",
                    sf.lattice_representatives.len(),
                    sf.summands,
                    sf.total
                );
            }
            Ok(Output {
                payload: json_line(&LamplighterJson {
                    classes: report.classes,
                    sum_formula_ok: report.sum_formula.as_ref().map(|sf| sf.matches),
                })?,
                notes,
                code: 0,
            })
        }
    }
}

/// Parses an argv-style invocation; used by tests and examples.
pub fn parse_args<I, T>(args: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}

impl FromStr for Cli {
    type Err = clap::Error;

    /// Splits on whitespace; convenient for driving the CLI from text.
    fn from_str(line: &str) -> std::result::Result<Self, Self::Err> {
        parse_args(std::iter::once("lamplighter").chain(line.split_whitespace()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_line(line: &str) -> CommandResult {
        run(&line.parse::<Cli>().unwrap())
    }

    #[test]
    fn classify_reports_the_pinned_verdicts() {
        let r = run_line("classify --group 2^1:1 --k 3 --json");
        assert_eq!(r.exit_code, 0);
        let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["verdict"], "r_infinity");
        assert_eq!(v["case"], "theorem2");

        let r = run_line("classify --group 3^1:1 --k 2 --json");
        let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["verdict"], "not_r_infinity");
        assert_eq!(v["case"], "case2");
    }

    #[test]
    fn bad_group_spec_is_a_usage_error() {
        let r = run_line("classify --group 4^1:1 --k 2");
        assert_eq!(r.exit_code, 2);
        assert!(r.stdout.is_empty());
        assert!(r.stderr.starts_with("error:"));
    }

    #[test]
    fn witness_then_certify_round_trip() {
        let r = run_line("witness --group 2^1:3,5^1:1 --k 2 --json");
        assert_eq!(r.exit_code, 0);
        let wire: WitnessJson = serde_json::from_str(&r.stdout).unwrap();
        let phi = witness_from_json(&wire).unwrap();
        let cert = certify_finite_reidemeister(&phi, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(cert.r, Some(num_bigint::BigUint::from(3u32)));
    }

    #[test]
    fn witnessless_inputs_exit_one() {
        for line in [
            "witness --group 2^1:1 --k 2",
            "witness --group 3^1:1 --k 2",
            "witness --group 3^1:1,2^1:2 --k 2",
        ] {
            let r = run_line(line);
            assert_eq!(r.exit_code, 1, "{line}");
        }
    }

    #[test]
    fn linalg_matches_the_pinned_examples() {
        let r = run_line("linalg coker --matrix [[1,-1],[1,2]]");
        assert_eq!(r.stdout, "3\n");
        let r = run_line("linalg det --matrix [[1,0],[0,1]]");
        assert_eq!(r.stdout, "1\n");
        let r = run_line(
            "linalg order --matrix [[0,0,0,0,1],[0,0,0,1,1],[0,0,1,1,1],[0,1,1,1,1],[1,1,1,1,1]] --mod 2",
        );
        assert_eq!(r.stdout, "31\n");
    }

    #[test]
    fn infinite_coker_and_missing_order_are_reported() {
        let r = run_line("linalg coker --matrix [[1,1],[1,1]]");
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.stdout, "\"infinite\"\n");
        let r = run_line("linalg order --matrix [[1,1],[0,1]]");
        assert_eq!(r.exit_code, 1);
    }

    #[test]
    fn malformed_matrix_is_a_usage_error() {
        let r = run_line("linalg det --matrix [[1,2],[3]]");
        assert_eq!(r.exit_code, 2);
    }

    #[test]
    fn abelian_oracle_counts_one_class() {
        let r = run_line("oracle abelian --group 5^1:1 --m 2 --json");
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.stdout, "{\"classes\":1}\n");
        assert!(r.stderr.is_empty());
    }

    #[test]
    fn json_flag_keeps_stdout_pure() {
        let r = run_line("oracle abelian --group 3^1:1 --m 1");
        assert_eq!(r.stdout, "{\"classes\":3}\n");
        assert!(r.stderr.contains("representative"));
        let r = run_line("oracle abelian --group 3^1:1 --m 1 --json");
        assert!(r.stderr.is_empty());
    }
}
