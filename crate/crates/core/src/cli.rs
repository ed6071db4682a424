//! Command-line front end. Exit codes: 0 success, 1 verification failure
//! or impossible branch, 2 malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::executor::{execute_branch, forced_from_bits, TraceEntry};
use crate::gate_model::plan_groups;
use crate::protocol::compile;
use crate::resources::{render_table1, render_table2, table1, table2};
use crate::scenario::{Mode, Scenario};
use crate::verifier::{random_state, verify_gate, verify_sampled, DEFAULT_TOL};

#[derive(Debug, Parser)]
#[command(name = "telegate", version, about = "Verify and account remote controlled-U gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every measurement branch against the ideal gate.
    Verify {
        /// Scenario file, or a bundled name (bipartite_case1, bipartite_case2,
        /// tripartite, fig2_parametric[:n]).
        scenario: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Number of seeded random input states.
        #[arg(long, default_value_t = 10)]
        inputs: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the resource comparison tables.
    Report {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: Option<u8>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long)]
        json: bool,
    },
    /// Write the executed-instruction trace of one forced branch.
    Trace {
        scenario: String,
        /// Outcome bits in program measurement order, e.g. 0110.
        #[arg(long)]
        branch: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

/// Loads a scenario file, falling back to a bundled name.
pub fn load_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.exists() {
        return Scenario::load(path);
    }
    Scenario::bundled(arg).ok_or_else(|| Error::Scenario(format!("no scenario file or bundled scenario named `{arg}`")))
}

enum Failure {
    Usage(Error),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify {
            scenario,
            tol,
            inputs,
            json,
        } => verify(&scenario, tol, inputs, json, out),
        Command::Report { table, n_max, json } => report(table, n_max as usize, json, out),
        Command::Trace {
            scenario,
            branch,
            out: path,
            json,
        } => trace(&scenario, &branch, path.as_deref(), json, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::Runtime(e.to_string()))
}

fn io(e: std::io::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn verify(arg: &str, tol: f64, n_inputs: usize, json: bool, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Scenario(format!("tolerance must be positive, got {tol}")).into());
    }
    let scenario = load_scenario(arg)?;
    let resolved = scenario.resolve()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut inputs: Vec<_> = resolved.input.iter().cloned().collect();
    for _ in 0..n_inputs {
        inputs.push(random_state(resolved.ownership.len(), &mut rng)?);
    }
    let report = match scenario.mode {
        Mode::Exhaustive => verify_gate(&resolved.spec, &resolved.ownership, &inputs, tol)?,
        Mode::Sampled => verify_sampled(
            &resolved.spec,
            &resolved.ownership,
            &inputs,
            scenario.shots,
            scenario.seed,
            tol,
        )?,
    };
    if json {
        #[derive(Serialize)]
        struct Out<'a> {
            scenario: &'a str,
            #[serde(flatten)]
            report: &'a crate::verifier::VerificationReport,
        }
        emit_json(
            out,
            &Out {
                scenario: &scenario.name,
                report: &report,
            },
        )?;
    } else {
        if !scenario.name.is_empty() {
            writeln!(out, "scenario: {}", scenario.name).map_err(io)?;
        }
        writeln!(out, "{report}").map_err(io)?;
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn report(table: Option<u8>, n_max: usize, json: bool, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let ns: Vec<usize> = (1..=n_max).collect();
    let t1 = matches!(table, None | Some(1)).then(table1).transpose()?;
    let t2 = matches!(table, None | Some(2)).then(|| table2(&ns)).transpose()?;
    if json {
        #[derive(Serialize)]
        struct Out {
            #[serde(skip_serializing_if = "Option::is_none")]
            table1: Option<Vec<crate::resources::Table1Row>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            table2: Option<Vec<crate::resources::Table2Row>>,
        }
        emit_json(out, &Out { table1: t1, table2: t2 })?;
    } else {
        let mut parts = Vec::new();
        if let Some(rows) = &t1 {
            parts.push(render_table1(rows));
        }
        if let Some(rows) = &t2 {
            parts.push(render_table2(rows));
        }
        write!(out, "{}", parts.join("\n")).map_err(io)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    scenario: &'a str,
    branch: &'a str,
    probability: f64,
    entries: &'a [TraceEntry],
}

fn trace(arg: &str, bits: &str, path: Option<&Path>, json: bool, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let scenario = load_scenario(arg)?;
    let resolved = scenario.resolve()?;
    let plan = plan_groups(&resolved.spec, &resolved.ownership)?;
    let program = compile(&plan, &resolved.spec.u);
    let forced = forced_from_bits(&program, bits)?;
    let input = match resolved.input {
        Some(s) => s,
        None => random_state(resolved.ownership.len(), &mut ChaCha8Rng::seed_from_u64(scenario.seed))?,
    };
    let result = match execute_branch(&program, &input, &forced) {
        Ok(r) => r,
        Err(e @ Error::ImpossibleMeasurement { .. }) => return Err(Failure::Runtime(e.to_string())),
        Err(e) => return Err(e.into()),
    };

    let text = if json {
        let doc = TraceDoc {
            scenario: &scenario.name,
            branch: bits,
            probability: result.probability,
            entries: &result.trace,
        };
        serde_json::to_string_pretty(&doc).map_err(|e| Failure::Runtime(e.to_string()))? + "\n"
    } else {
        format!(
            "# scenario {} branch {} probability {:.12}\n{}",
            scenario.name,
            bits,
            result.probability,
            result.render_trace()
        )
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(io)?,
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(0)
}
