//! The `prhl` command line.
//!
//! Exit codes: 0 accept or valid, 1 reject or invalid, 2 unknown or bounded,
//! 3 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::assertsem::BoundedOracle;
use crate::checker::{check_cprhl, check_prhl, CheckOptions};
use crate::lang::{parse_program, parse_triple, print_assertion, Nat, Prog, Triple};
use crate::proofir::{parse_certificate, serialize_cprhl, serialize_prhl, Certificate, CheckReport, Outcome};
use crate::prover::{prove_prhl, transform_to_cyclic, ProveError, ProveRequest};
use crate::sem::{check_triple, run, Bounds, Logic, State, Verdict};
use crate::wpcalc::{encode_sequence, wpr, LoopMode, WpError, DEFAULT_SEARCH_CEILING};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "prhl", version, about = "Partial reverse Hoare logic: bounded oracle, checker and prover")]
pub struct Cli {
    /// Largest value enumerated for each variable.
    #[arg(long, global = true, env = "PRHL_DOMAIN_MAX", default_value_t = 8)]
    pub domain_max: Nat,
    /// Small steps explored per run before it counts as cut.
    #[arg(long, global = true, env = "PRHL_STEP_BOUND", default_value_t = 10_000)]
    pub step_bound: usize,
    /// Largest value a quantified variable ranges over.
    #[arg(long, global = true, env = "PRHL_QUANT_BOUND", default_value_t = 16)]
    pub quant_bound: Nat,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also accept fresh-assignment premises written `x' = E[x:=x'] && P[x:=x']`.
    #[arg(long, global = true)]
    pub accept_literal_fresh_assign: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute a program and list the final states.
    Run {
        file: PathBuf,
        /// Initial values, `name=value`; unset variables start at 0.
        #[arg(long = "state", value_name = "K=V", num_args = 0..)]
        state: Vec<String>,
    },
    /// Decide a triple file (`pre:`, `prog:`, `post:` sections) by enumeration.
    CheckTriple {
        file: PathBuf,
        #[arg(long, default_value = "partial-reverse")]
        logic: String,
    },
    /// Check a certificate; the proof system is read from the document.
    CheckProof { file: PathBuf },
    /// Build and check a derivation for a triple file.
    Prove {
        file: PathBuf,
        #[arg(long, default_value = "beta")]
        loop_mode: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn an ordinary certificate into a cyclic one.
    Transform {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the weakest pre-condition of the program and post of a triple file.
    Wp {
        file: PathBuf,
        #[arg(long, default_value = "beta")]
        loop_mode: String,
    },
    /// Find the smallest `(n, m)` whose β-function yields the given values.
    BetaEncode { values: String },
}

impl Cli {
    pub fn bounds(&self) -> Bounds {
        Bounds::new(self.domain_max, self.step_bound, self.quant_bound)
    }

    fn check_options(&self) -> CheckOptions {
        CheckOptions { bounds: self.bounds(), accept_literal_fresh_assign: self.accept_literal_fresh_assign }
    }
}

/// A failure that ends the command with a diagnostic.
struct Fail(i32, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_triple(path: &Path) -> Result<Triple, Fail> {
    parse_triple(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn loop_mode(s: &str) -> Result<LoopMode, Fail> {
    s.parse().map_err(|e: String| usage(e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Fail> {
    out.write_all(text.as_bytes()).map_err(|e| usage(format!("write failed: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Fail> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
    s.push('\n');
    emit(out, &s)
}

fn write_or_print(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => emit(out, text),
    }
}

/// Renders a report in the requested format.
pub fn emit_report(report: &CheckReport, format: Format) -> String {
    match format {
        Format::Text => report.render_text(),
        Format::Machine => report.render_machine(),
    }
}

/// Exit code of a check report.
pub fn report_exit_code(report: &CheckReport) -> i32 {
    match report.outcome {
        Outcome::Accept => EXIT_OK,
        Outcome::AcceptBounded => EXIT_UNKNOWN,
        Outcome::Reject => EXIT_REJECT,
    }
}

fn verdict_exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Valid => EXIT_OK,
        Verdict::Invalid(_) => EXIT_REJECT,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Fail> {
    let bounds = cli.bounds();
    match &cli.command {
        Command::Run { file, state } => {
            let text = read(file)?;
            let prog = parse_program(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let mut init = State::new();
            for kv in state {
                let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("`{kv}` is not of the form name=value")))?;
                let v: Nat = v.trim().parse().map_err(|_| usage(format!("`{v}` is not a natural number")))?;
                init.set(k.trim(), v);
            }
            let mut vars: Vec<String> = prog.vars().into_iter().collect();
            vars.extend(init.support().map(|(k, _)| k.clone()).filter(|k| !prog.vars().contains(k)));
            vars.sort();
            let r = run(&prog, &init, &bounds);
            match cli.format {
                Format::Text => {
                    for (s, steps) in &r.finals {
                        emit(out, &format!("{} after {steps} steps\n", s.render(&vars)))?;
                    }
                    if r.truncated {
                        emit(out, &format!("truncated: some run exceeds {} steps\n", bounds.step_bound))?;
                    }
                }
                Format::Machine => {
                    #[derive(Serialize)]
                    struct Final {
                        state: std::collections::BTreeMap<String, Nat>,
                        steps: usize,
                    }
                    #[derive(Serialize)]
                    struct Doc {
                        finals: Vec<Final>,
                        truncated: bool,
                    }
                    let finals = r.finals.iter().map(|(s, &steps)| Final { state: s.dense(&vars), steps }).collect();
                    emit_json(out, &Doc { finals, truncated: r.truncated })?;
                }
            }
            Ok(if r.truncated { EXIT_UNKNOWN } else { EXIT_OK })
        }
        Command::CheckTriple { file, logic } => {
            let t = load_triple(file)?;
            let logic: Logic = logic.parse().map_err(|e: String| usage(e))?;
            let v = check_triple(logic, &t.pre, &t.prog, &t.post, &bounds);
            match cli.format {
                Format::Text => emit(out, &format!("{v}\n"))?,
                Format::Machine => {
                    #[derive(Serialize)]
                    struct Doc<'a> {
                        triple: String,
                        verdict: &'a Verdict,
                        bounds: Bounds,
                    }
                    emit_json(out, &Doc { triple: t.to_string(), verdict: &v, bounds })?;
                }
            }
            Ok(verdict_exit_code(&v))
        }
        Command::CheckProof { file } => {
            let cert = parse_certificate(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let opts = cli.check_options();
            let report = match &cert {
                Certificate::Prhl(p) => check_prhl(p, &BoundedOracle, &opts),
                Certificate::Cprhl(c) => check_cprhl(c, &BoundedOracle, &opts),
            };
            emit(out, &emit_report(&report, cli.format))?;
            Ok(report_exit_code(&report))
        }
        Command::Prove { file, loop_mode: mode, output } => {
            let t = load_triple(file)?;
            let req = ProveRequest::new(t, loop_mode(mode)?, bounds);
            match prove_prhl(&req, &BoundedOracle) {
                Ok(proof) => {
                    let report = check_prhl(&proof, &BoundedOracle, &cli.check_options());
                    write_or_print(output, &serialize_prhl(&proof), out)?;
                    if output.is_some() || cli.format == Format::Machine {
                        emit(out, &emit_report(&report, cli.format))?;
                    }
                    Ok(report_exit_code(&report))
                }
                Err(ProveError::Failure(v)) => {
                    emit(out, &format!("no proof: {v}\n"))?;
                    Ok(verdict_exit_code(&v))
                }
                Err(ProveError::Wp(e @ WpError::MissingInvariant(_))) => Err(usage(e.to_string())),
                Err(ProveError::Wp(e)) => Err(Fail(EXIT_UNKNOWN, e.to_string())),
            }
        }
        Command::Transform { file, output } => {
            let cert = parse_certificate(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let Certificate::Prhl(p) = cert else {
                return Err(usage(format!("{}: expected an ordinary (prhl) certificate", file.display())));
            };
            let c = transform_to_cyclic(&p, &Prog::Empty, &p.triple.post);
            write_or_print(output, &serialize_cprhl(&c), out)?;
            Ok(EXIT_OK)
        }
        Command::Wp { file, loop_mode: mode } => {
            let t = load_triple(file)?;
            let w = wpr(&t.prog, &t.post, loop_mode(mode)?).map_err(|e| match e {
                WpError::MissingInvariant(_) => usage(e.to_string()),
                other => Fail(EXIT_UNKNOWN, other.to_string()),
            })?;
            match cli.format {
                Format::Text => emit(out, &format!("{}\n", print_assertion(&w)))?,
                Format::Machine => {
                    #[derive(Serialize)]
                    struct Doc {
                        wpr: String,
                    }
                    emit_json(out, &Doc { wpr: print_assertion(&w) })?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::BetaEncode { values } => {
            let vals: Vec<Nat> = values
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|_| usage(format!("`{s}` is not a natural number"))))
                .collect::<Result<_, _>>()?;
            let (n, m) = encode_sequence(&vals, DEFAULT_SEARCH_CEILING).map_err(|e| Fail(EXIT_UNKNOWN, e.to_string()))?;
            match cli.format {
                Format::Text => emit(out, &format!("n={n} m={m}\n"))?,
                Format::Machine => {
                    #[derive(Serialize)]
                    struct Doc {
                        n: Nat,
                        m: Nat,
                    }
                    emit_json(out, &Doc { n, m })?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
