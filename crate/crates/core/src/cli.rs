//! Command-line front end.
//!
//! Every command produces one JSON object with the keys `command`,
//! `elapsed_ms`, `payload` and `status`, all object keys sorted. `status` is
//! `"ok"` or `"fail"`; the process exit code is 0 exactly when it is `"ok"`.
//! Domain errors become `"fail"` reports with `payload.error` set.
//! `elapsed_ms` is `null` unless `--timing` is given, so repeated runs are
//! byte-identical by default.
//!
//! Rationals in payloads are strings (`"-3/2"`); counts are JSON numbers;
//! partitions use the block notation `{1,3|2}`.

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::combinat::{canonical_function, enumerate_set_partitions};
use crate::error::{Error, Result};
use crate::maps::{check_multiplicative, polarize, restitute};
use crate::parse::{parse_expression, parse_polynomial};
use crate::poly::Family;
use crate::rings::{is_sn_invariant, RingConfig};
use crate::traceinv::{
    eval_diagonal, express_in_t_basis, multilinear_dim, reduce_traces, t_lambda,
};
use crate::verify;

/// Largest sizes accepted without `--allow-large`.
pub const MAX_N: usize = 4;
pub const MAX_M: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "cominv",
    version,
    about = "Exact invariants of commuting matrices"
)]
pub struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Lift the n <= 4, m <= 6 guardrails.
    #[arg(long, global = true)]
    pub allow_large: bool,
    /// Record wall-clock time in `elapsed_ms`.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Generic,
    Diagonal,
    Abstract,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Generic => Family::Generic,
            FamilyArg::Diagonal => Family::Diagonal,
            FamilyArg::Abstract => Family::Abstract,
        }
    }
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Dimension of the multilinear slice and its partition basis.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// The basis t_Λ with the canonical words f_Λ.
    Tbasis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Evaluate a trace expression on diagonal matrices.
    Restrict {
        #[arg(long)]
        n: usize,
        /// Number of copies; defaults to the largest index in the expression.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        expr: String,
    },
    /// Rewrite to at most n trace factors per term.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        expr: String,
    },
    /// Coordinates of a multilinear trace expression in the t_Λ basis.
    Express {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        expr: String,
    },
    /// Full polarization of one copy into fresh copies.
    Polarize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "diagonal")]
        family: FamilyArg,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        source: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<u32>,
    },
    /// Identify several copies with one target copy.
    Restitute {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "diagonal")]
        family: FamilyArg,
        #[arg(long)]
        poly: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<u32>,
        #[arg(long)]
        target: u32,
    },
    /// Exact structural checks.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum VerifyCommand {
    /// The alternating S_{n+1} trace identity vanishes on n×n matrices.
    Fundamental {
        #[arg(long)]
        n: usize,
    },
    /// Full rank, unitriangularity and round-trip of the multilinear slice.
    Isomorphism {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// D(ab) = D(a)D(b) on seeded random pairs.
    Dmap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Polarized D equals the symmetrized tensor on monomial tuples.
    Roby {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
    },
    /// Reduction of tr(X1)…tr(Xm) to at most n factors is exact.
    Reduction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// On diagonal matrices φ_σ depends only on the cycle supports of σ.
    Collapse {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// restitute ∘ polarize = k! on seeded homogeneous inputs.
    Aronhold {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub status: Status,
    pub command: Value,
    pub payload: Value,
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "status": match self.status { Status::Ok => "ok", Status::Fail => "fail" },
            "command": self.command,
            "payload": self.payload,
            "elapsed_ms": self.elapsed_ms,
        })
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let v = self.to_value();
        if pretty {
            serde_json::to_string_pretty(&v).expect("JSON values serialize")
        } else {
            serde_json::to_string(&v).expect("JSON values serialize")
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Fail => 1,
        }
    }
}

fn echo(name: &str, args: Value) -> Value {
    json!({ "name": name, "args": args })
}

impl Command {
    /// Name and arguments as echoed in the report.
    pub fn echo(&self) -> Value {
        match self {
            Command::Dim { n, m } => echo("dim", json!({ "n": n, "m": m })),
            Command::Tbasis { n, m } => echo("tbasis", json!({ "n": n, "m": m })),
            Command::Restrict { n, m, expr } => {
                echo("restrict", json!({ "n": n, "m": m, "expr": expr }))
            }
            Command::Reduce { n, expr } => echo("reduce", json!({ "n": n, "expr": expr })),
            Command::Express { n, m, expr } => {
                echo("express", json!({ "n": n, "m": m, "expr": expr }))
            }
            Command::Polarize {
                n,
                m,
                family,
                poly,
                source,
                targets,
            } => echo(
                "polarize",
                json!({ "n": n, "m": m, "family": Family::from(*family).to_string(),
                        "poly": poly, "source": source, "targets": targets }),
            ),
            Command::Restitute {
                n,
                m,
                family,
                poly,
                sources,
                target,
            } => echo(
                "restitute",
                json!({ "n": n, "m": m, "family": Family::from(*family).to_string(),
                        "poly": poly, "sources": sources, "target": target }),
            ),
            Command::Verify { check } => match check {
                VerifyCommand::Fundamental { n } => echo("verify fundamental", json!({ "n": n })),
                VerifyCommand::Isomorphism { n, m } => {
                    echo("verify isomorphism", json!({ "n": n, "m": m }))
                }
                VerifyCommand::Dmap { n, m, trials, seed } => echo(
                    "verify dmap",
                    json!({ "n": n, "m": m, "trials": trials, "seed": seed }),
                ),
                VerifyCommand::Roby { n, m, max_degree } => echo(
                    "verify roby",
                    json!({ "n": n, "m": m, "max_degree": max_degree }),
                ),
                VerifyCommand::Reduction { n, m } => {
                    echo("verify reduction", json!({ "n": n, "m": m }))
                }
                VerifyCommand::Collapse { n, m } => {
                    echo("verify collapse", json!({ "n": n, "m": m }))
                }
                VerifyCommand::Aronhold {
                    n,
                    max_degree,
                    samples,
                    seed,
                } => echo(
                    "verify aronhold",
                    json!({ "n": n, "max_degree": max_degree, "samples": samples, "seed": seed }),
                ),
            },
        }
    }
}

struct Guard {
    allow_large: bool,
}

impl Guard {
    fn cfg(&self, n: usize, m: usize) -> Result<RingConfig> {
        self.check("n", n, MAX_N)?;
        self.check("m", m, MAX_M)?;
        RingConfig::new(n, m)
    }

    fn check(&self, what: &str, value: usize, max: usize) -> Result<()> {
        if !self.allow_large && value > max {
            return Err(Error::TooLarge(format!("{what} = {value} (limit {max})")));
        }
        Ok(())
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn dispatch(cmd: &Command, guard: &Guard) -> Result<(bool, Value)> {
    match cmd {
        Command::Dim { n, m } => {
            guard.cfg(*n, *m)?;
            let parts: Vec<String> = enumerate_set_partitions(*m, *n)?
                .iter()
                .map(ToString::to_string)
                .collect();
            let dim = multilinear_dim(*n, *m);
            Ok((
                true,
                json!({ "dimension": dim.to_u64(), "partitions": parts }),
            ))
        }
        Command::Tbasis { n, m } => {
            guard.cfg(*n, *m)?;
            let basis: Vec<Value> = enumerate_set_partitions(*m, *n)?
                .iter()
                .map(|l| {
                    Ok(json!({
                        "partition": l.to_string(),
                        "word": canonical_function(l, *n)?.to_string(),
                        "t": t_lambda(l).to_string(),
                    }))
                })
                .collect::<Result<_>>()?;
            Ok((
                true,
                json!({ "dimension": multilinear_dim(*n, *m).to_u64(), "basis": basis }),
            ))
        }
        Command::Restrict { n, m, expr } => {
            let e = parse_expression(expr)?;
            let m = m.unwrap_or((e.max_copy() as usize).max(1));
            let cfg = guard.cfg(*n, m)?;
            let p = eval_diagonal(&e, &cfg)?;
            Ok((
                true,
                json!({
                    "expression": e.to_string(),
                    "polynomial": p.to_string(),
                    "sn_invariant": is_sn_invariant(&p, &cfg)?,
                }),
            ))
        }
        Command::Reduce { n, expr } => {
            guard.check("n", *n, MAX_N)?;
            let e = parse_expression(expr)?;
            guard.check("m", e.max_copy() as usize, MAX_M)?;
            let r = reduce_traces(&e, *n)?;
            Ok((
                true,
                json!({
                    "input": e.to_string(),
                    "output": r.to_string(),
                    "terms": r.len(),
                    "max_factors": r.max_factor_count(),
                }),
            ))
        }
        Command::Express { n, m, expr } => {
            let cfg = guard.cfg(*n, *m)?;
            let e = parse_expression(expr)?;
            let p = eval_diagonal(&e, &cfg)?;
            let coeffs = express_in_t_basis(&p, &cfg)?;
            let map: Map<String, Value> = coeffs
                .iter()
                .map(|(l, c)| (l.to_string(), Value::String(c.to_string())))
                .collect();
            Ok((true, json!({ "coefficients": map, "residual": "0" })))
        }
        Command::Polarize {
            n,
            m,
            family,
            poly,
            source,
            targets,
        } => {
            let cfg = guard.cfg(*n, *m)?;
            let p = parse_polynomial(poly, (*family).into())?;
            let out = polarize(&p, *source, targets, &cfg)?;
            Ok((
                true,
                json!({ "input": p.to_string(), "output": out.to_string() }),
            ))
        }
        Command::Restitute {
            n,
            m,
            family,
            poly,
            sources,
            target,
        } => {
            let cfg = guard.cfg(*n, *m)?;
            let p = parse_polynomial(poly, (*family).into())?;
            let out = restitute(&p, sources, *target, &cfg)?;
            Ok((
                true,
                json!({ "input": p.to_string(), "output": out.to_string() }),
            ))
        }
        Command::Verify { check } => match check {
            VerifyCommand::Fundamental { n } => {
                guard.check("n", *n, MAX_N)?;
                let r = verify::verify_fundamental(*n)?;
                Ok((r.zero, to_value(&r)))
            }
            VerifyCommand::Isomorphism { n, m } => {
                let r = verify::verify_isomorphism(&guard.cfg(*n, *m)?)?;
                Ok((r.passed(), to_value(&r)))
            }
            VerifyCommand::Dmap { n, m, trials, seed } => {
                let r = check_multiplicative(*trials, *seed, &guard.cfg(*n, *m)?)?;
                Ok((r.failed == 0, to_value(&r)))
            }
            VerifyCommand::Roby { n, m, max_degree } => {
                guard.check("max_degree", *max_degree as usize, 4)?;
                let r = verify::verify_roby(&guard.cfg(*n, *m)?, *max_degree)?;
                Ok((r.mismatches.is_empty(), to_value(&r)))
            }
            VerifyCommand::Reduction { n, m } => {
                let r = verify::verify_reduction(&guard.cfg(*n, *m)?)?;
                Ok((r.passed(), to_value(&r)))
            }
            VerifyCommand::Collapse { n, m } => {
                let r = verify::verify_collapse(&guard.cfg(*n, *m)?)?;
                Ok((r.mismatches.is_empty(), to_value(&r)))
            }
            VerifyCommand::Aronhold {
                n,
                max_degree,
                samples,
                seed,
            } => {
                guard.check("n", *n, MAX_N)?;
                guard.check("max_degree", *max_degree, 4)?;
                let r = verify::verify_aronhold(*n, *max_degree, *samples, *seed)?;
                Ok((r.failed == 0, to_value(&r)))
            }
        },
    }
}

/// Runs one command to a report. Never panics on domain errors.
pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let guard = Guard {
        allow_large: cli.allow_large,
    };
    let (status, payload) = match dispatch(&cli.command, &guard) {
        Ok((true, payload)) => (Status::Ok, payload),
        Ok((false, payload)) => (Status::Fail, payload),
        Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
    };
    Report {
        status,
        command: cli.command.echo(),
        payload,
        elapsed_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Parses `args` (program name first) and runs the command. Argument errors
/// come back as the clap error for the caller to render.
pub fn run_args<I, T>(args: I) -> std::result::Result<(Report, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok((run(&cli), cli.pretty))
}
