//! Command implementations for the `tropinv` binary.
//!
//! [`run`] returns the text destined for stdout together with the process
//! exit code, so the commands can be exercised without spawning a process.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;
use tropinv::{
    check_consistency, export_dot, parse_override, phi_iterate, pi_sequence, sweep_parameter,
    synthesize_trajectory, ConsistencyVerdict, Execution, ExtendedScalar, MaxPlusError, PhiClass,
    PhiReport, ProblemError, ProblemFile, PtegSystem, TropicalMatrix,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_OPEN: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "tropinv",
    version,
    about = "Consistency and controlled invariance for max-plus systems with time windows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide consistency and probe weak consistency.
    Check {
        #[command(flatten)]
        common: Common,
        /// Print Π₀ … Π_{n²+1} (or up to the first divergent index).
        #[arg(long)]
        emit_pi: bool,
    },
    /// Iterate φ and report the maximal controlled invariant set.
    Invariant {
        #[command(flatten)]
        common: Common,
        /// Print every computed S_{k+2}.
        #[arg(long)]
        emit_s: bool,
        /// Analyze once per value: `name=v1,v2,...`.
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
        /// Run sweeps on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Synthesize a K-step trajectory.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, short = 'K')]
        horizon: usize,
        /// Comma-separated seed vector of length n, repeated in every block.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        seed: Option<Vec<String>>,
    },
    /// Render the precedence graph of M_[K] in DOT format.
    Graph {
        #[command(flatten)]
        common: Common,
        #[arg(long, short = 'K')]
        horizon: usize,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem file (JSON).
    pub file: PathBuf,
    /// Parameter override `name=value`; may be repeated.
    #[arg(long = "param", short = 'p', allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// Indices probed before weak consistency is reported as open.
    #[arg(long, env = "TROPINV_PROBE_BOUND")]
    pub probe_bound: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Dot,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    System(#[from] MaxPlusError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub text: String,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Check { common, emit_pi } => {
            let format = text_format(common.format)?;
            let (_, sys) = load(common)?;
            Ok(check(&sys, common.probe_bound, *emit_pi, format))
        }
        Command::Invariant {
            common,
            emit_s,
            sweep,
            sequential,
        } => {
            let format = text_format(common.format)?;
            let (file, sys) = load(common)?;
            match sweep {
                Some(spec) => {
                    let exec = if *sequential {
                        Execution::Sequential
                    } else {
                        Execution::Parallel
                    };
                    sweep_cmd(
                        &file,
                        &overrides(common)?,
                        spec,
                        common.probe_bound,
                        exec,
                        format,
                    )
                }
                None => Ok(invariant(&sys, common.probe_bound, *emit_s, format)),
            }
        }
        Command::Trajectory {
            common,
            horizon,
            seed,
        } => {
            let format = text_format(common.format)?;
            let (_, sys) = load(common)?;
            let seed = seed
                .as_ref()
                .map(|s| {
                    s.iter()
                        .map(|v| v.trim().parse::<ExtendedScalar>())
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()
                .map_err(|e| CliError::Usage(format!("--seed: {e}")))?;
            trajectory(&sys, *horizon, seed.as_deref(), format)
        }
        Command::Graph { common, horizon } => {
            if matches!(common.format, Some(Format::Json)) {
                return Err(CliError::Usage("graph only supports --format dot".into()));
            }
            let (_, sys) = load(common)?;
            Ok(Output {
                code: EXIT_OK,
                text: export_dot(&sys.block_spec(), *horizon)?,
            })
        }
    }
}

fn text_format(format: Option<Format>) -> Result<Format, CliError> {
    match format {
        Some(Format::Dot) => Err(CliError::Usage(
            "--format dot is only valid for graph".into(),
        )),
        Some(f) => Ok(f),
        None => Ok(Format::Human),
    }
}

fn overrides(common: &Common) -> Result<Vec<(String, String)>, CliError> {
    Ok(common
        .params
        .iter()
        .map(|p| parse_override(p))
        .collect::<Result<_, _>>()?)
}

fn load(common: &Common) -> Result<(ProblemFile, PtegSystem), CliError> {
    let text = std::fs::read_to_string(&common.file).map_err(|source| CliError::Io {
        path: common.file.clone(),
        source,
    })?;
    let file = ProblemFile::from_json(&text)?;
    let sys = file.resolve(&overrides(common)?)?;
    Ok((file, sys))
}

fn matrix_json(m: &TropicalMatrix) -> Value {
    json!(m.to_string_rows())
}

fn indent(m: &TropicalMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn verdict_code(v: &ConsistencyVerdict) -> u8 {
    match v {
        ConsistencyVerdict::Consistent { .. } => EXIT_OK,
        ConsistencyVerdict::NotWeaklyConsistent { .. } => EXIT_NEGATIVE,
        ConsistencyVerdict::NotConsistentWeakOpen { .. } => EXIT_OPEN,
    }
}

fn phi_code(c: PhiClass) -> u8 {
    match c {
        PhiClass::ConvergedNonEmpty => EXIT_OK,
        PhiClass::RealEmptyAtStep => EXIT_NEGATIVE,
        PhiClass::NonConvergentWeakOpen => EXIT_OPEN,
    }
}

fn verdict_line(v: &ConsistencyVerdict, n2: usize) -> String {
    match v {
        ConsistencyVerdict::Consistent { .. } => {
            format!("consistent: Pi_{n2} = Pi_{}", n2 + 1)
        }
        ConsistencyVerdict::NotConsistentWeakOpen { verified_up_to } => format!(
            "not consistent: Pi_{n2} != Pi_{}; weak consistency open: Pi_0 .. Pi_{verified_up_to} are finite",
            n2 + 1
        ),
        ConsistencyVerdict::NotWeaklyConsistent { first_divergent_k } => {
            format!("not weakly consistent: Pi_{first_divergent_k} has a +inf entry")
        }
    }
}

fn verdict_json(v: &ConsistencyVerdict) -> Value {
    let mut obj = json!({ "verdict": v.name() });
    match v {
        ConsistencyVerdict::Consistent { pi_fixed } => obj["pi_fixed"] = matrix_json(pi_fixed),
        ConsistencyVerdict::NotConsistentWeakOpen { verified_up_to } => {
            obj["verified_up_to"] = json!(verified_up_to)
        }
        ConsistencyVerdict::NotWeaklyConsistent { first_divergent_k } => {
            obj["first_divergent_k"] = json!(first_divergent_k)
        }
    }
    obj
}

fn check(sys: &PtegSystem, bound: Option<usize>, emit_pi: bool, format: Format) -> Output {
    let n2 = sys.dim() * sys.dim();
    let verdict = check_consistency(sys, bound);
    let pis = if emit_pi {
        let last = match verdict {
            ConsistencyVerdict::NotWeaklyConsistent { first_divergent_k } => first_divergent_k,
            _ => n2 + 1,
        };
        pi_sequence(sys, last)
    } else {
        Vec::new()
    };
    let text = match format {
        Format::Json => {
            let mut obj = verdict_json(&verdict);
            obj["n"] = json!(sys.dim());
            obj["probe_bound"] = json!(sys.effective_probe_bound(bound));
            if emit_pi {
                obj["pi"] = Value::Array(pis.iter().map(matrix_json).collect());
            }
            format!("{obj:#}\n")
        }
        _ => {
            let mut out = format!("{}\n{}\n", verdict.name(), verdict_line(&verdict, n2));
            if let ConsistencyVerdict::Consistent { pi_fixed } = &verdict {
                out.push_str("Pi_inf =\n");
                out.push_str(&indent(pi_fixed));
            }
            for (k, pi) in pis.iter().enumerate() {
                let _ = writeln!(out, "Pi_{k} =");
                out.push_str(&indent(pi));
            }
            out
        }
    };
    Output {
        code: verdict_code(&verdict),
        text,
    }
}

fn phi_line(report: &PhiReport) -> String {
    match report.classification {
        PhiClass::ConvergedNonEmpty => format!("converged after {} step(s)", report.step),
        PhiClass::RealEmptyAtStep => format!("empty at step {}", report.step),
        PhiClass::NonConvergentWeakOpen => format!("no convergence up to step {}", report.step),
    }
}

fn phi_json(report: &PhiReport, emit_s: bool) -> Value {
    let mut obj = json!({
        "classification": report.classification.name(),
        "step": report.step,
    });
    if let Some(g) = &report.kstar_generator {
        obj["generator"] = matrix_json(g);
    }
    if emit_s {
        obj["s"] = Value::Array(report.s_matrices.iter().map(matrix_json).collect());
    }
    obj
}

fn invariant(sys: &PtegSystem, bound: Option<usize>, emit_s: bool, format: Format) -> Output {
    let report = phi_iterate(sys, bound);
    let text = match format {
        Format::Json => format!("{:#}\n", phi_json(&report, emit_s)),
        _ => {
            let mut out = format!(
                "{} {}\n{}\n",
                report.classification.name(),
                report.step,
                phi_line(&report)
            );
            if let Some(g) = &report.kstar_generator {
                out.push_str("generator =\n");
                out.push_str(&indent(g));
            }
            if emit_s {
                for (k, s) in report.s_matrices.iter().enumerate() {
                    let _ = writeln!(out, "S_{} =", k + 2);
                    out.push_str(&indent(s));
                }
            }
            out
        }
    };
    Output {
        code: phi_code(report.classification),
        text,
    }
}

fn sweep_cmd(
    file: &ProblemFile,
    overrides: &[(String, String)],
    spec: &str,
    bound: Option<usize>,
    exec: Execution,
    format: Format,
) -> Result<Output, CliError> {
    let (name, list) = spec
        .split_once('=')
        .filter(|(name, list)| !name.trim().is_empty() && !list.trim().is_empty())
        .ok_or_else(|| {
            CliError::Usage(format!("--sweep {spec:?} must look like name=v1,v2,..."))
        })?;
    let values: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
    let points = sweep_parameter(file, overrides, name.trim(), &values, bound, exec);
    let mut code = EXIT_OK;
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = points
                .iter()
                .map(|p| match &p.outcome {
                    Ok(a) => json!({
                        "value": p.value,
                        "consistency": verdict_json(&a.verdict),
                        "invariance": phi_json(&a.phi, false),
                    }),
                    Err(e) => {
                        code = EXIT_USAGE;
                        json!({ "value": p.value, "error": e.to_string() })
                    }
                })
                .collect();
            format!("{:#}\n", Value::Array(items))
        }
        _ => {
            let mut out = String::new();
            for p in &points {
                let _ = match &p.outcome {
                    Ok(a) => writeln!(
                        out,
                        "{} = {}: {}, {} ({})",
                        name.trim(),
                        p.value,
                        a.verdict.name(),
                        a.phi.classification.name(),
                        phi_line(&a.phi)
                    ),
                    Err(e) => {
                        code = EXIT_USAGE;
                        writeln!(out, "{} = {}: error: {e}", name.trim(), p.value)
                    }
                };
            }
            out
        }
    };
    Ok(Output { code, text })
}

fn trajectory(
    sys: &PtegSystem,
    horizon: usize,
    seed: Option<&[ExtendedScalar]>,
    format: Format,
) -> Result<Output, CliError> {
    let t = match synthesize_trajectory(sys, horizon, seed) {
        Ok(t) => t,
        Err(e @ MaxPlusError::InfeasibleHorizon { .. }) => {
            let text = match format {
                Format::Json => format!(
                    "{:#}\n",
                    json!({ "feasible": false, "reason": e.to_string() })
                ),
                _ => format!("infeasible: {e}\n"),
            };
            return Ok(Output {
                code: EXIT_INFEASIBLE,
                text,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let show = |v: &Vec<_>| -> Vec<String> {
        v.iter()
            .cloned()
            .map(|x| ExtendedScalar::Finite(x).to_string())
            .collect()
    };
    let text = match format {
        Format::Json => {
            let states: Vec<Vec<String>> = t.states.iter().map(show).collect();
            let inputs: Vec<Vec<String>> = t.inputs.iter().map(show).collect();
            format!(
                "{:#}\n",
                json!({ "feasible": true, "horizon": t.horizon, "states": states, "inputs": inputs })
            )
        }
        _ => {
            let mut out = String::new();
            for (k, x) in t.states.iter().enumerate() {
                let _ = write!(out, "x({}) = ({})", k + 1, show(x).join(", "));
                match t.inputs.get(k) {
                    Some(u) => {
                        let _ = writeln!(out, "    u({}) = ({})", k + 1, show(u).join(", "));
                    }
                    None => out.push('\n'),
                }
            }
            out
        }
    };
    Ok(Output {
        code: EXIT_OK,
        text,
    })
}
