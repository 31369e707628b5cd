//! Command-line front end. Every run prints one JSON document on stdout;
//! the exit code is 0 on success, 1 on domain errors and 2 on parse errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::closure::ClosureOp;
use crate::digraph::Digraph;
use crate::error::Error;
use crate::netcode::{self, DecodeMode, NetworkInstance};
use crate::reduce;
use crate::set::VertexSet;
use crate::solvegraph::{self, LogRatio};

#[derive(Parser, Debug)]
#[command(
    name = "netclosure",
    version,
    about = "Closure operators, guessing numbers and network coding solvability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel table builds.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write the result (the converted file, for `convert`) to this path.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closure table, or the closure of one set with `--set`.
    Closure {
        input: PathBuf,
        /// Comma-separated vertices, e.g. `0,2`.
        #[arg(long)]
        set: Option<String>,
    },
    /// Rank, and for digraphs a minimum feedback vertex set.
    Rank { input: PathBuf },
    /// Remove the useless part of a strongly connected digraph.
    Reduce { input: PathBuf },
    /// Guessing number over an alphabet of size q.
    Guess {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Decide solvability of a closure, digraph or network.
    Solve {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Write the coding function certificate in text format.
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
        /// Require sinks to output the message itself rather than a relabelling.
        #[arg(long)]
        exact_decoding: bool,
    },
    /// Convert between formats.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Closure)]
        to: Format,
    },
    /// Verify the closure axioms and derived properties.
    CheckAxioms { input: PathBuf },
    /// Compare union solvability graphs with graph products.
    ProductCheck {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Code-size bounds on the guessing number.
    Bounds {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Digraph,
    Closure,
}

/// A parsed input file.
enum Input {
    Digraph(Digraph),
    Closure(ClosureOp),
    Network(NetworkInstance),
}

enum Failure {
    Domain(Error),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::TooLarge { .. } => "too_large",
        Error::VertexOutOfRange { .. } => "vertex_out_of_range",
        Error::Parse { .. } => "parse",
        Error::GroundSetMismatch { .. } => "ground_set_mismatch",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::NotSeparable { .. } => "not_separable",
        Error::AdjacentWords { .. } => "adjacent_words",
        Error::NotStronglyConnected => "not_strongly_connected",
        Error::InvalidNetwork { .. } => "invalid_network",
    }
}

fn error_json(kind: &str, message: &str, rule: Option<&str>) -> Value {
    let mut err = json!({ "kind": kind, "message": message });
    if let Some(rule) = rule {
        err["rule"] = json!(rule);
    }
    json!({ "error": err })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON serializes")
}

/// Runs the command line `args` (program name first) and returns the exit
/// code with the JSON document to print.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, pretty(&json!({ "help": e.to_string() })));
            }
            return (2, pretty(&error_json("usage", e.to_string().trim_end(), None)));
        }
    };
    let outcome = match cli.jobs {
        Some(0) => Err(Failure::Domain(Error::InvalidArgument(
            "--jobs must be at least 1".into(),
        ))),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Domain(Error::InvalidArgument(e.to_string()))),
        },
        None => dispatch(&cli),
    };
    let (code, value) = match outcome {
        Ok(v) => (0, v),
        Err(Failure::Parse(msg)) => (2, error_json("parse", &msg, None)),
        Err(Failure::Domain(e)) => {
            let rule = match &e {
                Error::InvalidNetwork { rule, .. } => Some(*rule),
                _ => None,
            };
            (1, error_json(error_kind(&e), &e.to_string(), rule))
        }
    };
    let text = pretty(&value);
    if code == 0 {
        if let (Some(path), false) = (&cli.output, matches!(cli.command, Command::Convert { .. })) {
            if let Err(e) = fs::write(path, format!("{text}\n")) {
                return (1, pretty(&error_json("io", &format!("{}: {e}", path.display()), None)));
            }
        }
    }
    (code, text)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Domain(Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))))
}

fn load(path: &Path) -> std::result::Result<Input, Failure> {
    let text = read(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with('{') {
        return Ok(Input::Network(NetworkInstance::from_json(&text)?));
    }
    match first.split_whitespace().next() {
        Some("digraph") => Ok(Input::Digraph(text.parse()?)),
        Some("closure") => Ok(Input::Closure(text.parse()?)),
        _ => Err(Failure::Parse(format!(
            "{}: expected a `digraph` or `closure` header or a network JSON object",
            path.display()
        ))),
    }
}

fn closure_of(input: Input) -> std::result::Result<(ClosureOp, Option<Digraph>), Failure> {
    match input {
        Input::Closure(cl) => Ok((cl, None)),
        Input::Digraph(d) => Ok((ClosureOp::from_digraph(&d)?, Some(d))),
        Input::Network(net) => {
            let d = net.to_guessing_digraph()?;
            Ok((ClosureOp::from_digraph(&d)?, Some(d)))
        }
    }
}

fn digraph_of(input: Input) -> std::result::Result<Digraph, Failure> {
    match input {
        Input::Digraph(d) => Ok(d),
        Input::Network(net) => Ok(net.to_guessing_digraph()?),
        Input::Closure(_) => Err(Failure::Domain(Error::InvalidArgument(
            "this verb needs a digraph or network input".into(),
        ))),
    }
}

fn parse_set(text: &str, n: usize) -> std::result::Result<VertexSet, Failure> {
    let mut set = VertexSet::EMPTY;
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| Failure::Parse(format!("bad vertex `{tok}` in --set")))?;
        if v >= n {
            return Err(Failure::Domain(Error::VertexOutOfRange { vertex: v, n }));
        }
        set.insert(v);
    }
    Ok(set)
}

fn log_json(l: LogRatio) -> Value {
    json!(l.label())
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Closure { input, set } => {
            let (cl, _) = closure_of(load(input)?)?;
            match set {
                Some(s) => {
                    let x = parse_set(s, cl.n())?;
                    Ok(json!({ "n": cl.n(), "set": x.to_vec(), "closure": cl.apply(x).to_vec() }))
                }
                None => Ok(json!({
                    "n": cl.n(),
                    "rank": cl.rank(),
                    "table": cl.table().iter().map(|c| c.to_vec()).collect::<Vec<_>>(),
                })),
            }
        }
        Command::Rank { input } => match load(input)? {
            Input::Closure(cl) => Ok(json!({ "n": cl.n(), "rank": cl.rank(), "basis": cl.basis().to_vec() })),
            other => {
                let d = digraph_of(other)?;
                Ok(json!({
                    "n": d.n(),
                    "rank": d.rank(),
                    "mias": d.mias(),
                    "feedback_vertex_set": d.min_feedback_vertex_set().to_vec(),
                }))
            }
        },
        Command::Reduce { input } => {
            let d = digraph_of(load(input)?)?;
            let red = reduce::remove_useless_part(&d)?;
            Ok(json!({
                "removed": red.trace.removed,
                "steps": red.trace.steps,
                "kept": red.kept.to_vec(),
                "digraph": red.digraph.to_text(),
            }))
        }
        Command::Guess { input, q } => {
            let (cl, _) = closure_of(load(input)?)?;
            let a = solvegraph::alpha(&cl, *q)?;
            let rank = cl.rank();
            Ok(json!({
                "alpha": a.alpha,
                "rank": rank,
                "q": q,
                "solvable": a.alpha == q.pow(rank as u32),
                "guessing_number": log_json(LogRatio { value: a.alpha, base: *q }),
                "witness_words": a.words(),
            }))
        }
        Command::Solve {
            input,
            q,
            emit_certificate,
            exact_decoding,
        } => {
            let (mut out, cert) = match load(input)? {
                Input::Network(net) => {
                    let sol = netcode::solve_network(&net, *q)?;
                    let mode = if *exact_decoding {
                        DecodeMode::Exact
                    } else {
                        DecodeMode::Permutation
                    };
                    let verified = sol
                        .coding_function()
                        .map(|f| netcode::verify_network_solution(&net, f, *q, mode));
                    let mut out = match &sol.solvability {
                        Some(s) => s.certificate_json(),
                        None => json!({ "alpha": Value::Null, "rank": sol.rank, "q": q, "solvable": false,
                                        "witness_words": [], "coding_function": Value::Null }),
                    };
                    out["r"] = json!(sol.r);
                    out["obstruction"] = json!(sol.obstruction);
                    out["verified"] = json!(verified);
                    out["digraph"] = json!(sol.digraph.to_text());
                    (out, sol.coding_function().cloned())
                }
                other => {
                    let (cl, _) = closure_of(other)?;
                    let s = solvegraph::is_solvable(&cl, *q)?;
                    (s.certificate_json(), s.coding_function)
                }
            };
            if let (Some(path), Some(f)) = (emit_certificate, &cert) {
                fs::write(path, f.to_text()).map_err(|e| {
                    Failure::Domain(Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
                })?;
                out["certificate_path"] = json!(path.display().to_string());
            }
            Ok(out)
        }
        Command::Convert { input, to } => {
            let (from, text) = match (load(input)?, to) {
                (Input::Network(net), Format::Digraph) => ("network", net.to_guessing_digraph()?.to_text()),
                (Input::Digraph(d), Format::Digraph) => ("digraph", d.to_text()),
                (Input::Closure(_), Format::Digraph) => {
                    return Err(Failure::Domain(Error::InvalidArgument(
                        "a closure operator has no digraph form".into(),
                    )))
                }
                (other, Format::Closure) => {
                    let from = match other {
                        Input::Network(_) => "network",
                        Input::Digraph(_) => "digraph",
                        Input::Closure(_) => "closure",
                    };
                    (from, closure_of(other)?.0.to_text())
                }
            };
            if let Some(path) = &cli.output {
                fs::write(path, &text).map_err(|e| {
                    Failure::Domain(Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
                })?;
            }
            let to = match to {
                Format::Digraph => "digraph",
                Format::Closure => "closure",
            };
            Ok(json!({ "from": from, "to": to, "text": text }))
        }
        Command::CheckAxioms { input } => {
            let (cl, _) = closure_of(load(input)?)?;
            let report = cl.verify_axioms();
            let derived = if report.is_valid() && cl.n() <= 12 {
                let v = cl.derived_property_violations()?;
                json!(v
                    .iter()
                    .map(|(p, x, y)| json!({ "property": p, "x": x.to_vec(), "y": y.to_vec() }))
                    .collect::<Vec<_>>())
            } else {
                Value::Null
            };
            Ok(json!({
                "n": cl.n(),
                "valid": report.is_valid(),
                "violations": report.violations,
                "derived_violations": derived,
                "matroid": report.is_valid() && cl.is_matroid(),
            }))
        }
        Command::ProductCheck { left, right, q } => {
            let (cl1, _) = closure_of(load(left)?)?;
            let (cl2, _) = closure_of(load(right)?)?;
            let check = solvegraph::product_check(&cl1, &cl2, *q)?;
            let mut out = json!(check);
            out["all_hold"] = json!(check.all_hold());
            Ok(out)
        }
        Command::Bounds { input, q } => {
            let (cl, _) = closure_of(load(input)?)?;
            let n = cl.n();
            let delta = cl.min_degree();
            let gamma = cl.closure_girth();
            let lower = solvegraph::max_code(n, n + 1 - delta, *q)?;
            let upper = solvegraph::max_code(n, gamma, *q)?;
            let alpha = solvegraph::alpha(&cl, *q)?.alpha;
            Ok(json!({
                "n": n,
                "q": q,
                "min_degree": delta,
                "closure_girth": gamma,
                "lower_code_size": lower,
                "upper_code_size": upper,
                "alpha": alpha,
                "guessing_number": log_json(LogRatio { value: alpha, base: *q }),
                "holds": lower <= alpha && alpha <= upper,
            }))
        }
    }
}
