//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 no path
//! between the selected agents, 4 enumeration cap exceeded.

mod report;

pub use report::{
    AnalysisReport, ComplexPair, ForestEntry, ForestsReport, GraphSummary, VerificationSummary,
};

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::Error;
use crate::graph::{Arc, WeightedDigraph, DEFAULT_ENUMERATION_CAP};
use crate::netfunc::AgentModel;
use crate::verify::DEFAULT_SEED;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_PATH: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "netfunc",
    version,
    about = "Transfer functions of consensus networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full analysis of the transfer function from one agent to another.
    Analyze {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Bode data `omega,mag_db,phase_deg` on a log-spaced grid.
    Freqresp {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 0.01)]
        wmin: f64,
        #[arg(long, default_value_t = 100.0)]
        wmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Roots of `psi + k phi` over a linear grid of real gains `k`.
    Rootlocus {
        #[arg(long)]
        agent: PathBuf,
        /// Adds marker rows at the Laplacian eigenvalues.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// With --graph, adds marker rows at the zero gains of this pair.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        kmin: f64,
        #[arg(long, default_value_t = 10.0)]
        kmax: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Out-forests with `k` arcs, optionally those whose tree rooted at
    /// `root` contains `contains`.
    Forests {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, requires = "contains")]
        root: Option<usize>,
        #[arg(long, requires = "root")]
        contains: Option<usize>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Run every cross-check; exit 1 if any fails.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        agent: PathBuf,
        /// Restrict to one pair; all pairs are checked otherwise.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        cap: CapArgs,
        /// Perturb the Laplacian used by the series routes.
        #[arg(long, hide = true)]
        debug_corrupt_laplacian: bool,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub agent: PathBuf,
    #[arg(long)]
    pub from: usize,
    #[arg(long)]
    pub to: usize,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Node-count cap for forest enumeration.
    #[arg(long, env = "NETFUNC_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,
}

/// A failure carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Display) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoPath { .. } => EXIT_NO_PATH,
            Error::EnumerationCap { .. } | Error::PathCapExceeded { .. } => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(e)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    arcs: Vec<Arc>,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Parse a graph file `{"n": N, "arcs": [{"from": u, "to": v, "weight": w}]}`.
pub fn parse_graph(text: &str) -> Result<WeightedDigraph, Failure> {
    let file: GraphFile = serde_json::from_str(text).map_err(Failure::invalid)?;
    Ok(WeightedDigraph::new(file.n, &file.arcs)?)
}

/// Parse an agent file `{"plant": {"num": [..], "den": [..]}, "controller": {..}}`.
/// Coefficients are in ascending powers of `s`.
pub fn parse_agent(text: &str) -> Result<AgentModel, Failure> {
    serde_json::from_str(text).map_err(Failure::invalid)
}

pub fn load_graph(path: &Path) -> Result<WeightedDigraph, Failure> {
    parse_graph(&read(path)?).map_err(|f| Failure {
        message: format!("{}: {}", path.display(), f.message),
        ..f
    })
}

pub fn load_agent(path: &Path) -> Result<AgentModel, Failure> {
    parse_agent(&read(path)?).map_err(|f| Failure {
        message: format!("{}: {}", path.display(), f.message),
        ..f
    })
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze { pair, seed } => {
            let g = load_graph(&pair.graph)?;
            let agent = load_agent(&pair.agent)?;
            let report = AnalysisReport::build(&g, &agent, pair.from, pair.to, seed)?;
            writeln!(out, "{}", to_json(&report))?;
            Ok(EXIT_OK)
        }
        Command::Freqresp {
            pair,
            wmin,
            wmax,
            points,
        } => {
            if !(wmin > 0.0 && wmin < wmax && wmax.is_finite()) {
                return Err(Failure::invalid("need 0 < wmin < wmax"));
            }
            if points < 2 {
                return Err(Failure::invalid("need at least 2 points"));
            }
            let g = load_graph(&pair.graph)?;
            let agent = load_agent(&pair.agent)?;
            report::write_freqresp(out, &g, &agent, pair.from, pair.to, wmin, wmax, points)
        }
        Command::Rootlocus {
            agent,
            graph,
            from,
            to,
            kmin,
            kmax,
            points,
        } => {
            if !(kmin >= 0.0 && kmin < kmax && kmax.is_finite()) {
                return Err(Failure::invalid("need 0 <= kmin < kmax"));
            }
            if points < 2 {
                return Err(Failure::invalid("need at least 2 points"));
            }
            let agent = load_agent(&agent)?;
            let g = graph.as_deref().map(load_graph).transpose()?;
            let pair = from.zip(to);
            if pair.is_some() && g.is_none() {
                return Err(Failure::invalid("--from/--to need --graph"));
            }
            report::write_rootlocus(out, &agent, g.as_ref(), pair, kmin, kmax, points)?;
            Ok(EXIT_OK)
        }
        Command::Forests {
            graph,
            k,
            root,
            contains,
            cap,
        } => {
            let g = load_graph(&graph)?;
            let report = ForestsReport::build(&g, k, root.zip(contains), cap.cap)?;
            writeln!(out, "{}", to_json(&report))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            graph,
            agent,
            from,
            to,
            seed,
            cap,
            debug_corrupt_laplacian,
        } => {
            let g = load_graph(&graph)?;
            let agent = load_agent(&agent)?;
            let pairs: Vec<(usize, usize)> = match from.zip(to) {
                Some(p) => vec![p],
                None => {
                    let n = g.node_count();
                    (1..=n).flat_map(|c| (1..=n).map(move |o| (c, o))).collect()
                }
            };
            let opts = crate::verify::SuiteOptions {
                seed,
                cap: cap.cap,
                corrupt_laplacian: debug_corrupt_laplacian,
                ..Default::default()
            };
            let report = crate::verify::run_suite(&g, &agent, &pairs, opts)?;
            writeln!(out, "{}", to_json(&report))?;
            if report.pass {
                return Ok(EXIT_OK);
            }
            for (scope, check) in report.failures() {
                writeln!(err, "FAIL {scope} {}", check.name)?;
            }
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}
