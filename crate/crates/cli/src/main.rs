use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wellmix::graph::GraphSpec;
use wellmix::ska::{AuditParams, ProtocolDescription, Verdict};
use wellmix::spectral::amplified_lambda2;
use wellmix::{Error, FieldSpec};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "wellmix", version, about = "Finite-field incidence graphs: counts, spectra, mixing, entropy and protocol audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Field characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Extension degree.
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Monic modulus coefficients, lowest degree first (e.g. 1,1,1).
    #[arg(long, global = true, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Degree bound of the polynomials.
    #[arg(long, global = true, default_value_t = 1)]
    d: u32,
    /// Private-randomness amplification bits.
    #[arg(long, global = true, default_value_t = 0)]
    m: u32,
    /// Seed for randomized subcommands (required there).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Information tolerance in bits.
    #[arg(long, global = true, default_value_t = 0.01)]
    eps: f64,
    /// Communication slack in bits.
    #[arg(long, global = true, default_value_t = 1.0)]
    delta: f64,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true, env = "WELLMIX_THREADS")]
    threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Vertex and edge counts with a degree check.
    Graph,
    /// Largest common neighborhood of two polynomials.
    Neighborhood,
    /// Eigenvalues of M M^T and the expander check.
    Spectrum {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Seeded random subset pairs checked against the mixing bound.
    MixingFuzz {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Maximum-edge induced biclique search.
    Biclique {
        #[arg(long, default_value_t = 2)]
        min_a: usize,
        #[arg(long, default_value_t = 2)]
        min_b: usize,
    },
    /// Entropies of a uniformly random edge.
    EntropyProfile,
    /// Run a protocol on every branch and audit it.
    Ska {
        /// Built-in protocol name: point_first, poly_coeffs, timeshare, leaky_key, silent.
        #[arg(long, conflicts_with = "protocol_json")]
        protocol: Option<String>,
        /// JSON description file, e.g. {"kind":"random","seed":3}.
        #[arg(long)]
        protocol_json: Option<PathBuf>,
    },
    /// Exhaustive useful/useless encoder search.
    MuchnikSearch {
        #[arg(long, default_value_t = 4)]
        max_alphabet: u32,
    },
    /// Inequality gap for fixed and seeded random functions of an edge.
    GapExplore {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Graph => "graph",
            Command::Neighborhood => "neighborhood",
            Command::Spectrum { .. } => "spectrum",
            Command::MixingFuzz { .. } => "mixing-fuzz",
            Command::Biclique { .. } => "biclique",
            Command::EntropyProfile => "entropy-profile",
            Command::Ska { .. } => "ska",
            Command::MuchnikSearch { .. } => "muchnik-search",
            Command::GapExplore { .. } => "gap-explore",
        }
    }
}

enum Failure {
    Usage(String),
    Module(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Module(e)
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// What a subcommand produced: JSON result, optional CSV body, and whether
/// every checked invariant held.
struct Outcome {
    result: Value,
    csv: Option<Vec<u8>>,
    ok: bool,
}

impl Outcome {
    fn new(result: impl Serialize, ok: bool) -> Self {
        Outcome { result: serde_json::to_value(result).expect("report serializes"), csv: None, ok }
    }

    fn with_csv(mut self, f: impl FnOnce(&mut Vec<u8>) -> wellmix::Result<()>) -> Result<Self, Failure> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        self.csv = Some(buf);
        Ok(self)
    }
}

fn require_seed(c: &Common, command: &str) -> Result<u64, Failure> {
    c.seed.ok_or_else(|| Failure::Usage(format!("{command} is randomized and needs --seed")))
}

fn build_graph(c: &Common) -> Result<GraphSpec, Failure> {
    let field: FieldSpec = wellmix::make_field(c.p, c.k, c.modulus.as_deref())?;
    Ok(GraphSpec::new(field, c.d, c.m)?)
}

fn degree_check(g: &GraphSpec) -> wellmix::Result<Option<bool>> {
    if g.num_edges() > 1 << 22 {
        return Ok(None);
    }
    let left = (0..g.num_points()).all(|x| g.point_neighbor_ids(x).map(|v| v.len() as u64) == Ok(g.left_degree()));
    let right = (0..g.num_polys()).all(|y| g.poly_neighbor_ids(y).map(|v| v.len() as u64) == Ok(g.right_degree()));
    Ok(Some(left && right))
}

fn run(command: &Command, c: &Common) -> Result<(Value, Outcome), Failure> {
    let g = build_graph(c)?;
    let base = g.base();
    let mut params = serde_json::Map::new();
    let outcome = match command {
        Command::Graph => {
            let check = degree_check(&base)?;
            let report = json!({
                "graph": g.descriptor(),
                "left_degree": g.left_degree(),
                "right_degree": g.right_degree(),
                "cluster_size": g.cluster_size().to_string(),
                "amplified_left_degree": (u128::from(g.left_degree()) * g.cluster_size()).to_string(),
                "amplified_right_degree": (u128::from(g.right_degree()) * g.cluster_size()).to_string(),
                "degree_check": check,
            });
            let out = Outcome::new(report, check != Some(false));
            if c.format == Format::Csv {
                out.with_csv(|w| base.write_edges_csv(w))?
            } else {
                out
            }
        }
        Command::Neighborhood => {
            let cn = base.common_neighborhood_max()?;
            let ok = cn.max <= u64::from(g.d());
            Outcome::new(json!({"max": cn.max, "witness": [cn.witness.0, cn.witness.1], "bound": g.d(), "ok": ok}), ok)
        }
        Command::Spectrum { tol } => {
            params.insert("tol".into(), json!(tol));
            let check = wellmix::expander_check::<f64>(&base, *tol)?;
            let amplified = amplified_lambda2(check.report.lambda2, g.m());
            let ok = check.expander_ok && check.lambda1_ok;
            let result = json!({
                "check": check,
                "amplified_lambda2": amplified,
            });
            let out = Outcome::new(result, ok);
            if c.format == Format::Csv {
                out.with_csv(|w| check.report.write_csv(w))?
            } else {
                out
            }
        }
        Command::MixingFuzz { trials } => {
            let seed = require_seed(c, command.name())?;
            params.insert("trials".into(), json!(trials));
            let lambda2 = amplified_lambda2(wellmix::expander_check::<f64>(&base, 1e-9)?.report.lambda2, g.m());
            let summary = wellmix::mixing_fuzz(&g, lambda2, *trials, seed)?;
            let ok = summary.violations == 0;
            if c.format == Format::Csv {
                let mut buf = Vec::new();
                summary.write_csv(&mut buf)?;
                Outcome { result: Value::Null, csv: Some(buf), ok }
            } else {
                Outcome::new(summary, ok)
            }
        }
        Command::Biclique { min_a, min_b } => {
            params.insert("min_a".into(), json!(min_a));
            params.insert("min_b".into(), json!(min_b));
            let found = wellmix::exhaustive_biclique_search(&g, *min_a, *min_b)?;
            let result = match &found {
                Some(b) => json!({"found": true, "a": b.a(), "b": b.b(), "witness": b}),
                None => json!({"found": false}),
            };
            Outcome::new(result, true)
        }
        Command::EntropyProfile => Outcome::new(wellmix::edge_profile(&g)?, true),
        Command::Ska { protocol, protocol_json } => {
            let description = match (protocol, protocol_json) {
                (Some(name), None) => ProtocolDescription::from_name(name)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)?;
                    serde_json::from_str(&text)
                        .map_err(|e| Failure::Usage(format!("bad protocol description: {e}")))?
                }
                _ => return Err(Failure::Usage("ska needs --protocol or --protocol-json".into())),
            };
            params.insert("protocol".into(), serde_json::to_value(description).expect("serializes"));
            let audit = wellmix::run_audit(&g, description.build().as_ref(), AuditParams { eps: c.eps, delta: c.delta })?;
            let ok = audit.verdict == Verdict::Pass && audit.triple_info_t >= -1e-10;
            Outcome::new(audit, ok)
        }
        Command::MuchnikSearch { max_alphabet } => {
            params.insert("max_alphabet".into(), json!(max_alphabet));
            Outcome::new(wellmix::muchnik_exhaustive_search(&g, *max_alphabet)?, true)
        }
        Command::GapExplore { samples } => {
            let seed = require_seed(c, command.name())?;
            params.insert("samples".into(), json!(samples));
            let report = wellmix::gap_explore(&g, *samples, seed)?;
            let fixed_ok = report.rows.iter().take(3).all(|r| r.gap.abs() < 1e-10);
            if c.format == Format::Csv {
                let mut buf = Vec::new();
                report.write_csv(&mut buf)?;
                Outcome { result: Value::Null, csv: Some(buf), ok: fixed_ok }
            } else {
                Outcome::new(report, fixed_ok)
            }
        }
    };
    let config = json!({
        "field": g.field().descriptor(),
        "d": c.d,
        "m": c.m,
        "seed": c.seed,
        "eps": c.eps,
        "delta": c.delta,
        "format": c.format,
        "params": params,
    });
    Ok((config, outcome))
}

fn emit(c: &Common, bytes: &[u8]) -> io::Result<()> {
    match &c.out {
        Some(path) => File::create(path)?.write_all(bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

fn error_record(kind: &str, message: &str, code: u8) -> ExitCode {
    let record = json!({"tool": "wellmix", "version": VERSION, "error": kind, "message": message, "exit_code": code});
    eprintln!("{record}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    if let Some(n) = c.threads {
        if n == 0 {
            return error_record("UsageError", "--threads must be positive", 2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return error_record("ThreadPool", &e.to_string(), 3);
        }
    }
    let (config, outcome) = match run(&cli.command, c) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => return error_record("UsageError", &msg, 2),
        Err(Failure::Module(e)) => return error_record(e.kind(), &e.to_string(), 3),
        Err(Failure::Io(e)) => return error_record("Io", &e.to_string(), 3),
    };
    let bytes = match (&outcome.csv, c.format) {
        (Some(csv), Format::Csv) => csv.clone(),
        _ => {
            let report = json!({
                "tool": "wellmix",
                "version": VERSION,
                "command": cli.command.name(),
                "config": config,
                "ok": outcome.ok,
                "result": outcome.result,
            });
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            text.into_bytes()
        }
    };
    if let Err(e) = emit(c, &bytes) {
        return error_record("Io", &e.to_string(), 3);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
