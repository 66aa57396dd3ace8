//! Batch front end: network documents, pipelines and the `decospan` command.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{csv_export, dot_export, Circuit, Circuits};
use crate::cospan::Cospan;
use crate::decoration::{
    self, dcompose, diagnose_decorated_map, dtensor, DecoratedCospan, DecoratedMap, Decoration,
};
use crate::dynam::{euler_integrate, parse_rational, trajectory_csv, OpenSystem, VectorFields};
use crate::finset::{FinFunction, FinSet};
use crate::laws::{render_text, run_suite, Backends, CaseGenerator};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{what}: {reason}")]
    Parse { what: String, reason: String },
    #[error("{what}: {reason}")]
    InvalidNetwork { what: String, reason: String },
    #[error(
        "{position}: right foot of size {left} cannot be composed with left foot of size {right}"
    )]
    FootMismatch {
        position: String,
        left: usize,
        right: usize,
    },
    #[error("{position}: expected a {expected} network, found {found}")]
    BackendMismatch {
        position: String,
        expected: String,
        found: String,
    },
    #[error("{position}: no network named {name:?}")]
    UnknownNetwork { position: String, name: String },
    #[error("{what}: {reason}")]
    InvalidMap { what: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "E_IO",
            CliError::Parse { .. } => "E_PARSE",
            CliError::InvalidNetwork { .. } => "E_INVALID_NETWORK",
            CliError::FootMismatch { .. } => "E_FOOT_MISMATCH",
            CliError::BackendMismatch { .. } => "E_BACKEND_MISMATCH",
            CliError::UnknownNetwork { .. } => "E_UNKNOWN_NETWORK",
            CliError::InvalidMap { .. } => "E_INVALID_MAP",
            CliError::Unsupported(_) => "E_UNSUPPORTED",
            CliError::Compute(_) => "E_COMPUTE",
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// One network per file: explicit integer tables over skeletal finite sets,
/// plus the backend's decoration payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub backend: String,
    pub left_foot: usize,
    pub right_foot: usize,
    pub apex: usize,
    pub in_leg: Vec<usize>,
    pub out_leg: Vec<usize>,
    pub decoration: serde_json::Value,
}

impl NetworkDocument {
    pub fn parse(text: &str, what: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            what: what.to_owned(),
            reason: e.to_string(),
        })
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

/// A loaded, validated network of either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Circuit(Circuit),
    VectField(OpenSystem),
}

fn decode<D: Decoration>(
    backend: &D,
    doc: &NetworkDocument,
    what: &str,
) -> Result<DecoratedCospan<D::Value>, CliError> {
    let invalid = |reason: String| CliError::InvalidNetwork {
        what: what.to_owned(),
        reason,
    };
    if doc.in_leg.len() != doc.left_foot {
        return Err(invalid(format!(
            "in_leg has {} entries but left_foot is {}",
            doc.in_leg.len(),
            doc.left_foot
        )));
    }
    if doc.out_leg.len() != doc.right_foot {
        return Err(invalid(format!(
            "out_leg has {} entries but right_foot is {}",
            doc.out_leg.len(),
            doc.right_foot
        )));
    }
    let cospan = Cospan::from_tables(doc.apex, &doc.in_leg, &doc.out_leg)
        .map_err(|e| invalid(e.to_string()))?;
    let decoration = backend
        .from_json(&doc.decoration, FinSet::new(doc.apex))
        .map_err(|e| invalid(e.to_string()))?;
    DecoratedCospan::new(backend, cospan, decoration).map_err(|e| invalid(e.to_string()))
}

fn encode<D: Decoration>(backend: &D, m: &DecoratedCospan<D::Value>) -> NetworkDocument {
    let c = m.cospan();
    NetworkDocument {
        backend: backend.name().to_owned(),
        left_foot: c.left_foot().size(),
        right_foot: c.right_foot().size(),
        apex: c.apex().size(),
        in_leg: c.in_leg().table().to_vec(),
        out_leg: c.out_leg().table().to_vec(),
        decoration: backend.to_json(m.decoration()),
    }
}

fn computed<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Compute(e.to_string()))
}

impl Network {
    pub fn from_document(doc: &NetworkDocument, what: &str) -> Result<Self, CliError> {
        match doc.backend.as_str() {
            "circuit" => Ok(Network::Circuit(decode(&Circuits, doc, what)?)),
            "vectfield" => Ok(Network::VectField(decode(&VectorFields, doc, what)?)),
            other => Err(CliError::InvalidNetwork {
                what: what.to_owned(),
                reason: format!("unknown backend {other:?}; expected \"circuit\" or \"vectfield\""),
            }),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let what = path.display().to_string();
        Network::from_document(&NetworkDocument::parse(&read(path)?, &what)?, &what)
    }

    pub fn to_document(&self) -> NetworkDocument {
        match self {
            Network::Circuit(m) => encode(&Circuits, m),
            Network::VectField(m) => encode(&VectorFields, m),
        }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            Network::Circuit(_) => Circuits.name(),
            Network::VectField(_) => VectorFields.name(),
        }
    }

    pub fn cospan(&self) -> &Cospan {
        match self {
            Network::Circuit(m) => m.cospan(),
            Network::VectField(m) => m.cospan(),
        }
    }

    /// Horizontal composite `self ⊙ next`.
    pub fn compose(&self, next: &Network) -> Result<Network, CliError> {
        match (self, next) {
            (Network::Circuit(a), Network::Circuit(b)) => {
                Ok(Network::Circuit(computed(dcompose(&Circuits, a, b))?))
            }
            (Network::VectField(a), Network::VectField(b)) => {
                Ok(Network::VectField(computed(dcompose(&VectorFields, a, b))?))
            }
            _ => Err(self.mismatch(next, "compose")),
        }
    }

    pub fn tensor(&self, other: &Network) -> Result<Network, CliError> {
        match (self, other) {
            (Network::Circuit(a), Network::Circuit(b)) => {
                Ok(Network::Circuit(dtensor(&Circuits, a, b)))
            }
            (Network::VectField(a), Network::VectField(b)) => {
                Ok(Network::VectField(dtensor(&VectorFields, a, b)))
            }
            _ => Err(self.mismatch(other, "tensor")),
        }
    }

    /// Relabels apex nodes by first appearance along the legs.
    pub fn normalize(&self) -> Result<Network, CliError> {
        Ok(match self {
            Network::Circuit(m) => Network::Circuit(computed(decoration::normalize(&Circuits, m))?),
            Network::VectField(m) => {
                Network::VectField(computed(decoration::normalize(&VectorFields, m))?)
            }
        })
    }

    fn mismatch(&self, other: &Network, position: &str) -> CliError {
        CliError::BackendMismatch {
            position: position.to_owned(),
            expected: self.backend().to_owned(),
            found: other.backend().to_owned(),
        }
    }
}

/// Pipeline expression: a network name, or an n-ary compose or tensor.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Name(String),
    Compose(ComposeExpr),
    Tensor(TensorExpr),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeExpr {
    pub compose: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorExpr {
    pub tensor: Vec<Expr>,
}

/// A network given by a path (relative to the pipeline file) or inline.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NetworkSource {
    Path(String),
    Inline(NetworkDocument),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineDocument {
    pub networks: BTreeMap<String, NetworkSource>,
    pub expr: Expr,
}

struct Typed {
    backend: &'static str,
    left: usize,
    right: usize,
}

fn type_check(
    expr: &Expr,
    nets: &BTreeMap<String, Network>,
    position: &str,
) -> Result<Typed, CliError> {
    let parts = match expr {
        Expr::Name(name) => {
            let net = nets.get(name).ok_or_else(|| CliError::UnknownNetwork {
                position: position.to_owned(),
                name: name.clone(),
            })?;
            let c = net.cospan();
            return Ok(Typed {
                backend: net.backend(),
                left: c.left_foot().size(),
                right: c.right_foot().size(),
            });
        }
        Expr::Compose(e) => ("compose", &e.compose),
        Expr::Tensor(e) => ("tensor", &e.tensor),
    };
    let (op, args) = parts;
    if args.is_empty() {
        return Err(CliError::Parse {
            what: position.to_owned(),
            reason: format!("{op} needs at least one operand"),
        });
    }
    let mut acc: Option<Typed> = None;
    for (k, arg) in args.iter().enumerate() {
        let here = format!("{position}.{op}[{k}]");
        let t = type_check(arg, nets, &here)?;
        acc = Some(match acc {
            None => t,
            Some(prev) => {
                if prev.backend != t.backend {
                    return Err(CliError::BackendMismatch {
                        position: here,
                        expected: prev.backend.to_owned(),
                        found: t.backend.to_owned(),
                    });
                }
                if op == "compose" {
                    if prev.right != t.left {
                        return Err(CliError::FootMismatch {
                            position: here,
                            left: prev.right,
                            right: t.left,
                        });
                    }
                    Typed {
                        backend: t.backend,
                        left: prev.left,
                        right: t.right,
                    }
                } else {
                    Typed {
                        backend: t.backend,
                        left: prev.left + t.left,
                        right: prev.right + t.right,
                    }
                }
            }
        });
    }
    Ok(acc.expect("nonempty operands"))
}

fn evaluate_expr(expr: &Expr, nets: &BTreeMap<String, Network>) -> Result<Network, CliError> {
    let (args, compose) = match expr {
        Expr::Name(name) => return Ok(nets[name].clone()),
        Expr::Compose(e) => (&e.compose, true),
        Expr::Tensor(e) => (&e.tensor, false),
    };
    let mut acc = evaluate_expr(&args[0], nets)?;
    for arg in &args[1..] {
        let next = evaluate_expr(arg, nets)?;
        acc = if compose {
            acc.compose(&next)?
        } else {
            acc.tensor(&next)?
        };
    }
    Ok(acc)
}

impl PipelineDocument {
    pub fn parse(text: &str, what: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            what: what.to_owned(),
            reason: e.to_string(),
        })
    }

    /// Loads every network, type-checks the whole expression, then evaluates
    /// it. Compositions and tensors associate to the left.
    pub fn evaluate(&self, base: &Path) -> Result<Network, CliError> {
        let mut nets = BTreeMap::new();
        for (name, source) in &self.networks {
            let net = match source {
                NetworkSource::Path(p) => Network::load(&base.join(p))?,
                NetworkSource::Inline(doc) => {
                    Network::from_document(doc, &format!("networks.{name}"))?
                }
            };
            nets.insert(name.clone(), net);
        }
        type_check(&self.expr, &nets, "expr")?;
        evaluate_expr(&self.expr, &nets)
    }
}

/// Apex map of a claimed globular 2-morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub apex_map: Vec<usize>,
}

/// Outcome of `check`: `Ok(())` if the map is a decorated 2-morphism, or the
/// diagnostic explaining why not.
pub fn check_networks(
    source: &Network,
    target: &Network,
    map: &MapDocument,
) -> Result<Result<(), String>, CliError> {
    let (s, t) = (source.cospan(), target.cospan());
    if map.apex_map.len() != s.apex().size() {
        return Err(CliError::InvalidMap {
            what: "apex_map".into(),
            reason: format!(
                "has {} entries but the source apex has {}",
                map.apex_map.len(),
                s.apex().size()
            ),
        });
    }
    let apex_map =
        FinFunction::new(t.apex(), map.apex_map.clone()).map_err(|e| CliError::InvalidMap {
            what: "apex_map".into(),
            reason: e.to_string(),
        })?;
    let h = DecoratedMap { apex_map };
    let verdict = match (source, target) {
        (Network::Circuit(a), Network::Circuit(b)) => diagnose_decorated_map(&Circuits, &h, a, b),
        (Network::VectField(a), Network::VectField(b)) => {
            diagnose_decorated_map(&VectorFields, &h, a, b)
        }
        _ => return Err(source.mismatch(target, "target")),
    };
    Ok(verdict.map_err(|d| d.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Circuit,
    Vectfield,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "decospan",
    version,
    about = "Compose, verify and export decorated cospan networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a pipeline of compositions and tensors
    Compose {
        pipeline: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Relabel apex nodes canonically before writing
        #[arg(long)]
        normalize: bool,
    },
    /// Tensor the given networks left to right
    Tensor {
        #[arg(required = true)]
        networks: Vec<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long)]
        normalize: bool,
    },
    /// Check that an apex map is a 2-morphism of decorated cospans
    Check {
        source: PathBuf,
        target: PathBuf,
        map: PathBuf,
    },
    /// Run the law suite
    Laws {
        #[arg(long, default_value_t = CaseGenerator::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, value_enum, default_value_t = BackendChoice::All)]
        backend: BackendChoice,
        /// Directory for laws.txt and laws.json
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Export a network as Graphviz DOT or an edge CSV
    Export {
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Euler-integrate the vector field of an open dynamical system
    Simulate {
        network: PathBuf,
        /// Comma-separated start point, one rational per apex node
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        step: String,
        #[arg(long)]
        steps: usize,
        /// Print floating-point approximations instead of exact rationals
        #[arg(long)]
        float: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text),
        None => out.write_all(text.as_bytes()),
    }
    .map_err(|source| CliError::Io {
        path: output.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

fn emit_network(
    net: Network,
    normalize: bool,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let net = if normalize { net.normalize()? } else { net };
    emit(&net.to_document().to_canonical(), output, out)
}

/// Runs one command, writing results to `out` (or `--output`) and
/// diagnostics to `err`. Returns the exit status for check and law outcomes;
/// invalid input is an `Err`, which maps to [`EXIT_INVALID`].
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Compose {
            pipeline,
            output,
            normalize,
        } => {
            let doc = PipelineDocument::parse(&read(pipeline)?, &pipeline.display().to_string())?;
            let base = pipeline.parent().unwrap_or(Path::new("."));
            emit_network(doc.evaluate(base)?, *normalize, output.as_deref(), out)?;
        }
        Command::Tensor {
            networks,
            output,
            normalize,
        } => {
            let mut acc = Network::load(&networks[0])?;
            for path in &networks[1..] {
                acc = acc.tensor(&Network::load(path)?)?;
            }
            emit_network(acc, *normalize, output.as_deref(), out)?;
        }
        Command::Check {
            source,
            target,
            map,
        } => {
            let s = Network::load(source)?;
            let t = Network::load(target)?;
            let m: MapDocument =
                serde_json::from_str(&read(map)?).map_err(|e| CliError::Parse {
                    what: map.display().to_string(),
                    reason: e.to_string(),
                })?;
            match check_networks(&s, &t, &m)? {
                Ok(()) => emit("ok: valid 2-morphism\n", None, out)?,
                Err(diagnostic) => {
                    let _ = writeln!(err, "check failed[E_CHECK_FAILED]: {diagnostic}");
                    return Ok(EXIT_FAILED);
                }
            }
        }
        Command::Laws {
            seed,
            max_size,
            cases,
            backend,
            output,
        } => {
            let gen = CaseGenerator::new(*seed)
                .with_cases(*cases)
                .with_max_set_size(*max_size);
            let backends = match backend {
                BackendChoice::Circuit => Backends::Circuit,
                BackendChoice::Vectfield => Backends::VectField,
                BackendChoice::All => Backends::All,
            };
            let reports = run_suite(&gen, backends);
            let text = render_text(&reports);
            emit(&text, None, out)?;
            if let Some(dir) = output {
                let io = |source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                };
                fs::create_dir_all(dir).map_err(io)?;
                fs::write(dir.join("laws.txt"), &text).map_err(io)?;
                let json = serde_json::json!({ "generator": gen, "reports": reports });
                let mut body = serde_json::to_string_pretty(&json).expect("plain data");
                body.push('\n');
                fs::write(dir.join("laws.json"), body).map_err(io)?;
            }
            if reports.iter().any(|r| !r.passed()) {
                return Ok(EXIT_FAILED);
            }
        }
        Command::Export {
            network,
            format,
            output,
        } => {
            let Network::Circuit(c) = Network::load(network)? else {
                return Err(CliError::Unsupported(
                    "export supports circuit networks only".into(),
                ));
            };
            let text = match format {
                Format::Dot => dot_export(&c),
                Format::Csv => csv_export(&c),
            };
            emit(&text, output.as_deref(), out)?;
        }
        Command::Simulate {
            network,
            start,
            step,
            steps,
            float,
            output,
        } => {
            let Network::VectField(system) = Network::load(network)? else {
                return Err(CliError::Unsupported(
                    "simulate needs a vectfield network".into(),
                ));
            };
            let parse = |what: &str, s: &str| {
                parse_rational(s).map_err(|e| CliError::Parse {
                    what: what.to_owned(),
                    reason: e.to_string(),
                })
            };
            let start = start
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse("--start", s))
                .collect::<Result<Vec<_>, _>>()?;
            let step = parse("--step", step)?;
            let trajectory =
                euler_integrate(system.decoration(), &start, &step, *steps).map_err(|e| {
                    CliError::Parse {
                        what: "simulate".into(),
                        reason: e.to_string(),
                    }
                })?;
            emit(&trajectory_csv(&trajectory, *float), output.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

/// Entry point of the binary: parses arguments and reports errors with codes.
pub fn main_exit_code() -> i32 {
    let cli = Cli::parse();
    let (stdout, stderr) = (io::stdout(), io::stderr());
    match run(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            EXIT_INVALID
        }
    }
}
