//! `quiver-stability`: stability data and wall-and-chamber structures of small quiver algebras.
//!
//! Every subcommand writes one JSON document (or an SVG picture for `render`) to stdout or
//! `--out`. Exit status is 0 on success, 1 on domain errors and 2 on malformed input; failures
//! still produce a JSON document with an `error` field.

mod inputs;
mod report;
mod svg;

use std::fs;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quiver_stability::indec::enumerate_indecomposables;
use quiver_stability::stability::StabilityFunction;
use quiver_stability::universe::ModuleUniverse;
use quiver_stability::wallchamber::{chambers_rank2, enumerate_walls, validate_red_path, RedPath};

/// Samples drawn for a non-exact rank-three chamber listing.
const SLICE_SAMPLES: usize = 4000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Domain(quiver_stability::Error),
}

impl From<quiver_stability::Error> for CliError {
    fn from(e: quiver_stability::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(e) if e.is_parse_error() => 2,
            CliError::Io(_) | CliError::Domain(_) => 1,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Usage(m) => ("Usage".to_string(), m.clone()),
            CliError::Io(m) => ("Io".to_string(), m.clone()),
            CliError::Domain(e) => {
                let debug = format!("{e:?}");
                let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
                (kind, e.to_string())
            }
        };
        json!({"error": {"kind": kind, "message": message, "exit_code": self.exit_code()}})
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Parser, Debug)]
#[command(name = "quiver-stability", version, about = "Stability data and wall-and-chamber structures of quiver algebras")]
struct Cli {
    /// `builtin:A2`, `builtin:A3`, `builtin:A<n>[:orientation]`, `builtin:kronecker`, or an algebra file
    #[arg(long, global = true, default_value = "builtin:A2")]
    algebra: String,

    /// Field characteristic for builtin algebras (default 2)
    #[arg(long, global = true)]
    prime: Option<u32>,

    /// Componentwise dimension bound `d1,d2,...` (default 1 at every vertex)
    #[arg(long, global = true)]
    bound: Option<String>,

    /// Write the document here instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,

    /// Seed for randomized sampling
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format; only `render` produces SVG
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the indecomposable modules up to the bound
    Indec,
    /// King semistability of indecomposables (or one class) for a weight vector
    King {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        module: Option<String>,
    },
    /// Harder-Narasimhan filtrations of every class (or one class)
    Hn {
        #[command(flatten)]
        stability: StabilityArgs,
        #[arg(long)]
        module: Option<String>,
    },
    /// Torsion and torsion-free classes at a phase
    Torsion {
        #[command(flatten)]
        stability: StabilityArgs,
        #[arg(long, allow_hyphen_values = true)]
        phase: String,
    },
    /// The chain of torsion classes of a stability function
    Chain {
        #[command(flatten)]
        stability: StabilityArgs,
    },
    /// Decide whether the chain of torsion classes is a maximal green sequence
    Mgs {
        #[command(flatten)]
        stability: StabilityArgs,
    },
    /// Walls of the indecomposables up to the bound (rank at most 3)
    Walls,
    /// Chambers: exact in rank 2, sampled on affine slices in rank 3
    Chambers,
    /// Validate a red path and report its crossing times
    Path {
        #[arg(long)]
        path: String,
    },
    /// SVG picture of a rank-2 wall-and-chamber structure
    Render {
        #[arg(long)]
        path: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
struct StabilityArgs {
    /// `kronecker-slope`, `slope:NUM:DEN`, `charge:A:B`, `starred:POINTS[:higher][:below]`,
    /// `starred-unchecked:...`, `path:SOURCE` or `table:FILE`
    #[arg(long, allow_hyphen_values = true)]
    stability: Option<String>,

    /// Red path file or shipped path name; stands for `--stability path:SOURCE`
    #[arg(long)]
    path: Option<String>,
}

impl StabilityArgs {
    fn resolve(&self, u: &Arc<ModuleUniverse>) -> Result<(String, StabilityFunction), CliError> {
        let spec = match (&self.stability, &self.path) {
            (Some(s), None) => s.clone(),
            (None, Some(p)) => format!("path:{p}"),
            (Some(_), Some(_)) => return Err(CliError::Usage("give either --stability or --path, not both".into())),
            (None, None) => return Err(CliError::Usage("this subcommand needs --stability or --path".into())),
        };
        let sf = inputs::parse_stability(&spec, u)?;
        Ok((spec, sf))
    }
}

struct Output {
    body: String,
}

fn json_output(mut doc: Value, header: Value) -> Output {
    if let (Value::Object(map), Value::Object(extra)) = (&mut doc, header) {
        map.extend(extra);
    }
    Output { body: format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize")) }
}

fn class_list(u: &ModuleUniverse, module: Option<&str>, default_all: bool) -> Result<Vec<usize>, CliError> {
    match module {
        Some(name) => {
            let c = u.class_by_name(name).ok_or_else(|| CliError::Usage(format!("no class `{name}` in the universe")))?;
            Ok(vec![c])
        }
        None if default_all => Ok((0..u.classes().len()).collect()),
        None => Ok((0..u.indecomposables().len()).map(|i| u.indecomposable_class(i)).collect()),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Render { .. } => Format::Svg,
        _ => Format::Json,
    });
    match (&cli.command, format) {
        (Command::Render { .. }, Format::Json) => return Err(CliError::Usage("render only produces svg".into())),
        (Command::Render { .. }, Format::Svg) | (_, Format::Json) => {}
        (_, Format::Svg) => return Err(CliError::Usage("only render produces svg".into())),
    }

    let algebra = inputs::load_algebra(&cli.algebra, cli.prime)?;
    let bound = inputs::parse_bound(cli.bound.as_deref(), &algebra)?;
    let rank = algebra.vertex_count();
    let header = json!({"command": command_name(&cli.command), "algebra": cli.algebra, "prime": algebra.field.p(), "bound": bound});

    if let Command::Indec = cli.command {
        let modules = enumerate_indecomposables(&algebra, &bound)?;
        return Ok(json_output(report::indecomposables(&modules, &bound), header));
    }
    if let Command::Walls = cli.command {
        let walls = enumerate_walls(&algebra, &bound)?;
        return Ok(json_output(report::walls(&walls, rank, &bound)?, header));
    }

    let u = ModuleUniverse::new(algebra.clone(), &bound)?;
    let with_stability = |spec: String, doc: Value| {
        let mut h = header.clone();
        h["stability"] = Value::String(spec);
        json_output(doc, h)
    };
    Ok(match &cli.command {
        Command::King { theta, module } => {
            let theta = inputs::parse_vector("--theta", theta, rank)?;
            json_output(report::king(&theta, &class_list(&u, module.as_deref(), false)?, &u)?, header)
        }
        Command::Hn { stability, module } => {
            let (spec, sf) = stability.resolve(&u)?;
            with_stability(spec, report::hn(&sf, &class_list(&u, module.as_deref(), true)?, &u)?)
        }
        Command::Torsion { stability, phase } => {
            let p = inputs::parse_phase(phase)?;
            let (spec, sf) = stability.resolve(&u)?;
            with_stability(spec, report::torsion(&sf, p, &u)?)
        }
        Command::Chain { stability } => {
            let (spec, sf) = stability.resolve(&u)?;
            with_stability(spec, report::chain(&sf, &u)?)
        }
        Command::Mgs { stability } => {
            let (spec, sf) = stability.resolve(&u)?;
            with_stability(spec, report::mgs(&sf, &u)?)
        }
        Command::Chambers => {
            let doc = match rank {
                2 => report::chambers_exact(&chambers_rank2(&enumerate_walls(&algebra, &bound)?)?),
                3 => report::chambers_sampled(&u, cli.seed, SLICE_SAMPLES)?,
                _ => return Err(quiver_stability::Error::RankUnsupported { rank, max: 3 }.into()),
            };
            json_output(doc, header)
        }
        Command::Path { path } => {
            let red = checked_path(path, rank)?;
            json_output(report::path(&validate_red_path(&red, &u)?, &u), header)
        }
        Command::Render { path } => {
            if rank != 2 {
                return Err(quiver_stability::Error::RankUnsupported { rank, max: 2 }.into());
            }
            let walls = enumerate_walls(&algebra, &bound)?;
            let chambers = chambers_rank2(&walls)?;
            let red = path.as_deref().map(|p| checked_path(p, rank)).transpose()?;
            let rep = red.as_ref().map(|r| validate_red_path(r, &u)).transpose()?;
            let overlay = red.as_ref().zip(rep.as_ref());
            Output { body: svg::render(&walls, &chambers, overlay, &u)? }
        }
        Command::Indec | Command::Walls => unreachable!("handled before the universe is built"),
    })
}

fn checked_path(source: &str, rank: usize) -> Result<RedPath, CliError> {
    let red = inputs::load_path(source)?;
    if red.rank() != rank {
        return Err(CliError::Usage(format!("path has rank {} but the algebra has {rank} vertices", red.rank())));
    }
    Ok(red)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Indec => "indec",
        Command::King { .. } => "king",
        Command::Hn { .. } => "hn",
        Command::Torsion { .. } => "torsion",
        Command::Chain { .. } => "chain",
        Command::Mgs { .. } => "mgs",
        Command::Walls => "walls",
        Command::Chambers => "chambers",
        Command::Path { .. } => "path",
        Command::Render { .. } => "render",
    }
}

fn emit(body: &str, out: Option<&str>) -> Result<(), CliError> {
    match out {
        Some(file) => fs::write(file, body).map_err(|e| CliError::Io(format!("{file}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn fail(err: &CliError, out: Option<&str>) -> ExitCode {
    let body = format!("{}\n", serde_json::to_string_pretty(&err.to_json()).expect("JSON values serialize"));
    if emit(&body, out).is_err() {
        print!("{body}");
    }
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{}", e.render());
            return fail(&CliError::Usage(e.kind().to_string()), None);
        }
    };
    let out = cli.out.as_deref();
    match run(&cli).and_then(|o| emit(&o.body, out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => fail(&err, out),
    }
}
