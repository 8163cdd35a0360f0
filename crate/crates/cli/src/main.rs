mod commands;
mod svg;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use streetflow::error::Category;
use streetflow::sample::random_generic_spec_in;
use streetflow::{Error, FoliationSpec, Scalar};

/// Hard caps on the size of a single run.
const MAX_STEPS: usize = 1_000_000;
const MAX_POINTS: usize = 100_000;

#[derive(Parser)]
#[command(name = "streetflow", version, about = "Exact street combinatorics for genus-2 foliations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Svg,
}

#[derive(Args, Clone, Debug)]
struct SpecArgs {
    /// Spec file, `-` for stdin, or an inline JSON object. Any JSON document
    /// with a top-level `spec` field is accepted too.
    #[arg(long)]
    spec: Option<String>,
    /// Use a random generic spec drawn from this seed instead.
    #[arg(long, conflicts_with = "spec")]
    seed: Option<u64>,
    /// Square-free `d >= 2` of the field Q(sqrt d) for `--seed`.
    #[arg(long, default_value_t = 2, requires = "seed")]
    field: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Street widths and heights of both planes.
    Streets {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The five-piece first-return map on the slit and its topological type.
    Transition {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Nonzero semigroup words of every length up to `depth`.
    Words {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Fundamental-group class of a semigroup word given by its letters (e.g. `2413`).
    Pi1 {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        word: String,
        /// Follow the trajectory backwards in time.
        #[arg(long)]
        negative: bool,
    },
    /// Positive word of the torus curve class `k a' + l b'`.
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        /// Marker for the upper-triangle decomposition, in `1..=k+l`.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Factorization, lift and fiber of a nonnegative unimodular matrix.
    Matrix {
        /// `k,l,p,q` with columns `(k, l)` and `(p, q)`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        entries: Vec<i64>,
    },
    /// Validate and glue building data for a higher-genus surface.
    Build {
        /// Building-data JSON file, `-` for stdin, or inline JSON.
        #[arg(long, conflicts_with_all = ["minimal", "random"])]
        spec: Option<String>,
        /// Emit the minimal diagrams available in this genus instead.
        #[arg(long)]
        minimal: Option<usize>,
        /// Emit a random diagram drawn from `--seed`.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_genus: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Class T0 / T / T2 of a real hyperelliptic curve with the form (u + iv) dz / sqrt(R).
    Hyper {
        /// Branch points, strictly increasing.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        roots: Vec<String>,
        /// Coefficients of u, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Coefficients of v, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Compare the combinatorial model with exact ray shooting in the planes.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Seed for the sample points.
        #[arg(long = "point-seed", default_value_t = 0)]
        point_seed: u64,
    },
}

/// What a command produces.
pub enum Output {
    Json(Value),
    Text(String),
}

/// Failure with its exit code and error document.
pub struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.category() {
            Category::Validation => 1,
            Category::NonGeneric => 2,
            Category::Resource => 3,
        };
        let mut body = json!({"error": e.tag(), "message": e.to_string()});
        if let Error::CutPoint { x, step } = &e {
            body["x"] = json!(x);
            body["step"] = json!(step);
        }
        Failure { code, body }
    }
}

impl Failure {
    pub fn validation(tag: &str, message: impl Into<String>, violations: Value) -> Self {
        Failure { code: 1, body: json!({"error": tag, "message": message.into(), "violations": violations}) }
    }

    pub fn resource(message: impl Into<String>) -> Self {
        Error::Resource(message.into()).into()
    }
}

fn read_source(src: &str) -> Result<String, Failure> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') {
        return Ok(src.to_string());
    }
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")).into())
}

pub fn read_json(src: &str) -> Result<Value, Failure> {
    let text = read_source(src)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()).into())
}

fn load_spec(args: &SpecArgs) -> Result<FoliationSpec, Failure> {
    let spec = match (&args.spec, args.seed) {
        (Some(src), _) => {
            let v = read_json(src)?;
            let inner = v.get("spec").filter(|s| s.is_object()).unwrap_or(&v);
            FoliationSpec::from_json(inner)?
        }
        (None, Some(seed)) => {
            Scalar::sqrt(args.field)?;
            random_generic_spec_in(&mut ChaCha8Rng::seed_from_u64(seed), args.field)
        }
        (None, None) => return Err(Error::Parse("give --spec or --seed".into()).into()),
    };
    let violations = spec.violations();
    if let Some(first) = violations.first() {
        return Err(Failure::validation(&first.name, first.detail.clone(), serde_json::to_value(&violations).unwrap()));
    }
    Ok(spec)
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Streets { spec, format } => commands::streets(&load_spec(&spec)?, format == Format::Svg),
        Command::Transition { spec } => commands::transition(&load_spec(&spec)?),
        Command::Words { spec, depth } => commands::words(&load_spec(&spec)?, depth),
        Command::Pi1 { spec, word, negative } => commands::pi1(&load_spec(&spec)?, &word, negative),
        Command::Curve { k, l, r } => commands::curve(k, l, r),
        Command::Matrix { entries } => commands::matrix(&entries),
        Command::Build { spec, minimal, random, seed, max_genus, format } => {
            let svg = format == Format::Svg;
            match (spec, minimal, random) {
                (Some(src), _, _) => commands::build_from(&read_json(&src)?, svg),
                (None, Some(g), _) => commands::build_minimal(g, svg),
                (None, None, true) => {
                    if !(2..=12).contains(&max_genus) {
                        return Err(Error::Domain(format!("max genus {max_genus} outside 2..=12")).into());
                    }
                    commands::build_random(&mut ChaCha8Rng::seed_from_u64(seed), max_genus, svg)
                }
                _ => Err(Error::Parse("give --spec, --minimal or --random".into()).into()),
            }
        }
        Command::Hyper { roots, u, v } => commands::hyper(&roots, &u, &v),
        Command::Simulate { spec, points, steps, point_seed } => {
            if points > MAX_POINTS || steps > MAX_STEPS {
                return Err(Failure::resource(format!("at most {MAX_POINTS} points and {MAX_STEPS} steps")));
            }
            let s = load_spec(&spec)?;
            commands::simulate(&s, points, steps, &mut ChaCha8Rng::seed_from_u64(point_seed))
        }
    }
}

fn emit(text: &str) {
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            emit(e.to_string().trim_end());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&pretty(&json!({"error": "usage", "message": e.to_string().trim_end()})));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Output::Json(v)) => {
            emit(&pretty(&v));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(s)) => {
            emit(s.trim_end());
            ExitCode::SUCCESS
        }
        Err(f) => {
            emit(&pretty(&f.body));
            ExitCode::from(f.code)
        }
    }
}
