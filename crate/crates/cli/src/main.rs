mod commands;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fractal_trees::error::Error;
use fractal_trees::fractal::schema::{builtin, SubstitutionSchema};

/// Spanning-tree counts on the approximating graphs of self-similar fractals.
#[derive(Debug, Parser)]
#[command(name = "fractal-trees", version)]
struct Cli {
    /// Emit JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Report timings and cross-checks on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the built-in schemas.
    List,
    /// Check that a schema is well formed.
    Validate { schema: String },
    /// Export V_n.
    Graph {
        schema: String,
        #[arg(short = 'n', long = "level")]
        n: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Count the spanning trees of V_n.
    Count {
        schema: String,
        #[arg(short = 'n', long = "level")]
        n: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Decimation)]
        method: MethodArg,
        /// Print the full integer.
        #[arg(long)]
        exact: bool,
    },
    /// Eigenvalue classes of the probabilistic Laplacian of V_n.
    Spectrum {
        schema: String,
        #[arg(short = 'n', long = "level")]
        n: usize,
    },
    /// Asymptotic complexity constant.
    Constant {
        schema: String,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
    /// Compare decimation with both oracles on V_n.
    Verify {
        schema: String,
        #[arg(short = 'n', long = "level")]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Decimation,
    Cofactor,
    Probabilistic,
    All,
}

/// A failed command: the library error, or a schema that failed validation.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Invalid(_) => "validation",
            Failure::Lib(e) => match e {
                Error::MalformedSchema(_) => "malformed_schema",
                Error::UnknownSchema(_) => "unknown_schema",
                Error::Parse(_) => "parse",
                Error::Io(_) => "io",
                Error::IsolatedVertex(_) => "validation",
                Error::Mismatch(_) => "mismatch",
                Error::Invariant(_) => "invariant",
                Error::DecimationInapplicable(_) | Error::BadMap(_) => "decimation_inapplicable",
                Error::CapExceeded(_) | Error::FactorLimit(_) => "cap_exceeded",
                _ => "internal",
            },
        }
    }

    fn exit_code(&self) -> u8 {
        match self.code() {
            "validation" | "malformed_schema" | "unknown_schema" | "parse" | "io" => 1,
            "decimation_inapplicable" => 3,
            "cap_exceeded" => 4,
            _ => 2,
        }
    }

    fn detail(&self) -> String {
        match self {
            Failure::Invalid(msg) => msg.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

#[derive(serde::Serialize)]
struct ErrorJson {
    error: &'static str,
    detail: String,
}

/// A builtin name, or else a path to a schema JSON file.
fn load_schema(source: &str) -> Result<SubstitutionSchema, Error> {
    match builtin(source) {
        Ok(s) => Ok(s),
        Err(Error::UnknownSchema(_)) if Path::new(source).is_file() => {
            SubstitutionSchema::from_json_str(&std::fs::read_to_string(source)?)
        }
        Err(e) => Err(e),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = commands::Output { json: cli.json, verbose: cli.verbose };
    match &cli.command {
        Command::List => commands::list(&out),
        Command::Validate { schema } => commands::validate(&out, &load_schema(schema)?),
        Command::Graph { schema, n, format } => {
            commands::graph(&out, &load_schema(schema)?, *n, *format == GraphFormat::Dot)
        }
        Command::Count { schema, n, method, exact } => {
            let s = load_schema(schema)?;
            match method {
                MethodArg::All => commands::count_all(&out, &s, *n),
                MethodArg::Decimation => commands::count(&out, &s, *n, None, *exact),
                MethodArg::Cofactor => commands::count(&out, &s, *n, Some(commands::Oracle::Cofactor), *exact),
                MethodArg::Probabilistic => {
                    commands::count(&out, &s, *n, Some(commands::Oracle::Probabilistic), *exact)
                }
            }
        }
        Command::Spectrum { schema, n } => commands::spectrum(&out, &load_schema(schema)?, *n),
        Command::Constant { schema, n_max } => commands::constant(&out, &load_schema(schema)?, *n_max),
        Command::Verify { schema, n } => commands::verify(&out, &load_schema(schema)?, *n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the validation exit code; 2 is reserved for
            // verification mismatches
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if cli.json {
                let body = ErrorJson { error: f.code(), detail: f.detail() };
                println!("{}", serde_json::to_string(&body).expect("error serializes"));
            } else {
                eprintln!("error: {}", f.detail());
            }
            ExitCode::from(f.exit_code())
        }
    }
}
