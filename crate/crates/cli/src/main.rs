//! Command-line front end for the set matrix kernel.
//!
//! Exit codes: 0 true/holds, 1 false/fails, 2 parse or usage error, 3 sort
//! or guard violation, 4 universe cap exceeded.

use std::io::Read;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use setmatrix::encode::encode_zfm;
use setmatrix::logic::{
    check_with, Evaluator, Model, ReplacementMap, SchemaInstance, SchemaKind, SeparationPhi, Theory, Universe,
    Verdict, DEFAULT_CAP,
};
use setmatrix::textio::{parse, print};
use setmatrix::{setops, Error, Shape, Value};

#[derive(Parser)]
#[command(name = "setmatrix", version, about = "Set matrices: normalize, compare, encode, and model-check the axiom schemas")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct UniverseArgs {
    /// Set-nesting rank of the universe.
    #[arg(long, default_value_t = 1)]
    rank: usize,
    /// Admitted matrix shapes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1x2,2x1,2x2")]
    shapes: Vec<Shape>,
    /// Matrix-nesting depth of the universe.
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Maximum number of universe values.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive)]
    cap: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

impl UniverseArgs {
    fn universe(&self) -> Result<Universe, Error> {
        Universe::enumerate(self.rank, &self.shapes, self.depth, self.cap)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Smt,
    SmtMinus,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransitiveDef {
    I,
    Ii,
    Iii,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a term.
    Norm {
        /// Term, or '-' to read it from stdin.
        term: String,
    },
    /// Decide equality of two terms.
    Eq { a: String, b: String },
    /// Decide whether the first term is a member of the second.
    Mem { a: String, b: String },
    /// Print the pure-set encoding of a term.
    Encode {
        term: String,
        /// Also print the element count and nesting depth.
        #[arg(long)]
        expand: bool,
    },
    /// Check one schema or a whole theory on a bounded universe.
    #[command(group(ArgGroup::new("what").required(true).args(["schema", "suite"])))]
    Check {
        /// Schema name, e.g. epsilon, division-matrices, separation.
        #[arg(long)]
        schema: Option<String>,
        /// Check every schema of a theory.
        #[arg(long, value_enum)]
        suite: Option<SuiteName>,
        /// Shape parameters of the schema (default: the first entries of --shapes).
        #[arg(long, value_delimiter = ',')]
        params: Option<Vec<Shape>>,
        /// Separation predicate: is-set, is-matrix, is-empty, is-inhabited (default: all).
        #[arg(long)]
        phi: Option<SeparationPhi>,
        /// Replacement map: identity, singleton, wrap-1x2, const-empty (default: all).
        #[arg(long)]
        map: Option<ReplacementMap>,
        /// Largest shape instantiated by --suite (default: the largest rows and columns of --shapes).
        #[arg(long)]
        bound: Option<Shape>,
        /// native or zfm-image.
        #[arg(long, default_value = "native")]
        model: Model,
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// Decide transitivity of a set under definition (i), (ii) or (iii).
    Transitive {
        #[arg(long, value_enum)]
        def: TransitiveDef,
        term: String,
    },
    /// Decide whether a set is an ordinal.
    Ordinal { term: String },
    /// List the values of a bounded universe.
    Enum {
        #[command(flatten)]
        universe: UniverseArgs,
    },
    /// List all matrices of a shape with entries from a set.
    MatricesOver {
        term: String,
        #[arg(long)]
        shape: Shape,
    },
}

enum Failure {
    Parse(String),
    Usage(String),
    Kernel(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Kernel(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Parse(_) | Failure::Usage(_) => 2,
            Failure::Kernel(Error::Limit { .. }) => 4,
            Failure::Kernel(Error::NotASet(_) | Error::GuardViolation(_) | Error::SortMismatch { .. }) => 3,
            Failure::Kernel(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) | Failure::Usage(m) => m.clone(),
            Failure::Kernel(e) => e.to_string(),
        }
    }
}

/// Reads term arguments, taking '-' from stdin (read once).
struct Terms {
    stdin: Option<String>,
}

impl Terms {
    fn get(&mut self, arg: &str) -> Result<Value, Failure> {
        let src = if arg == "-" {
            if self.stdin.is_none() {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
                self.stdin = Some(buf);
            }
            self.stdin.clone().unwrap_or_default()
        } else {
            arg.to_string()
        };
        parse(&src).map_err(|e| Failure::Parse(format!("parse error at {e}")))
    }
}

/// `println!` that exits quietly once stdout is closed, as when piped into
/// `head`.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

struct Output {
    format: Format,
}

impl Output {
    fn emit(&self, text: &str, json: Json) {
        match self.format {
            Format::Text => say!("{text}"),
            Format::Json => say!("{json}"),
        }
    }

    fn boolean(&self, b: bool) -> u8 {
        self.emit(&b.to_string(), json!({ "result": b }));
        if b {
            0
        } else {
            1
        }
    }

    fn listing(&self, values: &[Value]) {
        match self.format {
            Format::Text => {
                for v in values {
                    say!("{}", print(v));
                }
                say!("count: {}", values.len());
            }
            Format::Json => {
                let texts: Vec<String> = values.iter().map(print).collect();
                say!("{}", json!({ "values": texts, "count": values.len() }));
            }
        }
    }
}

fn verdict_line(v: &Verdict) -> String {
    let mut line = format!("{} {} {}", v.instance, v.model, if v.holds { "holds" } else { "fails" });
    if let Some(w) = &v.witness {
        for (name, value) in w {
            line.push_str(&format!(" {name}={}", print(value)));
        }
    }
    line
}

fn verdict_json(v: &Verdict) -> Json {
    let params: Vec<String> = v.instance.params().iter().map(Shape::to_string).collect();
    let witness = v.witness.as_ref().map(|w| {
        w.iter().map(|(name, value)| json!({ "var": name, "value": print(value) })).collect::<Vec<_>>()
    });
    let shapes: Vec<String> = v.bounds.shapes.iter().map(Shape::to_string).collect();
    json!({
        "schema": v.instance.kind().name(),
        "params": params,
        "variant": v.instance.variant(),
        "model": v.model.name(),
        "holds": v.holds,
        "witness": witness,
        "bounds": {
            "rank": v.bounds.rank,
            "depth": v.bounds.depth,
            "shapes": shapes,
            "domain_size": v.bounds.domain_size,
        },
    })
}

fn default_bound(shapes: &[Shape]) -> Shape {
    let rows = shapes.iter().map(|s| s.rows()).max().unwrap_or(1);
    let cols = shapes.iter().map(|s| s.cols()).max().unwrap_or(1);
    Shape::new(rows, cols).expect("positive")
}

fn schema_instances(
    name: &str,
    params: Option<Vec<Shape>>,
    shapes: &[Shape],
    phi: Option<SeparationPhi>,
    map: Option<ReplacementMap>,
) -> Result<Vec<SchemaInstance>, Failure> {
    let kind: SchemaKind = name.parse()?;
    let params = params.unwrap_or_else(|| shapes.iter().copied().take(kind.arity()).collect());
    let variant = match kind {
        SchemaKind::Separation => phi.map(SeparationPhi::name),
        SchemaKind::Replacement => map.map(ReplacementMap::name),
        _ => None,
    };
    match (kind, variant) {
        (SchemaKind::Separation, None) => {
            Ok(SeparationPhi::ALL.into_iter().map(SchemaInstance::Separation).collect())
        }
        (SchemaKind::Replacement, None) => {
            Ok(ReplacementMap::ALL.into_iter().map(SchemaInstance::Replacement).collect())
        }
        _ => Ok(vec![SchemaInstance::new(kind, &params, variant)?]),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = Output { format: cli.format };
    let mut terms = Terms { stdin: None };
    match cli.command {
        Command::Norm { term } => {
            let v = terms.get(&term)?;
            out.emit(&print(&v), json!({ "term": print(&v), "value": v }));
            Ok(0)
        }
        Command::Eq { a, b } => {
            let (a, b) = (terms.get(&a)?, terms.get(&b)?);
            Ok(out.boolean(a == b))
        }
        Command::Mem { a, b } => {
            let (a, b) = (terms.get(&a)?, terms.get(&b)?);
            Ok(out.boolean(setmatrix::mem(&a, &b)))
        }
        Command::Encode { term, expand } => {
            let enc = encode_zfm(&terms.get(&term)?);
            let count = enc.elements().map_or(0, <[Value]>::len);
            let depth = enc.rank();
            let mut text = print(&enc);
            if expand {
                text.push_str(&format!("\nelements: {count}\ndepth: {depth}"));
            }
            out.emit(&text, json!({ "encoding": print(&enc), "elements": count, "depth": depth }));
            Ok(0)
        }
        Command::Check { schema, suite, params, phi, map, bound, model, universe } => {
            let u = universe.universe()?;
            let instances = match (schema, suite) {
                (Some(name), _) => schema_instances(&name, params, &universe.shapes, phi, map)?,
                (None, Some(suite)) => {
                    let theory = match suite {
                        SuiteName::Smt => Theory::Smt,
                        SuiteName::SmtMinus => Theory::SmtMinus,
                    };
                    theory.instances(bound.unwrap_or_else(|| default_bound(&universe.shapes)))
                }
                (None, None) => return Err(Failure::Usage("one of --schema or --suite is required".into())),
            };
            let mut ev = Evaluator::new(&u, model);
            let verdicts =
                instances.into_iter().map(|inst| check_with(&mut ev, inst, &u)).collect::<Result<Vec<_>, _>>()?;
            match out.format {
                Format::Text => verdicts.iter().for_each(|v| say!("{}", verdict_line(v))),
                Format::Json => say!("{}", Json::Array(verdicts.iter().map(verdict_json).collect())),
            }
            Ok(if verdicts.iter().all(|v| v.holds) { 0 } else { 1 })
        }
        Command::Transitive { def, term } => {
            let x = terms.get(&term)?;
            let b = match def {
                TransitiveDef::I => setops::is_transitive_i(&x)?,
                TransitiveDef::Ii => setops::is_transitive_ii(&x)?,
                TransitiveDef::Iii => setops::is_transitive_iii(&x)?,
            };
            Ok(out.boolean(b))
        }
        Command::Ordinal { term } => {
            let x = terms.get(&term)?;
            Ok(out.boolean(setops::is_ordinal(&x)?))
        }
        Command::Enum { universe } => {
            out.listing(universe.universe()?.values());
            Ok(0)
        }
        Command::MatricesOver { term, shape } => {
            let x = terms.get(&term)?;
            let all = setops::matrices_over(&x, shape)?;
            out.listing(all.elements().expect("a set"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
