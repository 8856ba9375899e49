//! The `dsub` command line.
//!
//! Exit codes: 0 for a positive answer, 1 for a negative one (untypable,
//! not a subtype, stuck, violations, mismatches), 2 for usage, parse and
//! IO errors. Machine output goes to stdout, diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dsub_core::declarative::{
    decl_search, decl_verify, derivation_from_json, derivation_to_json, trace_to_json, Judgment,
};
use dsub_core::dotty::{bench_pn, Metric};
use dsub_core::exposure::{expose, ExposureResult};
use dsub_core::lab::{check_no_tag_switch, check_wellbehaved, run_minimality_counterexample};
use dsub_core::shift::{shift, Direction, ShiftResult};
use dsub_core::step::{step_subtype, step_type, StepTypingOutcome, Subtyping};
use dsub_core::syntax::{parse_term, parse_type, Term, Type, VarName};
use dsub_core::TypeEnv;

mod corpus;

pub use corpus::run_corpus;

#[derive(Parser, Debug)]
#[command(name = "dsub", version, about = "Step typing and subtyping for D<:", propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Step-type the term in FILE.
    Check {
        file: PathBuf,
        /// Environment file; defaults to the file's `//! env:` header.
        #[arg(long)]
        env: Option<PathBuf>,
        /// Write the step derivation as JSON.
        #[arg(long, value_name = "OUT.json")]
        emit_trace: Option<PathBuf>,
    },
    /// Decide step subtyping S <: T.
    Sub {
        #[command(flatten)]
        env: EnvArg,
        s: String,
        t: String,
        #[arg(long, value_name = "OUT.json")]
        emit_trace: Option<PathBuf>,
    },
    /// Expose a type to a non-path supertype.
    Expose {
        #[command(flatten)]
        env: EnvArg,
        ty: String,
    },
    /// Erase a variable by moving to a supertype.
    Promote(ShiftArgs),
    /// Erase a variable by moving to a subtype.
    Demote(ShiftArgs),
    /// Declarative derivations.
    #[command(subcommand)]
    Decl(DeclCommand),
    /// Bounded falsification sweeps and the minimality counterexample.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Benchmarks of the Scala subtyping model.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Golden cases with expected outcomes.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Args, Debug)]
struct EnvArg {
    /// Environment file with `x : T ;` lines. Empty if omitted.
    #[arg(long)]
    env: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ShiftArgs {
    #[command(flatten)]
    env: EnvArg,
    #[arg(long)]
    var: String,
    ty: String,
}

#[derive(Subcommand, Debug)]
enum DeclCommand {
    /// Check a derivation tree in JSON.
    Verify { file: PathBuf },
    /// Search for a derivation with bounded depth.
    Search {
        #[command(flatten)]
        env: EnvArg,
        #[arg(long)]
        fuel: u32,
        /// Subtyping goal.
        #[arg(long, num_args = 2, value_names = ["S", "T"], conflicts_with = "typ", required_unless_present = "typ")]
        sub: Option<Vec<String>>,
        /// Typing goal: a term file and a type.
        #[arg(long, num_args = 2, value_names = ["FILE", "T"])]
        typ: Option<Vec<String>>,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    #[arg(long, default_value_t = 6)]
    fuel: u32,
}

#[derive(Subcommand, Debug)]
enum LabCommand {
    /// Colour lemma sweep.
    Colours(SweepArgs),
    /// Declarations never switch labels.
    Tags(SweepArgs),
    /// Reproduce the minimality counterexample.
    Minimality,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// Subtype checks on the P_N family.
    Pn {
        #[arg(long, default_value_t = 1)]
        min: usize,
        #[arg(long, default_value_t = 16)]
        max: usize,
        #[arg(long, default_value = "calls")]
        metric: Metric,
        /// CSV file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    /// Run every case in DIR.
    Run {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

/// Usage, parse or IO failure: exit 2.
#[derive(Debug)]
pub struct Fatal(pub String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Fatal {
        Fatal(e.to_string())
    }
}

type Exit = Result<i32, Fatal>;

fn read(path: &Path) -> Result<String, Fatal> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

pub fn load_env(path: &Path) -> Result<TypeEnv, Fatal> {
    TypeEnv::parse(&read(path)?).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn env_of(arg: &EnvArg) -> Result<TypeEnv, Fatal> {
    arg.env.as_deref().map_or(Ok(TypeEnv::empty()), load_env)
}

fn ty(src: &str) -> Result<Type, Fatal> {
    parse_type(src).map_err(|e| Fatal(format!("in type `{src}`: {e}")))
}

/// `//! key: value` lines at the top of a corpus or term file.
pub fn headers(src: &str) -> Vec<(String, String)> {
    src.lines()
        .map_while(|l| l.trim_start().strip_prefix("//!"))
        .filter_map(|h| h.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn header<'a>(hs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    hs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// The term in `file` and its environment: `--env` if given, otherwise the
/// `//! env:` header resolved next to the file, otherwise empty.
pub fn load_term(file: &Path, env: Option<&Path>) -> Result<(TypeEnv, Term), Fatal> {
    let src = read(file)?;
    let term = parse_term(&src).map_err(|e| Fatal(format!("{}: {e}", file.display())))?;
    let env = match (env, header(&headers(&src), "env")) {
        (Some(p), _) => load_env(p)?,
        (None, Some(rel)) => load_env(&file.parent().unwrap_or(Path::new(".")).join(rel))?,
        (None, None) => TypeEnv::empty(),
    };
    Ok((env, term))
}

fn write_json(path: &Path, v: &serde_json::Value) -> Result<(), Fatal> {
    let text = serde_json::to_string_pretty(v)?;
    fs::write(path, text + "\n").map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn check(file: &Path, env: Option<&Path>, trace: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let (g, term) = load_term(file, env)?;
    match step_type(&g, &term)? {
        StepTypingOutcome::Typed(t, tr) => {
            if let Some(p) = trace {
                write_json(p, &trace_to_json(&tr))?;
            }
            writeln!(out, "{t}")?;
            Ok(0)
        }
        StepTypingOutcome::Untypable { reason, location } => {
            writeln!(err, "untypable at {}: {reason}", if location.is_empty() { "root" } else { &location })?;
            Ok(1)
        }
    }
}

fn sub(env: &EnvArg, s: &str, t: &str, trace: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let g = env_of(env)?;
    match step_subtype(&g, &ty(s)?, &ty(t)?)? {
        Subtyping::Holds(tr) => {
            if let Some(p) = trace {
                write_json(p, &trace_to_json(&tr))?;
            }
            writeln!(out, "true")?;
            Ok(0)
        }
        Subtyping::Fails(why) => {
            writeln!(out, "false")?;
            if let Some(why) = why {
                writeln!(err, "{why}")?;
            }
            Ok(1)
        }
    }
}

fn expose_cmd(env: &EnvArg, t: &str, out: &mut dyn Write) -> Exit {
    let g = env_of(env)?;
    match expose(&g, &ty(t)?)? {
        ExposureResult::Exposed(t) => {
            writeln!(out, "{t}")?;
            Ok(0)
        }
        ExposureResult::Stuck { blocker, .. } => {
            writeln!(out, "stuck: {blocker}")?;
            Ok(1)
        }
    }
}

fn shift_cmd(args: &ShiftArgs, dir: Direction, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let g = env_of(&args.env)?;
    let x = VarName::new(args.var.as_str())?;
    match shift(&g, &ty(&args.ty)?, &x, dir)? {
        ShiftResult::Shifted(t) => {
            writeln!(out, "{t}")?;
            Ok(0)
        }
        ShiftResult::ShiftStuck(why) => {
            writeln!(err, "stuck: {why}")?;
            Ok(1)
        }
    }
}

fn decl(cmd: &DeclCommand, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    match cmd {
        DeclCommand::Verify { file } => {
            let d = derivation_from_json(&read(file)?).map_err(|e| Fatal(format!("{}: {e}", file.display())))?;
            match decl_verify(&d) {
                Ok(()) => {
                    writeln!(out, "valid")?;
                    Ok(0)
                }
                Err(e) => {
                    writeln!(out, "invalid")?;
                    writeln!(err, "{e}")?;
                    Ok(1)
                }
            }
        }
        DeclCommand::Search { env, fuel, sub, typ } => {
            let g = env_of(env)?;
            let j = match (sub, typ) {
                (Some(st), _) => Judgment::sub(&g, ty(&st[0])?, ty(&st[1])?),
                (None, Some(ft)) => {
                    let (_, term) = load_term(Path::new(&ft[0]), None)?;
                    Judgment::typ(&g, term, ty(&ft[1])?)
                }
                (None, None) => return Err(Fatal("one of --sub or --typ is required".into())),
            };
            match decl_search(&j, *fuel) {
                Some(d) => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&derivation_to_json(&d))?)?;
                    Ok(0)
                }
                None => {
                    writeln!(err, "no derivation found with fuel {fuel}")?;
                    Ok(1)
                }
            }
        }
    }
}

fn lab(cmd: &LabCommand, out: &mut dyn Write) -> Exit {
    let report = match cmd {
        LabCommand::Colours(a) => check_wellbehaved(a.max_size, a.fuel),
        LabCommand::Tags(a) => check_no_tag_switch(a.max_size, a.fuel),
        LabCommand::Minimality => {
            let r = run_minimality_counterexample()?;
            write!(out, "{r}")?;
            return Ok(if r.reproduced() { 0 } else { 1 });
        }
    };
    write!(out, "{report}")?;
    Ok(if report.clean() { 0 } else { 1 })
}

fn bench(cmd: &BenchCommand, out: &mut dyn Write) -> Exit {
    let BenchCommand::Pn { min, max, metric, out: file } = cmd;
    if *min < 1 || min > max {
        return Err(Fatal("need 1 <= --min <= --max".into()));
    }
    let rows = bench_pn(*min, *max, *metric)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", &metric.to_string()])?;
    for (n, v) in rows {
        w.write_record([n.to_string(), v.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Fatal(e.to_string()))?;
    match file {
        Some(p) => fs::write(p, bytes).map_err(|e| Fatal(format!("{}: {e}", p.display())))?,
        None => out.write_all(&bytes)?,
    }
    Ok(0)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    match &cli.command {
        Command::Check { file, env, emit_trace } => check(file, env.as_deref(), emit_trace.as_deref(), out, err),
        Command::Sub { env, s, t, emit_trace } => sub(env, s, t, emit_trace.as_deref(), out, err),
        Command::Expose { env, ty } => expose_cmd(env, ty, out),
        Command::Promote(a) => shift_cmd(a, Direction::Promote, out, err),
        Command::Demote(a) => shift_cmd(a, Direction::Demote, out, err),
        Command::Decl(c) => decl(c, out, err),
        Command::Lab(c) => lab(c, out),
        Command::Bench(c) => bench(c, out),
        Command::Corpus(CorpusCommand::Run { dir }) => run_corpus(dir, out),
    }
}

/// Runs `dsub` with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return 2;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
