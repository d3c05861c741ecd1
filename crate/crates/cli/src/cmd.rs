//! Command-line surface. Exit codes: 0 success, 1 diagnostics or failed
//! checks, 2 I/O and usage errors, 3 enumeration budget exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use noop_core::obj::{filter, validate, RawObject};
use noop_core::parse::line_col;
use noop_core::rec::{basis_element, FiniteDomain};
use noop_core::types::{member_of, MemberLimits, MemberUniverse};
use noop_core::{
    immediate_subsign, subsign, ClassName, SignatureClosure, SignatureEnvironment,
};
use num_bigint::BigUint;

use crate::load::{load_env, load_source, read_text, CliError, Source};
use crate::report::Report;
use crate::sexpr::{class_form, closure_form, read_object};
use crate::suites;

#[derive(Debug, Parser)]
#[command(name = "noop", version, about = "Checks class signatures and the object model built on them")]
pub struct Cli {
    /// Aligned, timestamped reports instead of the machine format.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RecLaws,
    Enum,
    Projection,
    Rank,
    Theorem,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of every declared class.
    Parse { file: PathBuf },
    /// Check the environment conditions.
    CheckEnv { file: PathBuf },
    /// Print the signature closure of a class.
    Closure { file: PathBuf, name: String },
    /// Decide whether the first class subsigns the second.
    Subsign {
        file: PathBuf,
        sub: String,
        sup: String,
        /// Also report environment extension and immediate subsigning.
        #[arg(long)]
        detail: bool,
    },
    /// Print the field and method shapes of a class.
    Shapes { file: PathBuf, name: String },
    /// Filter an object literal read from a file (`-` for stdin).
    Filter { file: PathBuf, object: PathBuf },
    /// Decide membership of an object literal in a class type.
    Member {
        file: PathBuf,
        object: PathBuf,
        name: String,
    },
    /// Print the first basis records over a flat domain.
    EnumBasis {
        #[arg(long, default_value_t = 20)]
        prefix: u64,
        /// Size of the flat element domain, bottom included.
        #[arg(long, default_value_t = 3)]
        flat: usize,
    },
    /// Print the members of a class type up to a rank.
    EnumMembers {
        file: PathBuf,
        name: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 2)]
        max_steps: usize,
    },
    /// Run property suites over the file's closures.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// Object budget; defaults to 100000 for projection and rank, 10000
        /// for theorem.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        prefix: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

fn color_enabled() -> bool {
    std::env::var("NOOP_COLOR").map_or(true, |v| v != "0")
}

fn emit(cli: &Cli, title: &str, report: &Report, out: &mut dyn Write) {
    let text = if cli.human {
        let stamp = chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string();
        report.human(title, &stamp, color_enabled())
    } else {
        report.machine()
    };
    let _ = out.write_all(text.as_bytes());
}

fn closure_named(src: &Source, env: &SignatureEnvironment, name: &str) -> Result<SignatureClosure, CliError> {
    ClassName::new(name)
        .ok()
        .and_then(|n| env.closure_of(&n).ok())
        .ok_or_else(|| CliError::Diagnostics(vec![format!("{}: name `{name}` is not bound", src.path)]))
}

fn read_obj(path: &Path, env: &SignatureEnvironment) -> Result<RawObject, CliError> {
    let (shown, text) = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io {
            path: "<stdin>".into(),
            err: e,
        })?;
        ("<stdin>".to_string(), s)
    } else {
        (path.display().to_string(), read_text(path)?)
    };
    read_object(&text, env).map_err(|e| {
        let (line, col) = line_col(&text, e.position());
        CliError::Diagnostics(vec![format!("{shown}:{line}:{col}: {e}")])
    })
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Parse { file } => {
            let src = load_source(file)?;
            for sig in &src.sigs {
                let _ = writeln!(out, "{}", class_form(sig));
            }
            Ok(0)
        }
        Command::CheckEnv { file } => {
            let src = load_source(file)?;
            let errors = src.validate().err().unwrap_or_default();
            for d in src.env_diagnostics(&errors) {
                let _ = writeln!(err, "{d}");
            }
            let report = suites::env_conditions(&errors, &src.path, src.sigs.len());
            emit(cli, "check-env", &report, out);
            Ok(report.exit_code())
        }
        Command::Closure { file, name } => {
            let (src, env) = load_env(file)?;
            let sc = closure_named(&src, &env, name)?;
            let _ = writeln!(out, "{}", closure_form(&sc));
            Ok(0)
        }
        Command::Subsign {
            file,
            sub,
            sup,
            detail,
        } => {
            let (src, env) = load_env(file)?;
            let a = closure_named(&src, &env, sub)?;
            let b = closure_named(&src, &env, sup)?;
            if *detail {
                let yes = |x: bool| if x { "yes" } else { "no" };
                let _ = writeln!(out, "env-extends {sub} {sup} {}", yes(a.env().extends(b.env())));
                let _ = writeln!(out, "immediate-subsign {sub} {sup} {}", yes(immediate_subsign(&a, &b)));
            }
            let verdict = if subsign(&a, &b) { "SUBSIGN" } else { "NOT-SUBSIGN" };
            let _ = writeln!(out, "{verdict}");
            Ok(0)
        }
        Command::Shapes { file, name } => {
            let (src, env) = load_env(file)?;
            let sc = closure_named(&src, &env, name)?;
            let (fs, ms) = sc.shapes();
            let join = |xs: Vec<String>| xs.iter().map(|x| format!(" {x}")).collect::<String>();
            let _ = writeln!(
                out,
                "(shapes {name} (fields{}) (methods{}))",
                join(fs.iter().map(|l| l.to_string()).collect()),
                join(ms.iter().map(|l| l.to_string()).collect())
            );
            Ok(0)
        }
        Command::Filter { file, object } => {
            let (_, env) = load_env(file)?;
            let o = read_obj(object, &env)?;
            let f = filter(&o);
            let _ = writeln!(out, "{f}");
            match validate(&o) {
                Ok(()) => Ok(0),
                Err(v) => {
                    let what = if f.is_bottom() { "filtered to ⊥" } else { "filtered" };
                    let _ = writeln!(err, "{}: object is not valid: {v}; {what}", object.display());
                    Ok(1)
                }
            }
        }
        Command::Member { file, object, name } => {
            let (src, env) = load_env(file)?;
            let sc = closure_named(&src, &env, name)?;
            let o = read_obj(object, &env)?;
            match member_of(&o, &sc) {
                Ok(true) => {
                    let _ = writeln!(out, "MEMBER");
                    Ok(0)
                }
                Ok(false) => {
                    let _ = writeln!(out, "NOT-MEMBER");
                    Ok(0)
                }
                Err(e) => Err(CliError::Diagnostics(vec![format!("{}: {e}", object.display())])),
            }
        }
        Command::EnumBasis { prefix, flat } => {
            let d = FiniteDomain::flat((*flat).max(1));
            for i in 0..*prefix {
                match basis_element(&BigUint::from(i), &d) {
                    Some(r) => {
                        let _ = writeln!(out, "{i} {r}");
                    }
                    None => {
                        let _ = writeln!(out, "{i} undefined");
                    }
                }
            }
            Ok(0)
        }
        Command::EnumMembers {
            file,
            name,
            rank,
            budget,
            max_steps,
        } => {
            let (src, env) = load_env(file)?;
            let sc = closure_named(&src, &env, name)?;
            let limits = MemberLimits {
                max_objects: *budget,
                max_steps: *max_steps,
            };
            let u = MemberUniverse::build(&env, *rank, limits)?;
            for o in u.members(&sc) {
                let _ = writeln!(out, "{o}");
            }
            Ok(0)
        }
        Command::Verify {
            file,
            suite,
            rank,
            budget,
            prefix,
            seed,
        } => verify(cli, file, *suite, *rank, *budget, *prefix, *seed, out, err),
    }
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    file: &Path,
    suite: Suite,
    rank: usize,
    budget: Option<usize>,
    prefix: u64,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let src = load_source(file)?;
    let mut report = Report::new();
    let errors = src.validate().err().unwrap_or_default();
    if !errors.is_empty() {
        for d in src.env_diagnostics(&errors) {
            let _ = writeln!(err, "{d}");
        }
    }
    let env = src.validate().ok();
    let wants = |s: Suite| suite == s || suite == Suite::All;
    if suite == Suite::All || env.is_none() {
        report.extend(suites::env_conditions(&errors, &src.path, src.sigs.len()));
    }
    if wants(Suite::RecLaws) {
        report.extend(suites::rec_laws(seed));
    }
    if wants(Suite::Enum) {
        report.extend(suites::enumeration(prefix));
    }
    if let Some(env) = &env {
        if wants(Suite::Projection) || wants(Suite::Rank) {
            let b = budget.unwrap_or(suites::DEFAULT_PROJECTION_BUDGET);
            let universe = suites::projection_universe(env, rank, b)?;
            if wants(Suite::Projection) {
                report.extend(suites::projection(&universe));
            }
            if wants(Suite::Rank) {
                report.extend(suites::rank(&universe));
            }
        }
        if wants(Suite::Theorem) {
            let limits = MemberLimits {
                max_objects: budget.unwrap_or(MemberLimits::default().max_objects),
                ..MemberLimits::default()
            };
            report.extend(suites::theorem(env, rank, limits)?);
        }
    }
    emit(cli, "verify", &report, out);
    Ok(report.exit_code())
}
