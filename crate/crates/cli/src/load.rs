//! Reading `.noop` files into validated environments, with positioned
//! diagnostics.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use noop_core::obj::BudgetExceeded;
use noop_core::parse::{line_col, lower, parse, SourceUnit};
use noop_core::{ClassName, ClassSignature, EnvError, SignatureEnvironment};

#[derive(Debug)]
pub enum CliError {
    Io { path: String, err: io::Error },
    /// Already formatted `file:line:col: message` lines.
    Diagnostics(Vec<String>),
    Budget(BudgetExceeded),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Diagnostics(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, err } => write!(f, "{path}: {err}"),
            CliError::Diagnostics(lines) => f.write_str(&lines.join("\n")),
            CliError::Budget(b) => write!(f, "budget exceeded: {b}"),
        }
    }
}

impl From<BudgetExceeded> for CliError {
    fn from(b: BudgetExceeded) -> Self {
        CliError::Budget(b)
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError::Io {
        path: path.display().to_string(),
        err,
    })
}

pub struct Source {
    pub path: String,
    pub text: String,
    pub unit: SourceUnit,
    pub sigs: Vec<ClassSignature>,
}

impl Source {
    pub fn at(&self, offset: usize, msg: impl fmt::Display) -> String {
        let (line, col) = line_col(&self.text, offset);
        format!("{}:{line}:{col}: {msg}", self.path)
    }

    fn offset_of(&self, class: &ClassName) -> usize {
        self.unit
            .decls
            .iter()
            .find(|d| d.name.text == class.as_str())
            .map_or(0, |d| d.name.span.start)
    }

    pub fn env_diagnostics(&self, errors: &[EnvError]) -> Vec<String> {
        errors
            .iter()
            .map(|e| self.at(self.offset_of(e.class()), e))
            .collect()
    }

    pub fn validate(&self) -> Result<SignatureEnvironment, Vec<EnvError>> {
        SignatureEnvironment::validate(self.sigs.iter().cloned())
    }
}

/// Parses and lowers a declaration file. Environment conditions are not
/// checked yet.
pub fn load_source(path: &Path) -> Result<Source, CliError> {
    let text = read_text(path)?;
    let shown = path.display().to_string();
    let unit = parse(&text).map_err(|e| {
        let (line, col) = line_col(&text, e.position());
        CliError::Diagnostics(vec![format!("{shown}:{line}:{col}: {e}")])
    })?;
    let sigs = lower(&unit).map_err(|errs| {
        CliError::Diagnostics(
            errs.iter()
                .map(|e| {
                    let (line, col) = line_col(&text, e.span().start);
                    format!("{shown}:{line}:{col}: {e}")
                })
                .collect(),
        )
    })?;
    Ok(Source {
        path: shown,
        text,
        unit,
        sigs,
    })
}

pub fn load_env(path: &Path) -> Result<(Source, SignatureEnvironment), CliError> {
    let src = load_source(path)?;
    match src.validate() {
        Ok(env) => Ok((src, env)),
        Err(errs) => Err(CliError::Diagnostics(src.env_diagnostics(&errs))),
    }
}

/// The environment condition a violation belongs to.
pub fn condition(e: &EnvError) -> &'static str {
    match e {
        EnvError::DanglingReference { .. } | EnvError::UnboundName(_) => "referential-closure",
        EnvError::SupersignatureCycle(_) => "acyclicity",
        EnvError::MemberNotInherited { .. } => "member-inclusion",
        EnvError::DuplicateName(_) | EnvError::DuplicateSuper { .. } | EnvError::DuplicateMember { .. } => {
            "well-formed"
        }
    }
}

pub const CONDITIONS: [&str; 4] = [
    "well-formed",
    "referential-closure",
    "acyclicity",
    "member-inclusion",
];
