use thiserror::Error;

/// Errors surfaced by constructors and operations.
///
/// `Input` covers malformed or inconsistent caller data (dimension mismatches,
/// unknown labels, unparsable scalars); `Precondition` covers well-formed data
/// that violates a documented operation precondition (e.g. operator stability
/// for kernels, base-weight mismatch); `Io` wraps file-system failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of running a family of named checks against one subject.
///
/// Failures are not errors: a report always comes back, and `passed()` tells
/// whether every check succeeded. Check names are stable strings so callers
/// (and the CLI) can point at the exact failing invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport { subject: subject.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{}: {}", other.subject, c.name),
                ok: c.ok,
                detail: c.detail,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }

    /// First failing check, if any — handy for terse error messages.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.ok)
    }

    /// First failing check rendered as "name — detail" (or a placeholder).
    pub fn first_failure_text(&self) -> String {
        match self.first_failure() {
            Some(c) => format!("{} — {}", c.name, c.detail),
            None => "no failing check recorded".to_string(),
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            writeln!(f, "  [{}] {}{}", if c.ok { "ok" } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!(" — {}", c.detail) })?;
        }
        Ok(())
    }
}
