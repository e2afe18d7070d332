use std::fmt;

use crate::cpptok::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Note,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Note => "note",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A message about the input, optionally anchored to a source location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: impl Into<Option<SourceSpan>>) -> Self {
        Self { severity: Severity::Error, message: message.into(), span: span.into() }
    }

    pub fn warning(message: impl Into<String>, span: impl Into<Option<SourceSpan>>) -> Self {
        Self { severity: Severity::Warning, message: message.into(), span: span.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Formats as `<file>:<line>:<col>: <severity>: <message>`.
    pub fn render(&self, file: &str) -> String {
        match self.span {
            Some(span) => format!("{}:{}:{}: {}: {}", file, span.line, span.col, self.severity, self.message),
            None => format!("{}: {}: {}", file, self.severity, self.message),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.span {
            Some(span) => write!(f, "{}:{}: {}: {}", span.line, span.col, self.severity, self.message),
            None => write!(f, "{}: {}", self.severity, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
