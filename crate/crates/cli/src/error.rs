use std::fmt;

use ringwalk::WalkError;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigErrorKind {
    UnknownKey,
    OutOfRange,
    Missing,
    Malformed,
    Syntax,
    Io,
}

impl ConfigErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::UnknownKey => "unknown-key",
            Self::OutOfRange => "out-of-range",
            Self::Missing => "missing",
            Self::Malformed => "malformed",
            Self::Syntax => "syntax",
            Self::Io => "io",
        }
    }
}

/// A configuration problem, naming the key (and file line) at fault.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub kind: ConfigErrorKind,
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(kind: ConfigErrorKind, key: Option<&str>, line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            kind,
            key: key.map(str::to_owned),
            line,
            message: message.into(),
        }
    }

    pub fn missing(key: &str) -> Self {
        Self::new(ConfigErrorKind::Missing, Some(key), None, format!("missing required field `{key}`"))
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "`{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Compute(#[from] WalkError),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 0 success, 1 usage or configuration, 2 computation or output.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Config(_) => 1,
            Self::Compute(_) | Self::Output(_) => 2,
        }
    }

    /// Single-line `key=value` record for stderr.
    pub fn machine_line(&self) -> String {
        let mut fields = vec![];
        match self {
            Self::Usage(m) => {
                fields.push(("class", "usage".to_owned()));
                fields.push(("message", format!("{:?}", first_line(m))));
            }
            Self::Config(e) => {
                fields.push(("class", "config".to_owned()));
                fields.push(("kind", e.kind.as_str().to_owned()));
                if let Some(k) = &e.key {
                    fields.push(("key", k.clone()));
                }
                if let Some(l) = e.line {
                    fields.push(("line", l.to_string()));
                }
                fields.push(("message", format!("{:?}", e.message)));
            }
            Self::Compute(e) => {
                fields.push(("class", "compute".to_owned()));
                fields.push(("message", format!("{:?}", e.to_string())));
            }
            Self::Output(m) => {
                fields.push(("class", "output".to_owned()));
                fields.push(("message", format!("{m:?}")));
            }
        }
        let body: Vec<String> = fields.into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("ringwalk-error: exit={} {}", self.exit_code(), body.join(" "))
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("").trim()
}
