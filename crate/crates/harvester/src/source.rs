use std::collections::BTreeSet;
use std::path::Path;
use std::time::Duration;

use rdfval_core::rdf::Iri;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PAGE_SIZE: usize = 10_000;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);
pub const DEFAULT_MAX_RETRIES: u32 = 3;

/// A SPARQL endpoint to harvest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SourceSpec", into = "SourceSpec")]
pub struct Source {
    pub abbreviation: String,
    pub endpoint: Iri,
    pub page_size: usize,
    pub timeout: Duration,
    pub max_retries: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("source abbreviation is empty")]
    EmptyAbbreviation,
    #[error("{0}: endpoint {1:?} is not an http(s) URL")]
    BadEndpoint(String, String),
    #[error("{0}: page size must be at least 1")]
    ZeroPageSize(String),
    #[error("{0}: timeout must be positive")]
    ZeroTimeout(String),
    #[error("duplicate source abbreviation {0}")]
    Duplicate(String),
    #[error("source list: {0}")]
    Syntax(String),
    #[error("source list {path}: {message}")]
    Io { path: String, message: String },
}

impl Source {
    /// A source with default paging, timeout and retry settings.
    pub fn new(abbreviation: impl Into<String>, endpoint: &str) -> Result<Self, SourceError> {
        Source {
            abbreviation: abbreviation.into(),
            endpoint: Iri::new("urn:placeholder").expect("static IRI"),
            page_size: DEFAULT_PAGE_SIZE,
            timeout: DEFAULT_TIMEOUT,
            max_retries: DEFAULT_MAX_RETRIES,
        }
        .with_endpoint(endpoint)
    }

    fn with_endpoint(mut self, endpoint: &str) -> Result<Self, SourceError> {
        let bad = || SourceError::BadEndpoint(self.abbreviation.clone(), endpoint.to_string());
        let lower = endpoint.to_ascii_lowercase();
        if !(lower.starts_with("http://") || lower.starts_with("https://")) {
            return Err(bad());
        }
        if endpoint.parse::<ureq::http::Uri>().is_err() {
            return Err(bad());
        }
        self.endpoint = Iri::new(endpoint).map_err(|_| bad())?;
        Ok(self)
    }

    pub fn with_page_size(mut self, n: usize) -> Self {
        self.page_size = n;
        self
    }

    pub fn with_timeout(mut self, t: Duration) -> Self {
        self.timeout = t;
        self
    }

    pub fn with_max_retries(mut self, n: u32) -> Self {
        self.max_retries = n;
        self
    }

    pub fn validate(&self) -> Result<(), SourceError> {
        if self.abbreviation.trim().is_empty() {
            return Err(SourceError::EmptyAbbreviation);
        }
        if self.page_size == 0 {
            return Err(SourceError::ZeroPageSize(self.abbreviation.clone()));
        }
        if self.timeout.is_zero() {
            return Err(SourceError::ZeroTimeout(self.abbreviation.clone()));
        }
        Ok(())
    }

    /// Directory name used for this source's persisted results.
    pub fn dir_name(&self) -> String {
        self.abbreviation
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSpec {
    abbreviation: String,
    endpoint: String,
    #[serde(default = "default_page_size")]
    page_size: usize,
    /// Seconds.
    #[serde(default = "default_timeout")]
    timeout: f64,
    #[serde(default = "default_retries")]
    max_retries: u32,
}

fn default_page_size() -> usize {
    DEFAULT_PAGE_SIZE
}

fn default_timeout() -> f64 {
    DEFAULT_TIMEOUT.as_secs_f64()
}

fn default_retries() -> u32 {
    DEFAULT_MAX_RETRIES
}

impl TryFrom<SourceSpec> for Source {
    type Error = SourceError;

    fn try_from(s: SourceSpec) -> Result<Self, SourceError> {
        if !(s.timeout.is_finite() && s.timeout > 0.0) {
            return Err(SourceError::ZeroTimeout(s.abbreviation));
        }
        let src = Source::new(s.abbreviation, &s.endpoint)?
            .with_page_size(s.page_size)
            .with_timeout(Duration::from_secs_f64(s.timeout))
            .with_max_retries(s.max_retries);
        src.validate()?;
        Ok(src)
    }
}

impl From<Source> for SourceSpec {
    fn from(s: Source) -> Self {
        SourceSpec {
            abbreviation: s.abbreviation,
            endpoint: s.endpoint.into_string(),
            page_size: s.page_size,
            timeout: s.timeout.as_secs_f64(),
            max_retries: s.max_retries,
        }
    }
}

/// Parses a JSON array of sources. Abbreviations must be unique since
/// they name the result directories.
pub fn parse_sources(text: &str) -> Result<Vec<Source>, SourceError> {
    let sources: Vec<Source> = serde_json::from_str(text).map_err(|e| SourceError::Syntax(e.to_string()))?;
    let mut seen = BTreeSet::new();
    for s in &sources {
        if !seen.insert(s.dir_name()) {
            return Err(SourceError::Duplicate(s.abbreviation.clone()));
        }
    }
    Ok(sources)
}

pub fn load_sources(path: &Path) -> Result<Vec<Source>, SourceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SourceError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_sources(&text)
}
