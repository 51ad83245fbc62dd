use std::fmt;

use serde::Serialize;

use super::catalog::Catalog;
use super::family::ParamKind;
use crate::query::is_supported_datatype;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LintKind {
    UnsupportedDatatype,
    RegexNeverMatches,
    SeverityBelowFamilyMinimum,
    NotImplemented,
}

impl LintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LintKind::UnsupportedDatatype => "unsupported-datatype",
            LintKind::RegexNeverMatches => "regex-never-matches",
            LintKind::SeverityBelowFamilyMinimum => "severity-below-family-minimum",
            LintKind::NotImplemented => "not-implemented",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub constraint_id: String,
    pub kind: LintKind,
    pub detail: String,
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.constraint_id, self.kind.as_str(), self.detail)
    }
}

/// Static checks over a loaded catalog, in catalog order.
pub fn lint_catalog(catalog: &Catalog) -> Vec<LintFinding> {
    let mut out = Vec::new();
    for c in catalog {
        let mut push = |kind, detail: String| {
            out.push(LintFinding { constraint_id: c.id.clone(), kind, detail });
        };
        if !c.is_implemented() {
            push(LintKind::NotImplemented, format!("{} is catalogued but not executable", c.family.id));
        }
        for spec in c.family.params {
            match spec.kind {
                ParamKind::Datatype => {
                    if let Some(dt) = c.params.iri(spec.name) {
                        if !is_supported_datatype(dt.as_str()) {
                            push(LintKind::UnsupportedDatatype, format!("datatype <{}> is not supported", dt.as_str()));
                        }
                    }
                }
                ParamKind::Regex => {
                    if let Some(pattern) = c.params.text(spec.name) {
                        if never_matches(pattern, c.params.text("flags").unwrap_or("")) {
                            push(LintKind::RegexNeverMatches, format!("pattern /{pattern}/ cannot match any text"));
                        }
                    }
                }
                _ => {}
            }
        }
        if let Some(min) = c.family.min_severity {
            if c.severity < min {
                push(
                    LintKind::SeverityBelowFamilyMinimum,
                    format!("severity {} is below the {} minimum of {}", c.severity, c.family.id, min),
                );
            }
        }
    }
    out
}

/// True when the regex has no match on any input, such as `[^\s\S]`.
fn never_matches(pattern: &str, flags: &str) -> bool {
    let mut parser = regex_syntax::ParserBuilder::new();
    parser.case_insensitive(flags.contains('i'));
    match parser.build().parse(pattern) {
        Ok(hir) => hir.properties().minimum_len().is_none(),
        Err(_) => false,
    }
}
