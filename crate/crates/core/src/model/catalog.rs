use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Read;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use super::family::{family, FamilySpec, ParamKind};
use super::{Expressivity, Severity, Status};
use crate::query::{compile_regex, CompareOp};
use crate::rdf::{vocab, Iri, Literal};

/// A parameter value after prefix expansion and kind checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Iri(Iri),
    Iris(Vec<Iri>),
    /// An `xsd:integer` or `xsd:decimal` literal.
    Number(Literal),
    Text(String),
    Operator(CompareOp),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, value: ParamValue) {
        self.0.insert(name.into(), value);
    }

    pub fn iri(&self, name: &str) -> Option<&Iri> {
        match self.0.get(name) {
            Some(ParamValue::Iri(i)) => Some(i),
            _ => None,
        }
    }

    pub fn iris(&self, name: &str) -> Option<&[Iri]> {
        match self.0.get(name) {
            Some(ParamValue::Iris(v)) => Some(v),
            _ => None,
        }
    }

    pub fn number(&self, name: &str) -> Option<&Literal> {
        match self.0.get(name) {
            Some(ParamValue::Number(l)) => Some(l),
            _ => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        match self.0.get(name) {
            Some(ParamValue::Text(t)) => Some(t),
            _ => None,
        }
    }

    pub fn operator(&self, name: &str) -> Option<CompareOp> {
        match self.0.get(name) {
            Some(ParamValue::Operator(op)) => Some(*op),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Iri(i) => write!(f, "<{}>", i.as_str()),
            ParamValue::Iris(v) => {
                let parts: Vec<String> = v.iter().map(|i| format!("<{}>", i.as_str())).collect();
                write!(f, "[{}]", parts.join(", "))
            }
            ParamValue::Number(l) => f.write_str(l.lexical()),
            ParamValue::Text(t) => f.write_str(t),
            ParamValue::Operator(op) => f.write_str(op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub id: String,
    pub vocabulary: String,
    pub family: &'static FamilySpec,
    pub params: Params,
    pub severity: Severity,
    pub status: Status,
    /// Template with `{focus}`, `{path}`, `{value}`, `{id}` and parameter
    /// placeholders.
    pub message: String,
    pub expressivity: Expressivity,
}

impl Constraint {
    pub fn is_implemented(&self) -> bool {
        self.status == Status::Implemented
    }
}

/// An immutable, validated list of constraints plus the prefixes used to
/// write it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    pub name: Option<String>,
    pub prefixes: BTreeMap<String, String>,
    constraints: Vec<Constraint>,
}

impl Catalog {
    /// Builds a catalog, rejecting duplicate ids.
    pub fn from_constraints(
        name: Option<String>,
        prefixes: BTreeMap<String, String>,
        constraints: Vec<Constraint>,
    ) -> Result<Self, CatalogError> {
        let mut seen = HashSet::new();
        let problems: Vec<CatalogProblem> = constraints
            .iter()
            .filter(|c| !seen.insert(c.id.clone()))
            .map(|c| CatalogProblem::new(Some(&c.id), "duplicate constraint id"))
            .collect();
        if !problems.is_empty() {
            return Err(CatalogError::Invalid(problems));
        }
        Ok(Catalog { name, prefixes, constraints })
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.id == id)
    }

    /// Vocabularies in order of first appearance.
    pub fn vocabularies(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for c in &self.constraints {
            if !out.contains(&c.vocabulary.as_str()) {
                out.push(&c.vocabulary);
            }
        }
        out
    }

    /// Returns a copy with one constraint's severity replaced.
    pub fn with_severity(&self, id: &str, severity: Severity) -> Option<Catalog> {
        let mut out = self.clone();
        out.constraints.iter_mut().find(|c| c.id == id)?.severity = severity;
        Some(out)
    }

    /// Keeps only the constraints matching `keep`.
    pub fn filtered(&self, keep: impl Fn(&Constraint) -> bool) -> Catalog {
        Catalog {
            name: self.name.clone(),
            prefixes: self.prefixes.clone(),
            constraints: self.constraints.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Catalog {
    type Item = &'a Constraint;
    type IntoIter = std::slice::Iter<'a, Constraint>;

    fn into_iter(self) -> Self::IntoIter {
        self.constraints.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogProblem {
    pub constraint_id: Option<String>,
    pub reason: String,
}

impl CatalogProblem {
    fn new(id: Option<&str>, reason: impl Into<String>) -> Self {
        CatalogProblem { constraint_id: id.map(str::to_string), reason: reason.into() }
    }
}

impl fmt::Display for CatalogProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constraint_id {
            Some(id) => write!(f, "{id}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog is not valid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{}", render_problems(.0))]
    Invalid(Vec<CatalogProblem>),
}

impl CatalogError {
    pub fn problems(&self) -> &[CatalogProblem] {
        match self {
            CatalogError::Invalid(p) => p,
            _ => &[],
        }
    }
}

fn render_problems(problems: &[CatalogProblem]) -> String {
    let mut out = format!("{} problem(s) in catalog", problems.len());
    for p in problems {
        out.push_str("\n  ");
        out.push_str(&p.to_string());
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    name: Option<String>,
    vocabulary: Option<String>,
    default_severity: Option<Severity>,
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default)]
    constraints: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstraint {
    id: String,
    vocabulary: Option<String>,
    family: String,
    severity: Option<Severity>,
    #[serde(default = "implemented")]
    status: Status,
    #[serde(default)]
    params: serde_json::Map<String, Value>,
    message: Option<String>,
    expressivity: Option<Vec<String>>,
}

fn implemented() -> Status {
    Status::Implemented
}

const BUILTIN_PREFIXES: [(&str, &str); 4] = [
    ("rdf", vocab::rdf::NS),
    ("rdfs", vocab::rdfs::NS),
    ("xsd", vocab::xsd::NS),
    ("owl", "http://www.w3.org/2002/07/owl#"),
];

pub fn load_catalog<R: Read>(mut input: R) -> Result<Catalog, CatalogError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    load_catalog_str(&text)
}

pub fn load_catalog_str(text: &str) -> Result<Catalog, CatalogError> {
    let mut raw: RawCatalog = serde_json::from_str(text)?;
    let mut problems = Vec::new();
    let mut prefixes = BTreeMap::new();
    for (prefix, ns) in &raw.prefixes {
        match Iri::new(ns.clone()) {
            Ok(_) => {
                prefixes.insert(prefix.clone(), ns.clone());
            }
            Err(e) => problems.push(CatalogProblem::new(None, format!("prefix '{prefix}': {e}"))),
        }
    }
    let ctx = Resolver { prefixes: &prefixes };

    let mut constraints = Vec::new();
    let mut seen = HashSet::new();
    for (i, value) in std::mem::take(&mut raw.constraints).into_iter().enumerate() {
        let hint = value.get("id").and_then(Value::as_str).map(str::to_string);
        let rc: RawConstraint = match serde_json::from_value(value) {
            Ok(rc) => rc,
            Err(e) => {
                let id = hint.unwrap_or_else(|| format!("#{i}"));
                problems.push(CatalogProblem::new(Some(&id), e.to_string()));
                continue;
            }
        };
        if !seen.insert(rc.id.clone()) {
            problems.push(CatalogProblem::new(Some(&rc.id), "duplicate constraint id"));
            continue;
        }
        let before = problems.len();
        let c = resolve_constraint(rc, &raw, &ctx, &mut problems);
        if problems.len() == before {
            constraints.extend(c);
        }
    }
    if !problems.is_empty() {
        return Err(CatalogError::Invalid(problems));
    }
    Ok(Catalog { name: raw.name, prefixes, constraints })
}

fn resolve_constraint(
    rc: RawConstraint,
    file: &RawCatalog,
    ctx: &Resolver<'_>,
    problems: &mut Vec<CatalogProblem>,
) -> Option<Constraint> {
    let id = rc.id.clone();
    let mut fail = |reason: String| problems.push(CatalogProblem::new(Some(&id), reason));

    if rc.id.trim().is_empty() {
        fail("empty id".into());
        return None;
    }
    let Some(fam) = family(&rc.family) else {
        fail(format!("unknown family '{}'", rc.family));
        return None;
    };
    let vocabulary = match rc.vocabulary.or_else(|| file.vocabulary.clone()) {
        Some(v) => v,
        None => {
            fail("no vocabulary given".into());
            return None;
        }
    };
    if rc.status == Status::Implemented && !fam.executable() {
        fail(format!("family {} has no executable semantics; mark it not-implemented", fam.id));
    }

    let mut params = Params::default();
    for (name, value) in &rc.params {
        let Some(spec) = fam.param(name) else {
            fail(format!("unknown parameter '{name}' for {}", fam.id));
            continue;
        };
        match ctx.param(spec.kind, value) {
            Ok(v) => params.insert(name.clone(), v),
            Err(reason) => fail(format!("parameter '{name}': {reason}")),
        }
    }
    // Catalogued-only constraints may leave their parameters unspecified.
    if rc.status == Status::Implemented {
        for spec in fam.params.iter().filter(|p| p.required) {
            if params.get(spec.name).is_none() && !rc.params.contains_key(spec.name) {
                fail(format!("missing required parameter '{}'", spec.name));
            }
        }
        if !fam.one_of.is_empty() && !fam.one_of.iter().any(|n| rc.params.contains_key(*n)) {
            fail(format!("needs at least one of: {}", fam.one_of.join(", ")));
        }
    }
    for spec in fam.params.iter().filter(|p| p.kind == ParamKind::Regex) {
        if let Some(pattern) = params.text(spec.name) {
            let flags = params.text("flags").unwrap_or("");
            if let Err(e) = compile_regex(pattern, flags) {
                fail(format!("parameter '{}': {e}", spec.name));
            }
        }
    }

    let message = rc.message.unwrap_or_else(|| "{focus} violates {id}".to_string());
    if let Err(reason) = check_template(&message, fam) {
        fail(reason);
    }
    let expressivity = match &rc.expressivity {
        Some(labels) => match Expressivity::from_labels(labels.iter().map(String::as_str)) {
            Ok(e) => e,
            Err(reason) => {
                fail(reason);
                return None;
            }
        },
        None => fam.expressivity.normalized(),
    };
    let severity = rc.severity.or(file.default_severity).unwrap_or(Severity::Info);

    Some(Constraint {
        id: rc.id,
        vocabulary,
        family: fam,
        params,
        severity,
        status: rc.status,
        message,
        expressivity,
    })
}

/// Placeholder names a message template may use.
pub(crate) fn check_template(template: &str, fam: &FamilySpec) -> Result<(), String> {
    let mut rest = template;
    while let Some(start) = rest.find('{') {
        let after = &rest[start + 1..];
        let Some(end) = after.find('}') else {
            return Err("message has an unclosed '{'".into());
        };
        let name = &after[..end];
        let known = matches!(name, "focus" | "path" | "value" | "id") || fam.param(name).is_some();
        if !known {
            return Err(format!("message uses unknown placeholder '{{{name}}}'"));
        }
        rest = &after[end + 1..];
    }
    Ok(())
}

struct Resolver<'a> {
    prefixes: &'a BTreeMap<String, String>,
}

impl Resolver<'_> {
    fn iri(&self, text: &str) -> Result<Iri, String> {
        let text = text.trim();
        let full = if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            inner.to_string()
        } else if text.contains("://") || text.starts_with("urn:") {
            text.to_string()
        } else if let Some((prefix, local)) = text.split_once(':') {
            let ns = self
                .prefixes
                .get(prefix)
                .map(String::as_str)
                .or_else(|| BUILTIN_PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, ns)| *ns))
                .ok_or_else(|| format!("undeclared prefix '{prefix}'"))?;
            format!("{ns}{local}")
        } else {
            return Err(format!("'{text}' is neither an IRI nor a prefixed name"));
        };
        Iri::new(full).map_err(|e| e.to_string())
    }

    fn param(&self, kind: ParamKind, value: &Value) -> Result<ParamValue, String> {
        let want = |what: &str| format!("expected {what} for a {} parameter", kind.as_str());
        match kind {
            ParamKind::Class | ParamKind::Property | ParamKind::Datatype => {
                let s = value.as_str().ok_or_else(|| want("a string"))?;
                self.iri(s).map(ParamValue::Iri)
            }
            ParamKind::ValueSet => {
                let items = match value {
                    Value::Array(items) => items.iter().collect::<Vec<_>>(),
                    Value::String(_) => vec![value],
                    _ => return Err(want("an array of IRIs")),
                };
                let mut out = Vec::new();
                for item in items {
                    let s = item.as_str().ok_or_else(|| want("an array of IRIs"))?;
                    out.push(self.iri(s)?);
                }
                Ok(ParamValue::Iris(out))
            }
            ParamKind::Number => {
                let n = value.as_number().ok_or_else(|| want("a number"))?;
                let lit = if let Some(i) = n.as_i64() {
                    Literal::integer(i)
                } else {
                    let f = n.as_f64().filter(|f| f.is_finite()).ok_or_else(|| want("a finite number"))?;
                    let dt = Iri::new(vocab::xsd::DECIMAL).expect("static IRI");
                    Literal::typed(decimal_lexical(f), dt).map_err(|e| e.to_string())?
                };
                Ok(ParamValue::Number(lit))
            }
            ParamKind::Regex | ParamKind::Text => {
                let s = value.as_str().ok_or_else(|| want("a string"))?;
                Ok(ParamValue::Text(s.to_string()))
            }
            ParamKind::LanguageRange => {
                let s = value.as_str().ok_or_else(|| want("a string"))?;
                let ok = s == "*"
                    || (!s.is_empty()
                        && s.split('-').all(|part| {
                            (1..=8).contains(&part.len()) && part.chars().all(|c| c.is_ascii_alphanumeric())
                        }));
                if !ok {
                    return Err(format!("'{s}' is not a language range"));
                }
                Ok(ParamValue::Text(s.to_ascii_lowercase()))
            }
            ParamKind::Operator => {
                let s = value.as_str().ok_or_else(|| want("a string"))?;
                CompareOp::parse(s).map(ParamValue::Operator).ok_or_else(|| format!("unknown operator '{s}'"))
            }
        }
    }
}

fn decimal_lexical(f: f64) -> String {
    let s = format!("{f}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}
