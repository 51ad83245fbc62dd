//! Compiles catalog constraints to kernel patterns and runs them over a
//! graph, producing one outcome per constraint.

mod compile;
mod report_graph;

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use compile::{compile, Branch, CompileError, Compiled, PathSource, DEFAULT_CYCLE_DEPTH};
pub use report_graph::{violations_to_graph, REPORT_NS};

use crate::model::{Catalog, Constraint, Severity};
use crate::query::plan;
use crate::rdf::{Graph, Iri, Term, TermId};

pub const DEFAULT_LIMIT: usize = 10_000;
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub constraint_id: String,
    pub severity: Severity,
    #[serde(with = "term_text")]
    pub focus: Term,
    #[serde(with = "opt_iri_text", default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Iri>,
    #[serde(with = "opt_term_text", default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Term>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OutcomeStatus {
    Ok,
    Violated { count: usize },
    Truncated { limit: usize },
    EngineFailure { reason: String },
    NotImplemented,
}

impl fmt::Display for OutcomeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeStatus::Ok => f.write_str("ok"),
            OutcomeStatus::Violated { count } => write!(f, "violated({count})"),
            OutcomeStatus::Truncated { limit } => write!(f, "truncated({limit})"),
            OutcomeStatus::EngineFailure { reason } => write!(f, "engine-failure({reason})"),
            OutcomeStatus::NotImplemented => f.write_str("not-implemented"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub constraint_id: String,
    #[serde(flatten)]
    pub status: OutcomeStatus,
    #[serde(default)]
    pub violations: Vec<Violation>,
    #[serde(with = "millis", default)]
    pub wall_time: Duration,
    /// Set when the data came from a source that could not be read in
    /// full; holds the reason.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_incomplete: Option<String>,
}

impl CheckOutcome {
    /// Violations found, or the limit when truncated.
    pub fn count(&self) -> usize {
        match self.status {
            OutcomeStatus::Violated { count } => count,
            OutcomeStatus::Truncated { limit } => limit,
            _ => 0,
        }
    }

    pub fn is_violated(&self) -> bool {
        matches!(self.status, OutcomeStatus::Violated { .. } | OutcomeStatus::Truncated { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Per-constraint cap on collected violations; `None` is unbounded.
    pub limit: Option<usize>,
    /// Per-constraint wall-clock budget; `None` is unbounded.
    pub budget: Option<Duration>,
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { limit: Some(DEFAULT_LIMIT), budget: Some(DEFAULT_BUDGET), parallel: true }
    }
}

impl CheckOptions {
    pub fn unbounded() -> Self {
        CheckOptions { limit: None, budget: None, parallel: true }
    }
}

/// Checks every constraint of `catalog` against `g`, in catalog order.
pub fn check(g: &Graph, catalog: &Catalog, limit: Option<usize>, budget: Option<Duration>) -> Vec<CheckOutcome> {
    check_with(g, catalog, &CheckOptions { limit, budget, parallel: true })
}

pub fn check_with(g: &Graph, catalog: &Catalog, opts: &CheckOptions) -> Vec<CheckOutcome> {
    if opts.parallel {
        catalog.constraints().par_iter().map(|c| check_constraint(g, c, opts)).collect()
    } else {
        catalog.iter().map(|c| check_constraint(g, c, opts)).collect()
    }
}

pub fn check_constraint(g: &Graph, c: &Constraint, opts: &CheckOptions) -> CheckOutcome {
    let start = Instant::now();
    let outcome = |status, violations| CheckOutcome {
        constraint_id: c.id.clone(),
        status,
        violations,
        wall_time: start.elapsed(),
        source_incomplete: None,
    };
    if !c.is_implemented() {
        return outcome(OutcomeStatus::NotImplemented, Vec::new());
    }
    let compiled = match compile(c) {
        Ok(x) => x,
        Err(e) => return outcome(OutcomeStatus::EngineFailure { reason: e.reason }, Vec::new()),
    };
    let deadline = opts.budget.map(|b| start + b);
    let mut sink = Sink { seen: HashSet::new(), found: Vec::new(), cap: opts.limit.map(|l| l + 1) };
    let run = match &compiled {
        Compiled::Query(branches) => run_branches(g, branches, deadline, &mut sink),
        Compiled::Reachability { property, class, max_depth } => {
            reachability(g, property, class.as_ref(), *max_depth, deadline, &mut sink)
        }
    };
    if let Err(reason) = run {
        return outcome(OutcomeStatus::EngineFailure { reason }, Vec::new());
    }
    let mut tuples = sink.found;
    tuples.sort_by_cached_key(|(f, p, v)| (f.to_ntriples(), p.clone(), v.as_ref().map(Term::to_ntriples)));
    let truncated = opts.limit.is_some_and(|l| tuples.len() > l);
    if let Some(l) = opts.limit {
        tuples.truncate(l);
    }
    let violations: Vec<Violation> = tuples
        .into_iter()
        .map(|(focus, path, value)| {
            let message = render_message(c, &focus, path.as_ref(), value.as_ref());
            Violation { constraint_id: c.id.clone(), severity: c.severity, focus, path, value, message }
        })
        .collect();
    let status = if truncated {
        OutcomeStatus::Truncated { limit: violations.len() }
    } else if violations.is_empty() {
        OutcomeStatus::Ok
    } else {
        OutcomeStatus::Violated { count: violations.len() }
    };
    outcome(status, violations)
}

type Tuple = (Term, Option<Iri>, Option<Term>);

/// Distinct violation tuples, stopping once `cap` are held.
struct Sink {
    seen: HashSet<Tuple>,
    found: Vec<Tuple>,
    cap: Option<usize>,
}

impl Sink {
    fn full(&self) -> bool {
        self.cap.is_some_and(|c| self.found.len() >= c)
    }

    fn push(&mut self, t: Tuple) -> ControlFlow<()> {
        if self.full() {
            return ControlFlow::Break(());
        }
        if !t.0.is_literal() && self.seen.insert(t.clone()) {
            self.found.push(t);
        }
        if self.full() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }
}

const BUDGET: &str = "budget";

fn run_branches(g: &Graph, branches: &[Branch], deadline: Option<Instant>, sink: &mut Sink) -> Result<(), String> {
    for b in branches {
        if sink.full() {
            break;
        }
        let p = plan(g, &b.pattern).map_err(|e| e.to_string())?;
        let focus = p.var_index(&b.focus).ok_or("focus variable is not bound")?;
        let path_slot = match &b.path {
            PathSource::Var(v) => Some(p.var_index(v).ok_or("path variable is not bound")?),
            _ => None,
        };
        let value_slot = match &b.value {
            Some(v) => Some(p.var_index(v).ok_or("value variable is not bound")?),
            None => None,
        };
        p.run(g, deadline, |s| {
            let Some(f) = s.term_at(focus) else {
                return ControlFlow::Continue(());
            };
            let path = match (&b.path, path_slot) {
                (PathSource::Fixed(i), _) => Some(i.clone()),
                (PathSource::Var(_), Some(i)) => s.term_at(i).and_then(Term::as_iri).cloned(),
                _ => None,
            };
            let value = value_slot.and_then(|i| s.term_at(i)).cloned();
            sink.push((f.clone(), path, value))
        })
        .map_err(|_| BUDGET.to_string())?;
    }
    Ok(())
}

/// Bounded breadth-first search from every candidate node back to itself.
fn reachability(
    g: &Graph,
    property: &Iri,
    class: Option<&Iri>,
    max_depth: usize,
    deadline: Option<Instant>,
    sink: &mut Sink,
) -> Result<(), String> {
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    if expired() {
        return Err(BUDGET.into());
    }
    let Some(p) = g.id_of_iri(property.as_str()) else {
        return Ok(());
    };
    let succ = |n: TermId| -> Vec<TermId> { g.match_ids(Some(n), Some(p), None).map(|[_, _, o]| o).collect() };
    let mut starts: Vec<TermId> = match class {
        Some(c) => g.instances_of(c.as_str()),
        None => g.match_ids(None, Some(p), None).map(|[s, _, _]| s).collect(),
    };
    starts.sort_unstable();
    starts.dedup();
    for (i, &start) in starts.iter().enumerate() {
        if i % 64 == 0 && expired() {
            return Err(BUDGET.into());
        }
        let mut seen = HashSet::new();
        let mut queue: VecDeque<(TermId, usize)> = succ(start).into_iter().map(|n| (n, 1)).collect();
        let mut cyclic = false;
        while let Some((n, d)) = queue.pop_front() {
            if n == start {
                cyclic = true;
                break;
            }
            if d >= max_depth || !seen.insert(n) {
                continue;
            }
            queue.extend(succ(n).into_iter().map(|m| (m, d + 1)));
        }
        if cyclic && sink.push((g.term(start).clone(), Some(property.clone()), None)).is_break() {
            break;
        }
    }
    Ok(())
}

/// Substitutes `{focus}`, `{path}`, `{value}`, `{id}` and parameter names.
pub fn render_message(c: &Constraint, focus: &Term, path: Option<&Iri>, value: Option<&Term>) -> String {
    let mut out = String::with_capacity(c.message.len() + 32);
    let mut rest = c.message.as_str();
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let after = &rest[start + 1..];
        let Some(end) = after.find('}') else {
            out.push_str(&rest[start..]);
            rest = "";
            break;
        };
        let name = &after[..end];
        match name {
            "focus" => out.push_str(&focus.to_ntriples()),
            "path" => out.push_str(&path.map(|p| Term::Iri(p.clone()).to_ntriples()).unwrap_or_default()),
            "value" => out.push_str(&value.map(Term::to_ntriples).unwrap_or_default()),
            "id" => out.push_str(&c.id),
            other => match c.params.get(other) {
                Some(v) => out.push_str(&v.to_string()),
                None => {}
            },
        }
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    out
}

mod term_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rdf::{parse_term, Term};

    pub fn serialize<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_ntriples())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let text = String::deserialize(d)?;
        parse_term(&text).map_err(serde::de::Error::custom)
    }
}

mod opt_term_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rdf::{parse_term, Term};

    pub fn serialize<S: Serializer>(t: &Option<Term>, s: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(t) => s.serialize_str(&t.to_ntriples()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Term>, D::Error> {
        match Option::<String>::deserialize(d)? {
            Some(text) => parse_term(&text).map(Some).map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}

mod opt_iri_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rdf::Iri;

    pub fn serialize<S: Serializer>(t: &Option<Iri>, s: S) -> Result<S::Ok, S::Error> {
        match t {
            Some(i) => s.serialize_str(i.as_str()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Iri>, D::Error> {
        match Option::<String>::deserialize(d)? {
            Some(text) => Iri::new(text).map(Some).map_err(serde::de::Error::custom),
            None => Ok(None),
        }
    }
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}
