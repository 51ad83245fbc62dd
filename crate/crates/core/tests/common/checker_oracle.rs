//! Brute-force per-node constraint semantics over a plain triple list. Each
//! family is written out directly from its definition; no patterns, plans or
//! engine expression code are involved.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rdfval_core::rdf::{Iri, Literal, Term, Triple};

use super::query_oracle::compare_terms;
use super::*;

pub type Tuple = (Term, Option<Iri>, Option<Term>);

pub const SKOS_IN_SCHEME: &str = "http://www.w3.org/2004/02/skos/core#inScheme";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

/// A family instance with concrete parameters, mirrored into catalog JSON.
#[derive(Debug, Clone)]
pub enum Spec {
    Existential { class: String, property: String },
    Universal { class: String, property: String, value_class: String, family: &'static str },
    Conditional { class: String, if_p: String, then_p: String },
    Cardinality { class: String, property: String, n: u64, bound: &'static str, value_class: Option<String> },
    Membership { property: String, schemes: Vec<String>, class: Option<String> },
    ValidForDatatype { property: Option<String>, datatype: Option<String>, class: Option<String> },
    InverseFunctional { property: String },
    LiteralRange { property: String, min: Option<i64>, max: Option<i64>, class: Option<String> },
    Facets { property: String, class: Option<String>, facets: Vec<(&'static str, i64)> },
    Comparison { property: String, other: String, op: &'static str, class: Option<String> },
    LiteralPattern { property: String, pattern: String, flags: String, class: Option<String> },
    IriPattern { class: String, pattern: String, flags: String },
    Domain { property: String, class: String },
    Range { property: String, class: String },
    ValidProperties { class: String, allowed: Vec<String> },
    Disjoint { class: String, other: String },
    LangCardinality { property: String, class: Option<String>, max: Option<u64>, required: Option<String> },
    LangMatching { property: String, range: String, class: Option<String> },
    Acyclic { property: String, class: Option<String>, depth: Option<u64> },
    Allowed { property: String, values: Vec<String>, class: Option<String> },
    Completeness { class: String, path: Vec<String> },
}

fn q(s: &str) -> String {
    serde_json::to_string(s).unwrap()
}

fn put(out: &mut Vec<(String, String)>, k: &str, v: &str) {
    out.push((k.to_string(), q(v)));
}

fn list(v: &[String]) -> String {
    format!("[{}]", v.iter().map(|s| q(s)).collect::<Vec<_>>().join(","))
}

impl Spec {
    pub fn family(&self) -> &'static str {
        match self {
            Spec::Existential { .. } => "EXISTENTIAL-QUANTIFICATION",
            Spec::Universal { family, .. } => family,
            Spec::Conditional { .. } => "CONDITIONAL-PROPERTY",
            Spec::Cardinality { bound, value_class, .. } => match (*bound, value_class.is_some()) {
                ("min", true) => "MIN-QUALIFIED-CARDINALITY",
                ("max", true) => "MAX-QUALIFIED-CARDINALITY",
                ("exact", true) => "EXACT-QUALIFIED-CARDINALITY",
                ("min", false) => "MIN-UNQUALIFIED-CARDINALITY",
                ("max", false) => "MAX-UNQUALIFIED-CARDINALITY",
                _ => "EXACT-UNQUALIFIED-CARDINALITY",
            },
            Spec::Membership { .. } => "MEMBERSHIP-IN-CONTROLLED-VOCABULARY",
            Spec::ValidForDatatype { .. } => "VALUE-IS-VALID-FOR-DATATYPE",
            Spec::InverseFunctional { .. } => "INVERSE-FUNCTIONAL-PROPERTY",
            Spec::LiteralRange { .. } => "LITERAL-RANGE",
            Spec::Facets { .. } => "DATA-PROPERTY-FACETS",
            Spec::Comparison { .. } => "LITERAL-VALUE-COMPARISON",
            Spec::LiteralPattern { .. } => "LITERAL-PATTERN-MATCHING",
            Spec::IriPattern { .. } => "IRI-PATTERN-MATCHING",
            Spec::Domain { .. } => "PROPERTY-DOMAIN",
            Spec::Range { .. } => "PROPERTY-RANGE",
            Spec::ValidProperties { .. } => "CONTEXT-SPECIFIC-VALID-PROPERTIES",
            Spec::Disjoint { .. } => "DISJOINT-CLASSES",
            Spec::LangCardinality { .. } => "LANGUAGE-TAG-CARDINALITY",
            Spec::LangMatching { .. } => "LANGUAGE-TAG-MATCHING",
            Spec::Acyclic { .. } => "STRUCTURE-ACYCLICITY",
            Spec::Allowed { .. } => "ALLOWED-VALUES",
            Spec::Completeness { .. } => "DECLARED-PROPERTY-COMPLETENESS",
        }
    }

    fn params(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        match self {
            Spec::Existential { class, property } => {
                put(&mut out, "class", class);
                put(&mut out, "property", property);
            }
            Spec::Universal { class, property, value_class, .. } => {
                put(&mut out, "class", class);
                put(&mut out, "property", property);
                put(&mut out, "value-class", value_class);
            }
            Spec::Conditional { class, if_p, then_p } => {
                put(&mut out, "class", class);
                put(&mut out, "if-property", if_p);
                put(&mut out, "then-property", then_p);
            }
            Spec::Cardinality { class, property, n, value_class, .. } => {
                put(&mut out, "class", class);
                put(&mut out, "property", property);
                if let Some(vc) = value_class {
                    put(&mut out, "value-class", vc);
                }
                out.push(("bound".into(), n.to_string()));
            }
            Spec::Membership { property, schemes, class } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                out.push(("schemes".into(), list(schemes)));
            }
            Spec::ValidForDatatype { property, datatype, class } => {
                for (k, v) in [("property", property), ("datatype", datatype), ("class", class)] {
                    if let Some(v) = v {
                        put(&mut out, k, v);
                    }
                }
            }
            Spec::InverseFunctional { property } => put(&mut out, "property", property),
            Spec::LiteralRange { property, min, max, class } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                if let Some(m) = min {
                    out.push(("min".into(), m.to_string()));
                }
                if let Some(m) = max {
                    out.push(("max".into(), m.to_string()));
                }
            }
            Spec::Facets { property, class, facets } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                for (k, v) in facets {
                    out.push((k.to_string(), v.to_string()));
                }
            }
            Spec::Comparison { property, other, op, class } => {
                put(&mut out, "property", property);
                put(&mut out, "other-property", other);
                put(&mut out, "operator", op);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
            }
            Spec::LiteralPattern { property, pattern, flags, class } => {
                put(&mut out, "property", property);
                put(&mut out, "pattern", pattern);
                put(&mut out, "flags", flags);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
            }
            Spec::IriPattern { class, pattern, flags } => {
                put(&mut out, "class", class);
                put(&mut out, "pattern", pattern);
                put(&mut out, "flags", flags);
            }
            Spec::Domain { property, class } | Spec::Range { property, class } => {
                put(&mut out, "property", property);
                put(&mut out, "class", class);
            }
            Spec::ValidProperties { class, allowed } => {
                put(&mut out, "class", class);
                out.push(("allowed".into(), list(allowed)));
            }
            Spec::Disjoint { class, other } => {
                put(&mut out, "class", class);
                put(&mut out, "other-class", other);
            }
            Spec::LangCardinality { property, class, max, required } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                if let Some(r) = required {
                    put(&mut out, "required-language", r);
                }
                if let Some(m) = max {
                    out.push(("max-per-language".into(), m.to_string()));
                }
            }
            Spec::LangMatching { property, range, class } => {
                put(&mut out, "property", property);
                put(&mut out, "range", range);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
            }
            Spec::Acyclic { property, class, depth } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                if let Some(d) = depth {
                    out.push(("max-depth".into(), d.to_string()));
                }
            }
            Spec::Allowed { property, values, class } => {
                put(&mut out, "property", property);
                if let Some(c) = class {
                    put(&mut out, "class", c);
                }
                out.push(("values".into(), list(values)));
            }
            Spec::Completeness { class, path } => {
                put(&mut out, "class", class);
                out.push(("path".into(), list(path)));
            }
        }
        out
    }

    /// A one-constraint catalog document.
    pub fn catalog_json(&self, id: &str, severity: &str) -> String {
        let params: Vec<String> = self.params().iter().map(|(k, v)| format!("{}: {v}", q(k))).collect();
        format!(
            r#"{{"vocabulary": "T", "constraints": [{{"id": {}, "family": {}, "severity": {}, "params": {{{}}}}}]}}"#,
            q(id),
            q(self.family()),
            q(severity),
            params.join(", ")
        )
    }
}

struct G {
    triples: BTreeSet<Triple>,
}

impl G {
    fn new(ts: &[Triple]) -> Self {
        G { triples: ts.iter().cloned().collect() }
    }

    fn has(&self, s: &Term, p: &str, o: &Term) -> bool {
        self.triples.iter().any(|t| &t.subject == s && t.predicate.as_str() == p && &t.object == o)
    }

    fn typed(&self, s: &Term, class: &str) -> bool {
        self.has(s, RDF_TYPE, &Term::iri(class).unwrap())
    }

    fn instances(&self, class: &str) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .triples
            .iter()
            .filter(|t| t.predicate.as_str() == RDF_TYPE && t.object == Term::iri(class).unwrap())
            .map(|t| t.subject.clone())
            .collect();
        out.dedup();
        out
    }

    fn values(&self, s: &Term, p: &str) -> Vec<Term> {
        self.triples
            .iter()
            .filter(|t| &t.subject == s && t.predicate.as_str() == p)
            .map(|t| t.object.clone())
            .collect()
    }

    /// (subject, object) pairs of `p`, restricted to subjects typed `class`.
    fn pairs(&self, p: &str, class: Option<&str>) -> Vec<(Term, Term)> {
        self.triples
            .iter()
            .filter(|t| t.predicate.as_str() == p)
            .filter(|t| class.is_none_or(|c| self.typed(&t.subject, c)))
            .map(|t| (t.subject.clone(), t.object.clone()))
            .collect()
    }
}

fn number(i: i64) -> Term {
    Term::Literal(Literal::integer(i))
}

fn cmp(op: &str, a: &Term, b: &Term) -> Option<bool> {
    compare_terms(op, a, b)
}

/// Lexical validity for the datatypes the generators produce.
pub fn valid_lexical(lex: &str, dt: &str) -> bool {
    let int = |s: &str| {
        let body = s.strip_prefix(['+', '-']).unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    match dt {
        XSD_INTEGER => int(lex),
        "http://www.w3.org/2001/XMLSchema#nonNegativeInteger" => {
            int(lex) && (!lex.starts_with('-') || lex[1..].bytes().all(|b| b == b'0'))
        }
        XSD_DATE => {
            let b = lex.as_bytes();
            if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
                return false;
            }
            let num = |r: std::ops::Range<usize>| lex[r].parse::<u32>().ok();
            let (Some(y), Some(m), Some(d)) = (num(0..4), num(5..7), num(8..10)) else {
                return false;
            };
            let leap = y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
            let days = [31, if leap { 29 } else { 28 }, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
            lex[0..4].bytes().all(|c| c.is_ascii_digit()) && (1..=12).contains(&m) && d >= 1 && d <= days[m as usize - 1]
        }
        _ => !lex.chars().any(|c| matches!(c as u32, 0..=0x8 | 0xB | 0xC | 0xE..=0x1F)),
    }
}

fn regex_ok(text: &str, pattern: &str, flags: &str) -> bool {
    let (text, pattern) = if flags.contains('i') {
        (text.to_lowercase(), pattern.to_lowercase())
    } else {
        (text.to_string(), pattern.to_string())
    };
    match pattern.as_str() {
        p if p.starts_with('^') => text.starts_with(&p[1..]),
        p if p.ends_with('$') => text.ends_with(&p[..p.len() - 1]),
        p => text.contains(p),
    }
}

fn lang_ok(tag: &str, range: &str) -> bool {
    if range == "*" {
        !tag.is_empty()
    } else {
        tag == range || tag.starts_with(&format!("{range}-"))
    }
}

fn str_len(t: &Term) -> Option<i64> {
    t.as_literal().map(|l| l.lexical().chars().count() as i64)
}

/// The violating (focus, path, value) tuples of `spec` over `ts`.
pub fn violations(ts: &[Triple], spec: &Spec) -> BTreeSet<Tuple> {
    let g = G::new(ts);
    let mut out = BTreeSet::new();
    let mut add = |f: &Term, p: Option<&str>, v: Option<&Term>| {
        out.insert((f.clone(), p.map(|s| Iri::new(s).unwrap()), v.cloned()));
    };
    match spec {
        Spec::Existential { class, property } => {
            for x in g.instances(class) {
                if g.values(&x, property).is_empty() {
                    add(&x, Some(property), None);
                }
            }
        }
        Spec::Universal { class, property, value_class, .. } => {
            for x in g.instances(class) {
                for v in g.values(&x, property) {
                    if !g.typed(&v, value_class) {
                        add(&x, Some(property), Some(&v));
                    }
                }
            }
        }
        Spec::Conditional { class, if_p, then_p } => {
            for x in g.instances(class) {
                if !g.values(&x, if_p).is_empty() && g.values(&x, then_p).is_empty() {
                    add(&x, Some(then_p), None);
                }
            }
        }
        Spec::Cardinality { class, property, n, bound, value_class } => {
            for x in g.instances(class) {
                let k = g
                    .values(&x, property)
                    .iter()
                    .filter(|v| value_class.as_ref().is_none_or(|vc| g.typed(v, vc)))
                    .count() as u64;
                let bad = match *bound {
                    "min" => k < *n,
                    "max" => k > *n,
                    _ => k != *n,
                };
                if bad {
                    add(&x, Some(property), None);
                }
            }
        }
        Spec::Membership { property, schemes, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                let member = schemes.iter().any(|s| g.has(&v, SKOS_IN_SCHEME, &Term::iri(s).unwrap()));
                if !member {
                    add(&x, Some(property), Some(&v));
                }
            }
        }
        Spec::ValidForDatatype { property, datatype, class } => {
            for t in &g.triples {
                if property.as_ref().is_some_and(|p| t.predicate.as_str() != p) {
                    continue;
                }
                if class.as_ref().is_some_and(|c| !g.typed(&t.subject, c)) {
                    continue;
                }
                let bad = match (&t.object, datatype) {
                    (Term::Literal(l), Some(dt)) => !valid_lexical(l.lexical(), dt),
                    (_, Some(_)) => true,
                    (Term::Literal(l), None) => !valid_lexical(l.lexical(), l.datatype().as_str()),
                    (_, None) => false,
                };
                if bad {
                    add(&t.subject, Some(t.predicate.as_str()), Some(&t.object));
                }
            }
        }
        Spec::InverseFunctional { property } => {
            let pairs = g.pairs(property, None);
            for (x, v) in &pairs {
                if pairs.iter().any(|(y, w)| w == v && y != x) {
                    add(x, Some(property), Some(v));
                }
            }
        }
        Spec::LiteralRange { property, min, max, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                let low = min.is_some_and(|m| cmp("<", &v, &number(m)) == Some(true));
                let high = max.is_some_and(|m| cmp(">", &v, &number(m)) == Some(true));
                if low || high {
                    add(&x, Some(property), Some(&v));
                }
            }
        }
        Spec::Facets { property, class, facets } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                let bad = facets.iter().any(|(name, b)| match *name {
                    "min-inclusive" => cmp("<", &v, &number(*b)) == Some(true),
                    "max-inclusive" => cmp(">", &v, &number(*b)) == Some(true),
                    "min-exclusive" => cmp("<=", &v, &number(*b)) == Some(true),
                    "max-exclusive" => cmp(">=", &v, &number(*b)) == Some(true),
                    "min-length" => str_len(&v).is_some_and(|n| n < *b),
                    "max-length" => str_len(&v).is_some_and(|n| n > *b),
                    other => panic!("facet {other}"),
                });
                if bad {
                    add(&x, Some(property), Some(&v));
                }
            }
        }
        Spec::Comparison { property, other, op, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                for w in g.values(&x, other) {
                    if cmp(op, &v, &w) == Some(false) {
                        add(&x, Some(property), Some(&v));
                    }
                }
            }
        }
        Spec::LiteralPattern { property, pattern, flags, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                if let Term::Literal(l) = &v {
                    if !regex_ok(l.lexical(), pattern, flags) {
                        add(&x, Some(property), Some(&v));
                    }
                }
            }
        }
        Spec::IriPattern { class, pattern, flags } => {
            for x in g.instances(class) {
                if let Term::Iri(i) = &x {
                    if !regex_ok(i.as_str(), pattern, flags) {
                        add(&x, None, None);
                    }
                }
            }
        }
        Spec::Domain { property, class } => {
            for (x, _) in g.pairs(property, None) {
                if !g.typed(&x, class) {
                    add(&x, Some(property), None);
                }
            }
        }
        Spec::Range { property, class } => {
            for (x, v) in g.pairs(property, None) {
                if !g.typed(&v, class) {
                    add(&x, Some(property), Some(&v));
                }
            }
        }
        Spec::ValidProperties { class, allowed } => {
            for x in g.instances(class) {
                for t in g.triples.iter().filter(|t| t.subject == x) {
                    let p = t.predicate.as_str();
                    if p != RDF_TYPE && !allowed.iter().any(|a| a == p) {
                        add(&x, Some(p), Some(&t.object));
                    }
                }
            }
        }
        Spec::Disjoint { class, other } => {
            for x in g.instances(class) {
                if g.typed(&x, other) {
                    add(&x, Some(RDF_TYPE), None);
                }
            }
        }
        Spec::LangCardinality { property, class, max, required } => {
            if let Some(n) = max {
                let foci: BTreeSet<Term> = g.pairs(property, class.as_deref()).into_iter().map(|(x, _)| x).collect();
                for x in foci {
                    let mut per_tag: std::collections::BTreeMap<String, u64> = Default::default();
                    for v in g.values(&x, property) {
                        if let Some(tag) = v.as_literal().and_then(|l| l.language()) {
                            *per_tag.entry(tag.to_string()).or_default() += 1;
                        }
                    }
                    for (tag, k) in per_tag {
                        if k > *n {
                            add(&x, Some(property), Some(&Term::Literal(Literal::string(tag))));
                        }
                    }
                }
            }
            if let Some(range) = required {
                let foci: Vec<Term> = match class {
                    Some(c) => g.instances(c),
                    None => g.pairs(property, None).into_iter().map(|(x, _)| x).collect(),
                };
                for x in foci {
                    let ok = g
                        .values(&x, property)
                        .iter()
                        .any(|w| w.as_literal().is_some_and(|l| lang_ok(l.language().unwrap_or(""), range)));
                    if !ok {
                        add(&x, Some(property), None);
                    }
                }
            }
        }
        Spec::LangMatching { property, range, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                if let Term::Literal(l) = &v {
                    if !lang_ok(l.language().unwrap_or(""), range) {
                        add(&x, Some(property), Some(&v));
                    }
                }
            }
        }
        Spec::Acyclic { property, class, depth } => {
            let d = depth.unwrap_or(20) as usize;
            let foci: BTreeSet<Term> = match class {
                Some(c) => g.instances(c).into_iter().collect(),
                None => g.pairs(property, None).into_iter().map(|(x, _)| x).collect(),
            };
            let edges = g.pairs(property, None);
            for x in foci {
                let mut frontier: HashSet<Term> = [x.clone()].into_iter().collect();
                for _ in 0..d {
                    frontier = edges.iter().filter(|(s, _)| frontier.contains(s)).map(|(_, o)| o.clone()).collect();
                    if frontier.contains(&x) {
                        add(&x, Some(property), None);
                        break;
                    }
                }
            }
        }
        Spec::Allowed { property, values, class } => {
            for (x, v) in g.pairs(property, class.as_deref()) {
                if !values.iter().any(|a| v == Term::iri(a).unwrap()) {
                    add(&x, Some(property), Some(&v));
                }
            }
        }
        Spec::Completeness { class, path } => {
            for x in g.instances(class) {
                let mut frontier: BTreeSet<Term> = [x.clone()].into_iter().collect();
                for hop in path {
                    frontier = frontier.iter().flat_map(|n| g.values(n, hop)).collect();
                }
                for q in frontier {
                    let present = g.triples.iter().any(|t| t.subject == x && Term::Iri(t.predicate.clone()) == q);
                    if !present {
                        add(&x, q.as_iri().map(Iri::as_str), None);
                    }
                }
            }
        }
    }
    out
}

// ---- generators ----------------------------------------------------------

pub const MAX_NODES: usize = 200;

fn ex(local: &str) -> String {
    format!("{EX}{local}")
}

fn class_name() -> impl Strategy<Value = String> {
    (0..CLASSES.len()).prop_map(|i| ex(CLASSES[i]))
}

fn prop_name() -> impl Strategy<Value = String> {
    (0..PREDICATES.len()).prop_map(|i| ex(PREDICATES[i]))
}

fn opt_class() -> impl Strategy<Value = Option<String>> {
    prop::option::of(class_name())
}

/// Objects for the checker graphs: nodes, classes, numbers, strings,
/// tagged strings, dates and ill-formed typed literals.
fn object(nodes: usize) -> impl Strategy<Value = Term> {
    prop_oneof![
        5 => (0..nodes).prop_map(node),
        1 => (0..CLASSES.len()).prop_map(|i| iri(CLASSES[i])),
        1 => (0..PREDICATES.len()).prop_map(|i| iri(PREDICATES[i])),
        2 => (-2i64..6).prop_map(int),
        1 => prop::sample::select(vec!["a", "b", "A", " a", "ab", "abc"]).prop_map(string),
        2 => (prop::sample::select(vec!["x", "y"]), prop::sample::select(vec!["en", "de", "en-gb"]))
            .prop_map(|(s, t)| lang(s, t)),
        1 => prop::sample::select(vec!["2015-01-01", "2014-12-31", "bad"]).prop_map(|d| typed(d, XSD_DATE)),
        1 => prop::sample::select(vec!["x1", "-1", "07"]).prop_map(|d| typed(d, XSD_INTEGER)),
    ]
}

fn checker_triple(nodes: usize) -> impl Strategy<Value = Triple> {
    let in_scheme = Iri::new(SKOS_IN_SCHEME).unwrap();
    prop_oneof![
        6 => (0..nodes, 0..PREDICATES.len(), object(nodes)).prop_map(|(s, p, o)| triple(node(s), pred(PREDICATES[p]), o)),
        3 => (0..nodes, 0..CLASSES.len()).prop_map(|(s, c)| triple(node(s), rdf_type(), iri(CLASSES[c]))),
        1 => (0..nodes, 0..4usize).prop_map(move |(s, k)| triple(node(s), in_scheme.clone(), node(k))),
    ]
}

/// Graphs of up to 200 nodes and 600 triples; small node counts are
/// favoured so that joins and cycles actually occur.
pub fn checker_graph() -> impl Strategy<Value = Vec<Triple>> {
    prop_oneof![
        3 => (1usize..=12, 0usize..=60),
        1 => (13usize..=MAX_NODES, 0usize..=600),
    ]
    .prop_flat_map(|(nodes, len)| prop::collection::vec(checker_triple(nodes), len))
}

fn node_names(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec((0..12usize).prop_map(|i| ex(&format!("n{i}"))), 0..=max)
}

fn prop_names(max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop_name(), 0..=max)
}

pub fn spec_for(family: &str) -> BoxedStrategy<Spec> {
    match family {
        "EXISTENTIAL-QUANTIFICATION" => {
            (class_name(), prop_name()).prop_map(|(class, property)| Spec::Existential { class, property }).boxed()
        }
        "UNIVERSAL-QUANTIFICATION" | "CLASS-SPECIFIC-PROPERTY-RANGE" => {
            let family: &'static str =
                if family == "UNIVERSAL-QUANTIFICATION" { "UNIVERSAL-QUANTIFICATION" } else { "CLASS-SPECIFIC-PROPERTY-RANGE" };
            (class_name(), prop_name(), class_name())
                .prop_map(move |(class, property, value_class)| Spec::Universal { class, property, value_class, family })
                .boxed()
        }
        "CONDITIONAL-PROPERTY" => (class_name(), prop_name(), prop_name())
            .prop_map(|(class, if_p, then_p)| Spec::Conditional { class, if_p, then_p })
            .boxed(),
        "CARDINALITY" => (
            class_name(),
            prop_name(),
            0u64..4,
            prop::sample::select(vec!["min", "max", "exact"]),
            opt_class(),
        )
            .prop_map(|(class, property, n, bound, value_class)| Spec::Cardinality { class, property, n, bound, value_class })
            .boxed(),
        "MEMBERSHIP-IN-CONTROLLED-VOCABULARY" => (prop_name(), node_names(2).prop_filter("non-empty", |v| !v.is_empty()), opt_class())
            .prop_map(|(property, schemes, class)| Spec::Membership { property, schemes, class })
            .boxed(),
        "VALUE-IS-VALID-FOR-DATATYPE" => (
            prop::option::of(prop_name()),
            prop::option::of(prop::sample::select(vec![XSD_INTEGER, XSD_DATE, XSD_STRING]).prop_map(str::to_string)),
            opt_class(),
        )
            .prop_map(|(property, datatype, class)| Spec::ValidForDatatype { property, datatype, class })
            .boxed(),
        "INVERSE-FUNCTIONAL-PROPERTY" => prop_name().prop_map(|property| Spec::InverseFunctional { property }).boxed(),
        "LITERAL-RANGE" => (prop_name(), prop::option::of(-1i64..4), prop::option::of(0i64..5), opt_class())
            .prop_filter("a bound", |(_, a, b, _)| a.is_some() || b.is_some())
            .prop_map(|(property, min, max, class)| Spec::LiteralRange { property, min, max, class })
            .boxed(),
        "DATA-PROPERTY-FACETS" => {
            let name = prop::sample::select(vec![
                "min-inclusive",
                "max-inclusive",
                "min-exclusive",
                "max-exclusive",
                "min-length",
                "max-length",
            ]);
            (prop_name(), opt_class(), prop::collection::btree_map(name, 0i64..4, 1..3))
                .prop_map(|(property, class, facets)| Spec::Facets { property, class, facets: facets.into_iter().collect() })
                .boxed()
        }
        "LITERAL-VALUE-COMPARISON" => (
            prop_name(),
            prop_name(),
            prop::sample::select(vec!["<", "<=", "=", "!=", ">=", ">"]),
            opt_class(),
        )
            .prop_map(|(property, other, op, class)| Spec::Comparison { property, other, op, class })
            .boxed(),
        "LITERAL-PATTERN-MATCHING" => (
            prop_name(),
            prop::sample::select(vec!["^a", "b$", "a", "^x", "c"]),
            prop::sample::select(vec!["", "i"]),
            opt_class(),
        )
            .prop_map(|(property, pattern, flags, class)| Spec::LiteralPattern {
                property,
                pattern: pattern.into(),
                flags: flags.into(),
                class,
            })
            .boxed(),
        "IRI-PATTERN-MATCHING" => (
            class_name(),
            prop::sample::select(vec!["^http://ex/n1", "1$", "n", "N1"]),
            prop::sample::select(vec!["", "i"]),
        )
            .prop_map(|(class, pattern, flags)| Spec::IriPattern { class, pattern: pattern.into(), flags: flags.into() })
            .boxed(),
        "PROPERTY-DOMAIN" => (prop_name(), class_name()).prop_map(|(property, class)| Spec::Domain { property, class }).boxed(),
        "PROPERTY-RANGE" => (prop_name(), class_name()).prop_map(|(property, class)| Spec::Range { property, class }).boxed(),
        "CONTEXT-SPECIFIC-VALID-PROPERTIES" => (class_name(), prop_names(3))
            .prop_map(|(class, allowed)| Spec::ValidProperties { class, allowed })
            .boxed(),
        "DISJOINT-CLASSES" => (class_name(), class_name()).prop_map(|(class, other)| Spec::Disjoint { class, other }).boxed(),
        "LANGUAGE-TAG-CARDINALITY" => (
            prop_name(),
            opt_class(),
            prop::option::of(0u64..3),
            prop::option::of(prop::sample::select(vec!["en", "de", "*", "en-gb"]).prop_map(str::to_string)),
        )
            .prop_filter("a mode", |(_, _, m, r)| m.is_some() || r.is_some())
            .prop_map(|(property, class, max, required)| Spec::LangCardinality { property, class, max, required })
            .boxed(),
        "LANGUAGE-TAG-MATCHING" => (
            prop_name(),
            prop::sample::select(vec!["en", "de", "*", "en-gb"]).prop_map(str::to_string),
            opt_class(),
        )
            .prop_map(|(property, range, class)| Spec::LangMatching { property, range, class })
            .boxed(),
        "STRUCTURE-ACYCLICITY" => (prop_name(), opt_class(), prop::option::of(1u64..5))
            .prop_map(|(property, class, depth)| Spec::Acyclic { property, class, depth })
            .boxed(),
        "ALLOWED-VALUES" => (prop_name(), node_names(4), opt_class())
            .prop_map(|(property, values, class)| Spec::Allowed { property, values, class })
            .boxed(),
        "DECLARED-PROPERTY-COMPLETENESS" => (class_name(), prop_names(3).prop_filter("non-empty", |v| !v.is_empty()))
            .prop_map(|(class, path)| Spec::Completeness { class, path })
            .boxed(),
        other => panic!("no generator for {other}"),
    }
}
