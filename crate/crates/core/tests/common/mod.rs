//! Random graph generators and independent oracles shared by the property
//! suites. Nothing here calls into the engine's evaluation code.

#![allow(dead_code)]

pub mod checker_oracle;
pub mod query_oracle;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rdfval_core::rdf::{Graph, GraphBuilder, Iri, Literal, Term, Triple};

pub const EX: &str = "http://ex/";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";

pub fn iri(local: &str) -> Term {
    Term::iri(&format!("{EX}{local}")).unwrap()
}

pub fn pred(local: &str) -> Iri {
    Iri::new(format!("{EX}{local}")).unwrap()
}

pub fn rdf_type() -> Iri {
    Iri::new(RDF_TYPE).unwrap()
}

pub fn int(v: i64) -> Term {
    Term::Literal(Literal::integer(v))
}

pub fn typed(lex: &str, dt: &str) -> Term {
    Term::Literal(Literal::typed(lex, Iri::new(dt).unwrap()).unwrap())
}

pub fn string(s: &str) -> Term {
    Term::Literal(Literal::string(s))
}

pub fn lang(s: &str, tag: &str) -> Term {
    Term::Literal(Literal::lang(s, tag).unwrap())
}

pub fn triple(s: Term, p: Iri, o: Term) -> Triple {
    Triple::new(s, p, o).unwrap()
}

pub fn graph(triples: impl IntoIterator<Item = Triple>) -> Graph {
    triples.into_iter().collect()
}

/// Small fixed vocabularies so random graphs have many collisions.
pub const NODES: usize = 12;
pub const PREDICATES: [&str; 4] = ["p0", "p1", "p2", "p3"];
pub const CLASSES: [&str; 3] = ["C0", "C1", "C2"];

pub fn node(i: usize) -> Term {
    iri(&format!("n{i}"))
}

pub fn any_object() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => (0..NODES).prop_map(node),
        1 => (0..CLASSES.len()).prop_map(|i| iri(CLASSES[i])),
        2 => (-2i64..6).prop_map(int),
        1 => prop::sample::select(vec!["a", "b", "A", " a", "ab"]).prop_map(string),
        1 => (prop::sample::select(vec!["x", "y"]), prop::sample::select(vec!["en", "de", "en-gb"]))
            .prop_map(|(s, t)| lang(s, t)),
        1 => prop::sample::select(vec!["2015-01-01", "2014-12-31", "bad"]).prop_map(|d| typed(d, XSD_DATE)),
        1 => prop::sample::select(vec!["x1", "-1", "07"]).prop_map(|d| typed(d, XSD_INTEGER)),
    ]
}

pub fn any_triple() -> impl Strategy<Value = Triple> {
    prop_oneof![
        3 => ((0..NODES), 0..PREDICATES.len(), any_object())
            .prop_map(|(s, p, o)| triple(node(s), pred(PREDICATES[p]), o)),
        1 => ((0..NODES), 0..CLASSES.len())
            .prop_map(|(s, c)| triple(node(s), rdf_type(), iri(CLASSES[c]))),
    ]
}

pub fn any_graph(max: usize) -> impl Strategy<Value = Vec<Triple>> {
    prop::collection::vec(any_triple(), 0..=max)
}

/// Terms generated for parser round-trips: awkward characters included.
pub fn any_rich_term(blank: bool) -> BoxedStrategy<Term> {
    let text = || prop::string::string_regex("[a-zA-Z0-9 \"\\\\\n\r\t\u{1}é€😀<>#]{0,8}").unwrap();
    let lit = prop_oneof![
        text().prop_map(|s| Term::Literal(Literal::string(s))),
        (text(), prop::sample::select(vec!["en", "EN-us", "de-CH-1996"]))
            .prop_map(|(s, t)| Term::Literal(Literal::lang(s, t).unwrap())),
        (text(), prop::sample::select(vec![XSD_INTEGER, XSD_DATE, "http://ex/dt#x"]))
            .prop_map(|(s, d)| typed(&s, d)),
    ];
    let iri = prop::string::string_regex("[a-z0-9/#é\u{10000}]{0,6}")
        .unwrap()
        .prop_map(|s| Term::iri(&format!("http://ex/{s}")).unwrap());
    if blank {
        prop_oneof![
            2 => iri,
            1 => (0u8..6).prop_map(|i| Term::blank(format!("x{i}")).unwrap()),
            2 => lit,
        ]
        .boxed()
    } else {
        prop_oneof![iri, lit].boxed()
    }
}

pub fn any_rich_triple() -> impl Strategy<Value = Triple> {
    let subject = any_rich_term(true).prop_filter("non-literal subject", |t| !t.is_literal());
    let predicate = prop::sample::select(vec!["http://ex/p", "http://ex/q", RDF_TYPE])
        .prop_map(|p| Iri::new(p).unwrap());
    (subject, predicate, any_rich_term(true)).prop_map(|(s, p, o)| triple(s, p, o))
}

/// Builds a graph, preserving blank labels as given.
pub fn build(triples: &[Triple]) -> Graph {
    let mut b = GraphBuilder::new();
    for t in triples {
        b.insert(t);
    }
    b.freeze()
}

/// Graph equality up to a bijection of blank nodes, by backtracking search.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ta: Vec<Triple> = a.triples().collect();
    let tb: BTreeSet<Triple> = b.triples().collect();
    let blanks = |ts: &mut dyn Iterator<Item = Triple>| -> Vec<String> {
        let mut out = BTreeSet::new();
        for t in ts {
            for term in [&t.subject, &t.object] {
                if let Term::BlankNode(l) = term {
                    out.insert(l.clone());
                }
            }
        }
        out.into_iter().collect()
    };
    let ba = blanks(&mut ta.iter().cloned());
    let bb = blanks(&mut tb.iter().cloned());
    if ba.len() != bb.len() {
        return false;
    }
    // Degree signatures prune the search.
    let signature = |ts: &[Triple], label: &str| -> (usize, usize) {
        let is = |t: &Term| matches!(t, Term::BlankNode(l) if l == label);
        (ts.iter().filter(|t| is(&t.subject)).count(), ts.iter().filter(|t| is(&t.object)).count())
    };
    let tbv: Vec<Triple> = tb.iter().cloned().collect();
    let sig_a: Vec<_> = ba.iter().map(|l| signature(&ta, l)).collect();
    let sig_b: Vec<_> = bb.iter().map(|l| signature(&tbv, l)).collect();

    fn rename(t: &Term, m: &BTreeMap<String, String>) -> Term {
        match t {
            Term::BlankNode(l) => Term::BlankNode(m[l].clone()),
            other => other.clone(),
        }
    }
    fn search(
        i: usize,
        ba: &[String],
        bb: &[String],
        sig_a: &[(usize, usize)],
        sig_b: &[(usize, usize)],
        used: &mut Vec<bool>,
        m: &mut BTreeMap<String, String>,
        ta: &[Triple],
        tb: &BTreeSet<Triple>,
    ) -> bool {
        if i == ba.len() {
            return ta.iter().all(|t| {
                let mapped = Triple {
                    subject: rename(&t.subject, m),
                    predicate: t.predicate.clone(),
                    object: rename(&t.object, m),
                };
                tb.contains(&mapped)
            });
        }
        for j in 0..bb.len() {
            if used[j] || sig_a[i] != sig_b[j] {
                continue;
            }
            used[j] = true;
            m.insert(ba[i].clone(), bb[j].clone());
            if search(i + 1, ba, bb, sig_a, sig_b, used, m, ta, tb) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    search(0, &ba, &bb, &sig_a, &sig_b, &mut vec![false; bb.len()], &mut BTreeMap::new(), &ta, &tb)
}
