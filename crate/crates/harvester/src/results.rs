//! SPARQL result decoding into a graph builder.

use quick_xml::events::Event;
use quick_xml::Reader;
use rdfval_core::rdf::{
    parse_ntriples_into, parse_turtle_into, BlankScope, GraphBuilder, Iri, Literal, Term, TermId,
};
use serde::Deserialize;
use thiserror::Error;

/// Accept header for page requests, result formats first.
pub const ACCEPT: &str = "application/sparql-results+json, application/sparql-results+xml;q=0.9, \
                          application/n-triples;q=0.5, text/turtle;q=0.4";

/// Triple-enumeration query for one page. The ordering makes offsets stable
/// on endpoints that honour it.
pub fn page_query(limit: usize, offset: usize) -> String {
    format!("SELECT ?s ?p ?o WHERE {{ ?s ?p ?o }} ORDER BY ?s ?p ?o LIMIT {limit} OFFSET {offset}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ResultsError(pub String);

fn err(msg: impl Into<String>) -> ResultsError {
    ResultsError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    Json,
    Xml,
    NTriples,
    Turtle,
}

impl ResultFormat {
    /// From the Content-Type header, falling back to sniffing the body.
    pub fn detect(content_type: Option<&str>, body: &str) -> Option<ResultFormat> {
        let ct = content_type.unwrap_or("").to_ascii_lowercase();
        let ct = ct.split(';').next().unwrap_or("").trim();
        match ct {
            "application/sparql-results+json" | "application/json" => return Some(ResultFormat::Json),
            "application/sparql-results+xml" | "application/xml" | "text/xml" => return Some(ResultFormat::Xml),
            "application/n-triples" => return Some(ResultFormat::NTriples),
            "text/turtle" | "application/x-turtle" => return Some(ResultFormat::Turtle),
            _ => {}
        }
        match body.trim_start().chars().next() {
            Some('{') => Some(ResultFormat::Json),
            Some('<') if body.trim_start().starts_with("<?xml") || body.contains("<sparql") => Some(ResultFormat::Xml),
            _ => None,
        }
    }
}

/// Adds the triples of one response to `builder` and returns the number of
/// result rows (or triples, for graph serializations) in it. On error nothing
/// from `body` is kept.
pub fn decode_page(
    body: &str,
    format: ResultFormat,
    builder: &mut GraphBuilder,
    blanks: &mut BlankScope,
) -> Result<usize, ResultsError> {
    match format {
        ResultFormat::Json => add_rows(json_rows(body)?, builder, blanks),
        ResultFormat::Xml => add_rows(xml_rows(body)?, builder, blanks),
        ResultFormat::NTriples => parse_ntriples_into(builder, body, blanks).map_err(|e| err(e.to_string())),
        ResultFormat::Turtle => parse_turtle_into(builder, body, None, blanks).map_err(|e| err(e.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Binding {
    Uri(String),
    Blank(String),
    Literal { value: String, lang: Option<String>, datatype: Option<String> },
}

/// A validated row position: blank labels stay unresolved until insertion.
enum Node {
    Blank(String),
    Term(Term),
}

fn to_node(b: Binding) -> Result<Node, ResultsError> {
    let e = |x: rdfval_core::rdf::TermError| err(x.to_string());
    Ok(Node::Term(match b {
        Binding::Blank(label) => return Ok(Node::Blank(label)),
        Binding::Uri(u) => Term::Iri(Iri::new(u).map_err(e)?),
        Binding::Literal { value, lang: Some(tag), .. } => Term::Literal(Literal::lang(value, &tag).map_err(e)?),
        Binding::Literal { value, lang: None, datatype: Some(dt) } => {
            Term::Literal(Literal::typed(value, Iri::new(dt).map_err(e)?).map_err(e)?)
        }
        Binding::Literal { value, .. } => Term::Literal(Literal::string(value)),
    }))
}

type Row = [Node; 3];

fn check_row(row: [Option<Binding>; 3]) -> Result<Row, ResultsError> {
    let [Some(s), Some(p), Some(o)] = row else {
        return Err(err("result row without ?s ?p ?o bindings"));
    };
    if matches!(s, Binding::Literal { .. }) {
        return Err(err("literal in subject position"));
    }
    if !matches!(p, Binding::Uri(_)) {
        return Err(err("predicate is not an IRI"));
    }
    Ok([to_node(s)?, to_node(p)?, to_node(o)?])
}

fn add_rows(rows: Vec<Row>, builder: &mut GraphBuilder, blanks: &mut BlankScope) -> Result<usize, ResultsError> {
    let n = rows.len();
    for row in rows {
        let ids: [TermId; 3] = row.map(|node| match node {
            Node::Blank(label) => blanks.resolve(builder, &label),
            Node::Term(t) => builder.intern_owned(t),
        });
        builder.insert_ids(ids);
    }
    Ok(n)
}

fn slot(var: &str) -> Option<usize> {
    match var {
        "s" => Some(0),
        "p" => Some(1),
        "o" => Some(2),
        _ => None,
    }
}

#[derive(Deserialize)]
struct JsonResults {
    results: JsonBindings,
}

#[derive(Deserialize)]
struct JsonBindings {
    bindings: Vec<std::collections::HashMap<String, JsonTerm>>,
}

#[derive(Deserialize)]
struct JsonTerm {
    #[serde(rename = "type")]
    kind: String,
    value: String,
    #[serde(rename = "xml:lang")]
    lang: Option<String>,
    datatype: Option<String>,
}

fn json_rows(body: &str) -> Result<Vec<Row>, ResultsError> {
    let parsed: JsonResults = serde_json::from_str(body).map_err(|e| err(format!("JSON results: {e}")))?;
    let mut rows = Vec::with_capacity(parsed.results.bindings.len());
    for row in parsed.results.bindings {
        let mut slots: [Option<Binding>; 3] = Default::default();
        for (var, t) in row {
            let Some(i) = slot(&var) else { continue };
            slots[i] = Some(match t.kind.as_str() {
                "uri" => Binding::Uri(t.value),
                "bnode" => Binding::Blank(t.value),
                "literal" | "typed-literal" => Binding::Literal { value: t.value, lang: t.lang, datatype: t.datatype },
                other => return Err(err(format!("unknown binding type {other:?}"))),
            });
        }
        rows.push(check_row(slots)?);
    }
    Ok(rows)
}

fn xml_rows(body: &str) -> Result<Vec<Row>, ResultsError> {
    let xml_err = |e: quick_xml::Error| err(format!("XML results: {e}"));
    let mut reader = Reader::from_str(body);
    let mut rows = Vec::new();
    let mut slots: [Option<Binding>; 3] = Default::default();
    let mut var: Option<usize> = None;
    // Term element being read: kind, lang, datatype, text.
    let mut term: Option<(Vec<u8>, Option<String>, Option<String>, String)> = None;
    let mut saw_results = false;
    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Start(e) => match e.local_name().as_ref() {
                b"results" => saw_results = true,
                b"result" => slots = Default::default(),
                b"binding" => {
                    var = None;
                    for a in e.attributes() {
                        let a = a.map_err(|e| err(format!("XML results: {e}")))?;
                        if a.key.as_ref() == b"name" {
                            var = slot(&a.unescape_value().map_err(xml_err)?);
                        }
                    }
                }
                kind @ (b"uri" | b"bnode" | b"literal") => {
                    let (mut lang, mut dt) = (None, None);
                    for a in e.attributes() {
                        let a = a.map_err(|e| err(format!("XML results: {e}")))?;
                        let v = a.unescape_value().map_err(xml_err)?.into_owned();
                        match a.key.as_ref() {
                            b"xml:lang" => lang = Some(v),
                            b"datatype" => dt = Some(v),
                            _ => {}
                        }
                    }
                    term = Some((kind.to_vec(), lang, dt, String::new()));
                }
                _ => {}
            },
            Event::Empty(e) if e.local_name().as_ref() == b"literal" => {
                let mut lang = None;
                let mut dt = None;
                for a in e.attributes() {
                    let a = a.map_err(|e| err(format!("XML results: {e}")))?;
                    let v = a.unescape_value().map_err(xml_err)?.into_owned();
                    match a.key.as_ref() {
                        b"xml:lang" => lang = Some(v),
                        b"datatype" => dt = Some(v),
                        _ => {}
                    }
                }
                if let Some(i) = var {
                    slots[i] = Some(Binding::Literal { value: String::new(), lang, datatype: dt });
                }
            }
            Event::Text(t) => {
                if let Some((_, _, _, text)) = term.as_mut() {
                    text.push_str(&t.unescape().map_err(xml_err)?);
                }
            }
            Event::CData(t) => {
                if let Some((_, _, _, text)) = term.as_mut() {
                    text.push_str(&String::from_utf8_lossy(&t.into_inner()));
                }
            }
            Event::End(e) => match e.local_name().as_ref() {
                b"uri" | b"bnode" | b"literal" => {
                    if let (Some((kind, lang, datatype, value)), Some(i)) = (term.take(), var) {
                        slots[i] = Some(match kind.as_slice() {
                            b"uri" => Binding::Uri(value),
                            b"bnode" => Binding::Blank(value),
                            _ => Binding::Literal { value, lang, datatype },
                        });
                    }
                }
                b"result" => {
                    rows.push(check_row(std::mem::take(&mut slots))?);
                }
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
    }
    if !saw_results {
        return Err(err("XML results: no <results> element"));
    }
    Ok(rows)
}
