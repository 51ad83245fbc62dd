//! A small in-process SPARQL endpoint that answers the harvester's paged
//! triple-enumeration queries from a fixed graph.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::net::TcpListener;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use rdfval_core::rdf::{Graph, GraphBuilder, Iri, Literal, Term, Triple};
use tiny_http::{Header, Response, Server};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Xml,
}

/// Counts concurrent requests across any number of mocks.
#[derive(Debug, Default)]
pub struct Gauge {
    now: AtomicUsize,
    pub peak: AtomicUsize,
}

#[derive(Debug, Clone)]
pub struct MockConfig {
    pub format: Format,
    /// Page index (offset / limit) to number of failing responses before it
    /// succeeds. `u32::MAX` fails forever.
    pub failures: BTreeMap<usize, u32>,
    pub fail_status: u16,
    /// Answer GET with 405 so clients must POST.
    pub reject_get: bool,
    pub ignore_offset: bool,
    pub delay: Duration,
    pub gauge: Option<Arc<Gauge>>,
}

impl Default for MockConfig {
    fn default() -> Self {
        MockConfig {
            format: Format::Json,
            failures: BTreeMap::new(),
            fail_status: 500,
            reject_get: false,
            ignore_offset: false,
            delay: Duration::ZERO,
            gauge: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Logged {
    pub method: String,
    pub offset: usize,
    pub limit: usize,
    pub status: u16,
}

pub struct MockEndpoint {
    pub url: String,
    pub log: Arc<Mutex<Vec<Logged>>>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockEndpoint {
    pub fn start(g: &Graph, cfg: MockConfig) -> Self {
        let mut rows: Vec<Triple> = g.triples().collect();
        rows.sort_by_key(|t| t.to_string());
        let server = Server::http("127.0.0.1:0").expect("bind mock endpoint");
        let port = server.server_addr().to_ip().expect("ip listener").port();
        let log = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));
        let handle = {
            let (log, stop) = (log.clone(), stop.clone());
            std::thread::spawn(move || serve(server, rows, cfg, log, stop))
        };
        MockEndpoint { url: format!("http://127.0.0.1:{port}/sparql"), log, stop, handle: Some(handle) }
    }

    pub fn requests(&self) -> usize {
        self.log.lock().unwrap().len()
    }
}

impl Drop for MockEndpoint {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

/// An address nothing listens on.
pub fn dead_url() -> String {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = l.local_addr().unwrap().port();
    drop(l);
    format!("http://127.0.0.1:{port}/sparql")
}

fn keyword_arg(query: &str, keyword: &str) -> Option<usize> {
    let words: Vec<&str> = query.split_whitespace().collect();
    words.iter().position(|w| w.eq_ignore_ascii_case(keyword)).and_then(|i| words.get(i + 1)?.parse().ok())
}

fn serve(server: Server, rows: Vec<Triple>, cfg: MockConfig, log: Arc<Mutex<Vec<Logged>>>, stop: Arc<AtomicBool>) {
    let mut served_failures: HashMap<usize, u32> = HashMap::new();
    while !stop.load(Ordering::SeqCst) {
        let Ok(Some(mut req)) = server.recv_timeout(Duration::from_millis(20)) else { continue };
        if let Some(g) = &cfg.gauge {
            let now = g.now.fetch_add(1, Ordering::SeqCst) + 1;
            g.peak.fetch_max(now, Ordering::SeqCst);
        }
        let method = req.method().as_str().to_string();
        let form = if method == "POST" {
            let mut body = String::new();
            let _ = req.as_reader().read_to_string(&mut body);
            body
        } else {
            req.url().split_once('?').map(|(_, q)| q.to_string()).unwrap_or_default()
        };
        let query = url::form_urlencoded::parse(form.as_bytes())
            .find(|(k, _)| k == "query")
            .map(|(_, v)| v.into_owned())
            .unwrap_or_default();
        let limit = keyword_arg(&query, "LIMIT").unwrap_or(usize::MAX);
        let offset = keyword_arg(&query, "OFFSET").unwrap_or(0);
        let page = if limit == 0 || limit == usize::MAX { 0 } else { offset / limit };

        if !cfg.delay.is_zero() {
            std::thread::sleep(cfg.delay);
        }
        let status = if cfg.reject_get && method == "GET" {
            405
        } else if query.is_empty() {
            400
        } else {
            let planned = cfg.failures.get(&page).copied().unwrap_or(0);
            let served = served_failures.entry(page).or_insert(0);
            if *served < planned {
                *served += 1;
                cfg.fail_status
            } else {
                200
            }
        };
        log.lock().unwrap().push(Logged { method, offset, limit, status });
        let response = if status == 200 {
            let start = if cfg.ignore_offset { 0 } else { offset.min(rows.len()) };
            let end = start.saturating_add(limit).min(rows.len());
            let (body, ct) = match cfg.format {
                Format::Json => (json_results(&rows[start..end]), "application/sparql-results+json"),
                Format::Xml => (xml_results(&rows[start..end]), "application/sparql-results+xml"),
            };
            Response::from_string(body).with_header(Header::from_bytes("Content-Type", ct).unwrap())
        } else {
            Response::from_string("failure").with_status_code(status)
        };
        let _ = req.respond(response);
        if let Some(g) = &cfg.gauge {
            g.now.fetch_sub(1, Ordering::SeqCst);
        }
    }
}

fn json_term(t: &Term) -> serde_json::Value {
    match t {
        Term::Iri(i) => serde_json::json!({"type": "uri", "value": i.as_str()}),
        Term::BlankNode(l) => serde_json::json!({"type": "bnode", "value": l}),
        Term::Literal(l) => {
            let mut v = serde_json::json!({"type": "literal", "value": l.lexical()});
            if let Some(tag) = l.language() {
                v["xml:lang"] = tag.into();
            } else if l.datatype().as_str() != "http://www.w3.org/2001/XMLSchema#string" {
                v["datatype"] = l.datatype().as_str().into();
            }
            v
        }
    }
}

fn json_results(rows: &[Triple]) -> String {
    let bindings: Vec<serde_json::Value> = rows
        .iter()
        .map(|t| {
            serde_json::json!({
                "s": json_term(&t.subject), "p": json_term(&Term::Iri(t.predicate.clone())), "o": json_term(&t.object)
            })
        })
        .collect();
    serde_json::json!({"head": {"vars": ["s", "p", "o"]}, "results": {"bindings": bindings}}).to_string()
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn xml_term(t: &Term) -> String {
    match t {
        Term::Iri(i) => format!("<uri>{}</uri>", esc(i.as_str())),
        Term::BlankNode(l) => format!("<bnode>{}</bnode>", esc(l)),
        Term::Literal(l) => match l.language() {
            Some(tag) => format!("<literal xml:lang=\"{}\">{}</literal>", esc(tag), esc(l.lexical())),
            None => format!("<literal datatype=\"{}\">{}</literal>", esc(l.datatype().as_str()), esc(l.lexical())),
        },
    }
}

fn xml_results(rows: &[Triple]) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\"?>\n<sparql xmlns=\"http://www.w3.org/2005/sparql-results#\">\n\
         <head><variable name=\"s\"/><variable name=\"p\"/><variable name=\"o\"/></head>\n<results>\n",
    );
    for t in rows {
        out.push_str(&format!(
            "<result><binding name=\"s\">{}</binding><binding name=\"p\">{}</binding><binding name=\"o\">{}</binding></result>\n",
            xml_term(&t.subject),
            xml_term(&Term::Iri(t.predicate.clone())),
            xml_term(&t.object)
        ));
    }
    out.push_str("</results>\n</sparql>\n");
    out
}

/// A graph of `n` distinct triples mixing IRIs, blank nodes and literals.
pub fn synthetic_graph(n: usize) -> Graph {
    let mut b = GraphBuilder::new();
    let p = |i: usize| Iri::new(format!("http://ex/p{}", i % 5)).unwrap();
    for i in 0..n {
        let subject = if i % 7 == 3 { Term::BlankNode(format!("n{}", i % 11)) } else { Term::iri(&format!("http://ex/s{}", i % 13)).unwrap() };
        let object = match i % 4 {
            0 => Term::Literal(Literal::integer(i as i64)),
            1 => Term::Literal(Literal::lang(format!("label <{i}> & \"q\""), "en").unwrap()),
            2 => Term::BlankNode(format!("n{}", (i + 5) % 11)),
            _ => Term::iri(&format!("http://ex/o{i}")).unwrap(),
        };
        // Index in the literal keeps every triple distinct.
        let object = if matches!(object, Term::BlankNode(_)) && i >= 11 { Term::Literal(Literal::string(format!("v{i}"))) } else { object };
        b.insert(&Triple::new(subject, p(i), object).unwrap());
    }
    b.freeze()
}

fn colours(ts: &[Triple]) -> BTreeMap<String, u64> {
    use std::hash::{DefaultHasher, Hash, Hasher};
    let mut colour: BTreeMap<String, u64> = BTreeMap::new();
    for t in ts {
        for term in [&t.subject, &t.object] {
            if let Term::BlankNode(l) = term {
                colour.insert(l.clone(), 0);
            }
        }
    }
    let show = |t: &Term, c: &BTreeMap<String, u64>| match t {
        Term::BlankNode(l) => format!("_:{}", c[l]),
        other => other.to_string(),
    };
    for _ in 0..4 {
        let mut sigs: BTreeMap<String, Vec<String>> = colour.keys().map(|k| (k.clone(), Vec::new())).collect();
        for t in ts {
            if let Term::BlankNode(l) = &t.subject {
                sigs.get_mut(l).unwrap().push(format!("s {} {}", t.predicate, show(&t.object, &colour)));
            }
            if let Term::BlankNode(l) = &t.object {
                sigs.get_mut(l).unwrap().push(format!("o {} {}", t.predicate, show(&t.subject, &colour)));
            }
        }
        colour = sigs
            .into_iter()
            .map(|(k, mut v)| {
                v.sort();
                let mut h = DefaultHasher::new();
                v.hash(&mut h);
                (k, h.finish())
            })
            .collect();
    }
    colour
}

/// Graph equality up to a renaming of blank nodes: colour refinement, then
/// backtracking among equally coloured nodes.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ta: Vec<Triple> = a.triples().collect();
    let tbv: Vec<Triple> = b.triples().collect();
    let tb: BTreeSet<Triple> = tbv.iter().cloned().collect();
    let ca = colours(&ta);
    let cb = colours(&tbv);
    let mut ka: Vec<u64> = ca.values().copied().collect();
    let mut kb: Vec<u64> = cb.values().copied().collect();
    ka.sort();
    kb.sort();
    if ka != kb {
        return false;
    }
    let la: Vec<(&str, u64)> = ca.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let lb: Vec<(&str, u64)> = cb.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    fn rename(t: &Term, m: &BTreeMap<&str, &str>) -> Term {
        match t {
            Term::BlankNode(l) => Term::BlankNode(m[l.as_str()].to_string()),
            other => other.clone(),
        }
    }
    fn search<'a>(
        i: usize,
        la: &[(&'a str, u64)],
        lb: &[(&'a str, u64)],
        used: &mut Vec<bool>,
        m: &mut BTreeMap<&'a str, &'a str>,
        ta: &[Triple],
        tb: &BTreeSet<Triple>,
    ) -> bool {
        if i == la.len() {
            return ta.iter().all(|t| {
                let r = Triple { subject: rename(&t.subject, m), predicate: t.predicate.clone(), object: rename(&t.object, m) };
                tb.contains(&r)
            });
        }
        for j in 0..lb.len() {
            if used[j] || lb[j].1 != la[i].1 {
                continue;
            }
            used[j] = true;
            m.insert(la[i].0, lb[j].0);
            if search(i + 1, la, lb, used, m, ta, tb) {
                return true;
            }
            m.remove(la[i].0);
            used[j] = false;
        }
        false
    }
    search(0, &la, &lb, &mut vec![false; lb.len()], &mut BTreeMap::new(), &ta, &tb)
}
