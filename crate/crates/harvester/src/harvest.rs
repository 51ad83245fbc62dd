use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::time::{Duration, Instant};

use rdfval_core::rdf::{BlankScope, Graph, GraphBuilder};
use serde::{Deserialize, Serialize};
use ureq::Agent;

use crate::results::{decode_page, page_query, ResultFormat, ACCEPT};
use crate::source::Source;

/// Longest GET URL before a page request is sent as a POST form instead.
pub const MAX_GET_URL: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum HarvestStatus {
    Complete,
    /// `pages` pages were merged before a page failed for good.
    Partial { pages: usize, reason: String },
    /// The first request failed for good.
    Unavailable { reason: String },
}

impl HarvestStatus {
    pub fn is_complete(&self) -> bool {
        matches!(self, HarvestStatus::Complete)
    }

    pub fn is_unavailable(&self) -> bool {
        matches!(self, HarvestStatus::Unavailable { .. })
    }

    /// Marker for outcomes checked on incomplete data.
    pub fn incompleteness(&self) -> Option<String> {
        match self {
            HarvestStatus::Partial { pages, reason } => Some(format!("partial harvest after {pages} page(s): {reason}")),
            _ => None,
        }
    }
}

impl fmt::Display for HarvestStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarvestStatus::Complete => f.write_str("complete"),
            HarvestStatus::Partial { pages, reason } => write!(f, "partial({pages}, {reason})"),
            HarvestStatus::Unavailable { reason } => write!(f, "unavailable({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarvestOptions {
    /// Delay before the first retry of a page; later retries multiply it.
    pub backoff_base: Duration,
    pub backoff_factor: u32,
}

impl Default for HarvestOptions {
    fn default() -> Self {
        HarvestOptions { backoff_base: Duration::from_secs(1), backoff_factor: 2 }
    }
}

impl HarvestOptions {
    /// Delays slept before retries 1..=max_retries of one page.
    pub fn backoff_delays(&self, max_retries: u32) -> Vec<Duration> {
        let mut d = self.backoff_base;
        (0..max_retries)
            .map(|_| {
                let cur = d;
                d = d.saturating_mul(self.backoff_factor.max(1));
                cur
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Get,
    Post,
}

/// What happened to one page request, retries included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageLog {
    pub offset: usize,
    /// HTTP requests sent, including a GET rejected in favour of POST.
    pub requests: u32,
    /// Backoff delays slept, one per retry.
    pub delays: Vec<Duration>,
    pub method: Method,
    /// Rows in the accepted response, if any.
    pub rows: Option<usize>,
}

impl PageLog {
    pub fn retries(&self) -> usize {
        self.delays.len()
    }
}

#[derive(Debug, Clone)]
pub struct HarvestResult {
    pub source: Source,
    pub graph: Graph,
    pub status: HarvestStatus,
    pub triple_count: usize,
    pub elapsed: Duration,
    pub pages: Vec<PageLog>,
}

impl HarvestResult {
    pub fn requests(&self) -> u32 {
        self.pages.iter().map(|p| p.requests).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FetchError {
    Connection,
    Timeout,
    Http(u16),
    BadResponse(String),
}

impl fmt::Display for FetchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FetchError::Connection => f.write_str("connection-error"),
            FetchError::Timeout => f.write_str("timeout"),
            FetchError::Http(code) => write!(f, "http-{code}"),
            FetchError::BadResponse(m) => write!(f, "bad-response: {m}"),
        }
    }
}

impl From<ureq::Error> for FetchError {
    fn from(e: ureq::Error) -> Self {
        match e {
            ureq::Error::Timeout(_) => FetchError::Timeout,
            ureq::Error::Io(io) if matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
                FetchError::Timeout
            }
            ureq::Error::Io(_) | ureq::Error::ConnectionFailed | ureq::Error::HostNotFound => FetchError::Connection,
            ureq::Error::StatusCode(code) => FetchError::Http(code),
            other => FetchError::BadResponse(other.to_string()),
        }
    }
}

fn encoded_len(s: &str) -> usize {
    s.bytes().map(|b| if b.is_ascii_alphanumeric() || b"-._~".contains(&b) { 1 } else { 3 }).sum()
}

struct Client<'a> {
    agent: Agent,
    source: &'a Source,
    method: Method,
}

struct Page {
    body: String,
    content_type: Option<String>,
}

impl Client<'_> {
    fn send(&self, query: &str, method: Method) -> Result<ureq::http::Response<ureq::Body>, FetchError> {
        let url = self.source.endpoint.as_str();
        let resp = match method {
            Method::Get => self.agent.get(url).query("query", query).header("Accept", ACCEPT).call(),
            Method::Post => self.agent.post(url).header("Accept", ACCEPT).send_form([("query", query)]),
        };
        Ok(resp?)
    }

    /// One attempt. A GET the endpoint refuses (405, 414) is repeated as a
    /// POST at once, and later pages stay on POST.
    fn fetch(&mut self, query: &str, requests: &mut u32) -> Result<Page, FetchError> {
        let mut resp = self.send(query, self.method);
        *requests += 1;
        if self.method == Method::Get {
            if let Ok(r) = &resp {
                if matches!(r.status().as_u16(), 405 | 414) {
                    self.method = Method::Post;
                    resp = self.send(query, Method::Post);
                    *requests += 1;
                }
            }
        }
        let mut resp = resp?;
        let status = resp.status().as_u16();
        if !(200..300).contains(&status) {
            return Err(FetchError::Http(status));
        }
        let content_type = resp.headers().get("content-type").and_then(|v| v.to_str().ok()).map(str::to_string);
        let body = resp.body_mut().with_config().limit(1 << 32).read_to_string()?;
        Ok(Page { body, content_type })
    }
}

/// Harvests with the default backoff (1 s, doubling).
pub fn harvest(source: &Source) -> HarvestResult {
    harvest_with(source, &HarvestOptions::default())
}

/// Enumerates all triples of `source` page by page. Never fails: every
/// failure mode ends up in the result status.
pub fn harvest_with(source: &Source, opts: &HarvestOptions) -> HarvestResult {
    let started = Instant::now();
    let agent: Agent = Agent::config_builder()
        .timeout_global(Some(source.timeout))
        .http_status_as_error(false)
        .user_agent(concat!("rdfval-harvest/", env!("CARGO_PKG_VERSION")))
        .build()
        .into();
    let first = page_query(source.page_size, 0);
    let long = source.endpoint.as_str().len() + 7 + encoded_len(&first) > MAX_GET_URL;
    let mut client = Client { agent, source, method: if long { Method::Post } else { Method::Get } };
    let delays = opts.backoff_delays(source.max_retries);

    let mut builder = GraphBuilder::new().with_name(source.abbreviation.clone());
    let mut blanks = BlankScope::new();
    let mut pages = Vec::new();
    let mut merged = 0usize;
    let mut previous_full_page: Option<u64> = None;

    let status = loop {
        let offset = merged * source.page_size;
        let query = page_query(source.page_size, offset);
        let mut log = PageLog { offset, requests: 0, delays: Vec::new(), method: client.method, rows: None };
        let mut outcome = Err(FetchError::Connection);
        for attempt in 0..=source.max_retries as usize {
            if attempt > 0 {
                std::thread::sleep(delays[attempt - 1]);
                log.delays.push(delays[attempt - 1]);
            }
            outcome = client.fetch(&query, &mut log.requests).and_then(|page| {
                let format = ResultFormat::detect(page.content_type.as_deref(), &page.body).ok_or_else(|| {
                    FetchError::BadResponse(format!(
                        "unsupported content type {}",
                        page.content_type.as_deref().unwrap_or("(none)")
                    ))
                })?;
                let rows = decode_page(&page.body, format, &mut builder, &mut blanks)
                    .map_err(|e| FetchError::BadResponse(e.to_string()))?;
                Ok((rows, page.body))
            });
            if outcome.is_ok() {
                break;
            }
        }
        log.method = client.method;
        let result = outcome.map(|(rows, body)| {
            log.rows = Some(rows);
            (rows, body)
        });
        pages.push(log);
        match result {
            Err(e) if merged == 0 => break HarvestStatus::Unavailable { reason: e.to_string() },
            Err(e) => break HarvestStatus::Partial { pages: merged, reason: e.to_string() },
            Ok((rows, body)) => {
                merged += 1;
                if rows < source.page_size {
                    break HarvestStatus::Complete;
                }
                // A full page identical to the one before means OFFSET is ignored.
                let mut h = DefaultHasher::new();
                body.hash(&mut h);
                let digest = h.finish();
                if previous_full_page == Some(digest) {
                    break HarvestStatus::Partial { pages: merged, reason: "endpoint ignores OFFSET".into() };
                }
                previous_full_page = Some(digest);
            }
        }
    };
    let graph = builder.freeze();
    HarvestResult {
        source: source.clone(),
        triple_count: graph.len(),
        graph,
        status,
        elapsed: started.elapsed(),
        pages,
    }
}
