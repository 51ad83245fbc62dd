//! Harvest, profile and check many sources, persisting each source's results
//! in its own directory as soon as it finishes.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use rdfval_core::checker::{check_with, CheckOptions, CheckOutcome};
use rdfval_core::model::Catalog;
use rdfval_core::rdf::{parse_ntriples_str, write_ntriples, Graph};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harvest::{harvest_with, HarvestOptions, HarvestStatus};
use crate::profile::{profile, ProfileRow};
use crate::source::Source;

pub const DATA_FILE: &str = "data.nt.gz";
pub const PROFILE_FILE: &str = "profile.json";
pub const HARVEST_FILE: &str = "harvest.json";
pub const OUTCOMES_FILE: &str = "outcomes.json";
/// Source list of the run, kept for ordering when results are re-read.
pub const SOURCES_FILE: &str = "sources.json";

pub const DEFAULT_CONCURRENCY: usize = 4;

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Data { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PersistError + '_ {
    move |source| PersistError::Io { path: path.to_path_buf(), source }
}

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PersistError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PersistError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|source| PersistError::Json { path: path.to_path_buf(), source })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, PersistError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| PersistError::Json { path: path.to_path_buf(), source })
}

pub fn write_graph_gz(path: &Path, g: &Graph) -> Result<(), PersistError> {
    let mut enc = GzEncoder::new(Vec::new(), Compression::default());
    write_ntriples(g, &mut enc).map_err(io_err(path))?;
    let bytes = enc.finish().map_err(io_err(path))?;
    write_atomic(path, &bytes)
}

pub fn read_graph_gz(path: &Path) -> Result<Graph, PersistError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut text = String::new();
    GzDecoder::new(file).read_to_string(&mut text).map_err(io_err(path))?;
    parse_ntriples_str(&text).map_err(|e| PersistError::Data { path: path.to_path_buf(), message: e.to_string() })
}

/// Contents of `harvest.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarvestRecord {
    pub abbreviation: String,
    pub endpoint: String,
    #[serde(flatten)]
    pub status: HarvestStatus,
    pub triples: usize,
    pub requests: u32,
    pub elapsed_ms: u64,
}

/// Contents of `outcomes.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistedOutcomes {
    pub source: String,
    pub outcomes: Vec<CheckOutcome>,
}

/// One source's directory under a results root.
#[derive(Debug, Clone)]
pub struct SourceDir(PathBuf);

impl SourceDir {
    pub fn new(root: &Path, source: &Source) -> Self {
        SourceDir(root.join(source.dir_name()))
    }

    pub fn path(&self) -> &Path {
        &self.0
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn harvest_record(&self) -> Option<HarvestRecord> {
        read_json(&self.file(HARVEST_FILE)).ok()
    }

    /// A complete harvest whose data and profile are on disk.
    fn complete_harvest(&self) -> Option<(HarvestRecord, ProfileRow)> {
        let rec = self.harvest_record().filter(|r| r.status.is_complete())?;
        if !self.file(DATA_FILE).is_file() {
            return None;
        }
        let prof = read_json(&self.file(PROFILE_FILE)).ok()?;
        Some((rec, prof))
    }
}

#[derive(Debug, Clone)]
pub struct HarvestRunOptions {
    pub out: PathBuf,
    pub concurrency: usize,
    /// Classes to profile, as full IRIs.
    pub classes: Vec<String>,
    pub harvest: HarvestOptions,
}

impl HarvestRunOptions {
    pub fn new(out: impl Into<PathBuf>, classes: Vec<String>) -> Self {
        HarvestRunOptions { out: out.into(), concurrency: DEFAULT_CONCURRENCY, classes, harvest: HarvestOptions::default() }
    }
}

/// Per-source result of a harvest run.
#[derive(Debug, Clone)]
pub struct SourceReport {
    pub record: HarvestRecord,
    pub profile: Option<ProfileRow>,
    /// Taken from an earlier complete run without contacting the endpoint.
    pub skipped: bool,
    /// Persistence failure; the harvest itself may have succeeded.
    pub error: Option<String>,
}

/// Runs `f` over `items` on at most `k` threads, keeping input order.
fn bounded_map<T: Sync, R: Send>(items: &[T], k: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..k.max(1).min(items.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(item) = items.get(i) else { break };
                let r = f(item);
                slots.lock().expect("result slots")[i] = Some(r);
            });
        }
    });
    slots.into_inner().expect("result slots").into_iter().map(|r| r.expect("every item mapped")).collect()
}

struct Harvested {
    report: SourceReport,
    /// Present when freshly harvested (not skipped) and not unavailable.
    graph: Option<Graph>,
}

fn harvest_one(source: &Source, opts: &HarvestRunOptions) -> Harvested {
    let dir = SourceDir::new(&opts.out, source);
    if let Some((record, prof)) = dir.complete_harvest() {
        return Harvested { report: SourceReport { record, profile: Some(prof), skipped: true, error: None }, graph: None };
    }
    let result = harvest_with(source, &opts.harvest);
    let record = HarvestRecord {
        abbreviation: source.abbreviation.clone(),
        endpoint: source.endpoint.as_str().to_string(),
        status: result.status.clone(),
        triples: result.triple_count,
        requests: result.requests(),
        elapsed_ms: result.elapsed.as_millis() as u64,
    };
    let available = !result.status.is_unavailable();
    let prof = available.then(|| profile(&result.graph, &opts.classes));
    let persisted = (|| {
        fs::create_dir_all(dir.path()).map_err(io_err(dir.path()))?;
        // Stale markers would vouch for the files about to be replaced.
        for marker in [HARVEST_FILE, OUTCOMES_FILE] {
            let path = dir.file(marker);
            if path.exists() {
                fs::remove_file(&path).map_err(io_err(&path))?;
            }
        }
        if let Some(p) = &prof {
            write_graph_gz(&dir.file(DATA_FILE), &result.graph)?;
            write_json(&dir.file(PROFILE_FILE), p)?;
        }
        // Written last: its presence marks the data files as final.
        write_json(&dir.file(HARVEST_FILE), &record)
    })();
    Harvested {
        report: SourceReport { record, profile: prof, skipped: false, error: persisted.err().map(|e| e.to_string()) },
        graph: available.then_some(result.graph),
    }
}

fn write_source_list(out: &Path, sources: &[Source]) -> Option<String> {
    let r = fs::create_dir_all(out).map_err(io_err(out)).and_then(|_| write_json(&out.join(SOURCES_FILE), &sources));
    r.err().map(|e| e.to_string())
}

/// Harvests and profiles every source into `opts.out`, skipping sources
/// whose complete harvest is already there.
pub fn harvest_sources(sources: &[Source], opts: &HarvestRunOptions) -> Vec<SourceReport> {
    let list_error = write_source_list(&opts.out, sources);
    let mut reports: Vec<SourceReport> =
        bounded_map(sources, opts.concurrency, |s| harvest_one(s, opts).report);
    if let (Some(e), Some(first)) = (list_error, reports.first_mut()) {
        first.error.get_or_insert(e);
    }
    reports
}

#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub run: HarvestRunOptions,
    pub limit: Option<usize>,
    pub budget: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct CampaignRecord {
    pub source: SourceReport,
    pub outcomes: Vec<CheckOutcome>,
}

impl CampaignRecord {
    pub fn violations(&self) -> u64 {
        self.outcomes.iter().map(|o| o.count() as u64).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub sources: usize,
    /// Sources whose data was checked, partial harvests included.
    pub validated: usize,
    pub complete: usize,
    pub partial: usize,
    pub unavailable: usize,
    pub skipped: usize,
    pub triples: u64,
    pub violations: u64,
}

impl CampaignSummary {
    pub fn of(records: &[CampaignRecord]) -> Self {
        let mut s = CampaignSummary { sources: records.len(), ..Default::default() };
        for r in records {
            match &r.source.record.status {
                HarvestStatus::Complete => s.complete += 1,
                HarvestStatus::Partial { .. } => s.partial += 1,
                HarvestStatus::Unavailable { .. } => s.unavailable += 1,
            }
            if !r.source.record.status.is_unavailable() {
                s.validated += 1;
            }
            s.skipped += r.source.skipped as usize;
            s.triples += r.source.record.triples as u64;
            s.violations += r.violations();
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub records: Vec<CampaignRecord>,
    pub summary: CampaignSummary,
}

fn campaign_one(source: &Source, catalog: &Catalog, opts: &CampaignOptions) -> CampaignRecord {
    let dir = SourceDir::new(&opts.run.out, source);
    if dir.complete_harvest().is_some() {
        if let Ok(done) = read_json::<PersistedOutcomes>(&dir.file(OUTCOMES_FILE)) {
            let (record, prof) = dir.complete_harvest().expect("checked above");
            let source = SourceReport { record, profile: Some(prof), skipped: true, error: None };
            return CampaignRecord { source, outcomes: done.outcomes };
        }
    }
    let Harvested { mut report, graph } = harvest_one(source, &opts.run);
    let graph = match graph {
        Some(g) => Some(g),
        None if report.skipped => match read_graph_gz(&dir.file(DATA_FILE)) {
            Ok(g) => Some(g),
            Err(e) => {
                report.error.get_or_insert(e.to_string());
                None
            }
        },
        None => None,
    };
    let mut outcomes = Vec::new();
    if let Some(g) = graph {
        let check = CheckOptions { limit: opts.limit, budget: opts.budget, parallel: true };
        outcomes = check_with(&g, catalog, &check);
        let incomplete = report.record.status.incompleteness();
        for o in &mut outcomes {
            o.source_incomplete.clone_from(&incomplete);
        }
    }
    let persisted = PersistedOutcomes { source: source.abbreviation.clone(), outcomes };
    if let Err(e) = fs::create_dir_all(dir.path())
        .map_err(io_err(dir.path()))
        .and_then(|_| write_json(&dir.file(OUTCOMES_FILE), &persisted))
    {
        report.error.get_or_insert(e.to_string());
    }
    CampaignRecord { source: report, outcomes: persisted.outcomes }
}

/// Harvests, profiles and checks every source. Partial harvests are checked
/// too and their outcomes flagged; unavailable sources get no outcomes.
/// Sources already complete on disk are not harvested again.
pub fn run_campaign(sources: &[Source], catalog: &Catalog, opts: &CampaignOptions) -> CampaignResult {
    let list_error = write_source_list(&opts.run.out, sources);
    let mut records = bounded_map(sources, opts.run.concurrency, |s| campaign_one(s, catalog, opts));
    if let (Some(e), Some(first)) = (list_error, records.first_mut()) {
        first.source.error.get_or_insert(e);
    }
    let summary = CampaignSummary::of(&records);
    CampaignResult { records, summary }
}

/// Re-reads the persisted per-source results under `root`, in the order of
/// the run's source list when present, else by directory name. Sources
/// without `outcomes.json` are left out.
pub fn load_campaign(root: &Path) -> Result<Vec<CampaignRecord>, PersistError> {
    let dirs: Vec<PathBuf> = match read_json::<Vec<Source>>(&root.join(SOURCES_FILE)) {
        Ok(sources) => sources.iter().map(|s| SourceDir::new(root, s).0).collect(),
        Err(_) => {
            let mut dirs: Vec<PathBuf> = fs::read_dir(root)
                .map_err(io_err(root))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_dir())
                .collect();
            dirs.sort();
            dirs
        }
    };
    let mut out = Vec::new();
    for dir in dirs {
        let outcomes_path = dir.join(OUTCOMES_FILE);
        if !outcomes_path.is_file() {
            continue;
        }
        let persisted: PersistedOutcomes = read_json(&outcomes_path)?;
        let record: HarvestRecord = read_json(&dir.join(HARVEST_FILE))?;
        let profile = read_json(&dir.join(PROFILE_FILE)).ok();
        out.push(CampaignRecord {
            source: SourceReport { record, profile, skipped: true, error: None },
            outcomes: persisted.outcomes,
        });
    }
    Ok(out)
}
