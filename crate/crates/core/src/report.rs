//! Legend matrices (constraints x sources) and aggregate percentage tables,
//! rendered as CSV and Markdown.

use std::collections::{BTreeMap, HashMap};
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::checker::{CheckOutcome, OutcomeStatus};
use crate::model::{classify, Catalog, Constraint, Percent, Severity, VocabularyClassification};

pub const CHECK: &str = "✓";
pub const CROSS: &str = "✗";
pub const NOT_IMPLEMENTED: &str = "(!)";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("source '{source_name}' has an outcome for unknown constraint '{constraint_id}'")]
    UnknownConstraint { source_name: String, constraint_id: String },
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// The same table as CSV and as Markdown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub csv: String,
    pub markdown: String,
}

impl Document {
    fn from_rows(header: &[String], rows: &[Vec<String>], md_rows: &[Vec<String>]) -> Document {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for r in rows {
            w.write_record(r).expect("in-memory write");
        }
        let csv = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells");

        let mut md = String::new();
        let line = |cells: &[String]| {
            let cells: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
            format!("| {} |\n", cells.join(" | "))
        };
        md.push_str(&line(header));
        let rule: Vec<String> = (0..header.len()).map(|i| if i == 0 { "---".into() } else { "---:".into() }).collect();
        md.push_str(&format!("|{}|\n", rule.join("|")));
        for r in md_rows {
            md.push_str(&line(r));
        }
        Document { csv, markdown: md }
    }

    /// Writes `<stem>.csv` and `<stem>.md` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(), ReportError> {
        for (ext, body) in [("csv", &self.csv), ("md", &self.markdown)] {
            let path = dir.join(format!("{stem}.{ext}"));
            std::fs::write(&path, body).map_err(|source| ReportError::Io { path, source })?;
        }
        Ok(())
    }
}

/// `1490` -> `1,490`.
pub fn group_thousands(n: u64) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Numbers {
    /// Bare integers, as in CSV.
    Plain,
    /// Thousands separators, as in the Markdown tables.
    Grouped,
}

/// Legend symbol for one outcome. A source that could not be read in full
/// gets a ` (1)` suffix: one incomplete data set behind the cell.
pub fn render_cell(o: &CheckOutcome, numbers: Numbers) -> String {
    let num = |n: usize| match numbers {
        Numbers::Plain => n.to_string(),
        Numbers::Grouped => group_thousands(n as u64),
    };
    let base = match &o.status {
        OutcomeStatus::Ok => CHECK.to_string(),
        OutcomeStatus::Violated { count } => num(*count),
        OutcomeStatus::Truncated { limit } => format!(">{}", num(*limit)),
        OutcomeStatus::EngineFailure { .. } => CROSS.to_string(),
        OutcomeStatus::NotImplemented => NOT_IMPLEMENTED.to_string(),
    };
    match o.source_incomplete {
        Some(_) => format!("{base} (1)"),
        None => base,
    }
}

/// Row label: constraint id followed by its severity stars.
pub fn row_label(c: &Constraint) -> String {
    format!("{}{}", c.id, c.severity.stars())
}

/// Lowercase file-name stem for a vocabulary, e.g. `DDI-RDF` -> `ddi-rdf`.
pub fn file_stem(vocabulary: &str) -> String {
    vocabulary.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect()
}

pub fn matrix_file_stem(vocabulary: &str) -> String {
    format!("{}-matrix", file_stem(vocabulary))
}

/// Constraints (catalog order) by sources (given order). A constraint with no
/// outcome for a source gets an empty cell.
pub fn render_matrix(sources: &[(String, Vec<CheckOutcome>)], catalog: &Catalog) -> Result<Document, ReportError> {
    let mut by_source: Vec<HashMap<&str, &CheckOutcome>> = Vec::with_capacity(sources.len());
    for (name, outcomes) in sources {
        let mut m = HashMap::new();
        for o in outcomes {
            if catalog.get(&o.constraint_id).is_none() {
                return Err(ReportError::UnknownConstraint {
                    source_name: name.clone(),
                    constraint_id: o.constraint_id.clone(),
                });
            }
            m.insert(o.constraint_id.as_str(), o);
        }
        by_source.push(m);
    }
    let header: Vec<String> =
        std::iter::once("constraint".to_string()).chain(sources.iter().map(|(n, _)| n.clone())).collect();
    let rows = |numbers| -> Vec<Vec<String>> {
        catalog
            .iter()
            .map(|c| {
                std::iter::once(row_label(c))
                    .chain(by_source.iter().map(|m| m.get(c.id.as_str()).map(|o| render_cell(o, numbers)).unwrap_or_default()))
                    .collect()
            })
            .collect()
    };
    Ok(Document::from_rows(&header, &rows(Numbers::Plain), &rows(Numbers::Grouped)))
}

/// Outcomes of one or more validation runs against `catalog`.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeSet<'a> {
    pub catalog: &'a Catalog,
    pub runs: &'a [Vec<CheckOutcome>],
}

/// One (C, CV) column pair. Percentages are in row order SPARQL, CL,
/// RDFS/OWL, info, warning, error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateColumn {
    pub vocabulary: String,
    pub constraints: u64,
    pub violations: u64,
    pub constraint_pct: [Percent; 6],
    pub violation_pct: [Percent; 6],
    /// Unrounded numerators behind the percentage cells.
    pub constraint_counts: [u64; 6],
    pub violation_counts: [u64; 6],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateTable {
    pub columns: Vec<AggregateColumn>,
    pub total: AggregateColumn,
}

pub const AGGREGATE_ROWS: [&str; 6] = ["SPARQL", "CL", "RDFS/OWL", "info", "warning", "error"];

/// Unweighted mean of per-vocabulary percentage columns, each cell rounded
/// half-up to one decimal.
pub fn mean_column(columns: &[[Percent; 6]]) -> [Percent; 6] {
    std::array::from_fn(|i| Percent::mean(&columns.iter().map(|c| c[i]).collect::<Vec<_>>()))
}

fn add_counts(e: &mut VocabularyClassification, v: &VocabularyClassification) {
    e.total += v.total;
    e.not_implemented += v.not_implemented;
    e.sparql += v.sparql;
    e.constraint_language += v.constraint_language;
    e.rdfs_owl += v.rdfs_owl;
    e.info += v.info;
    e.warning += v.warning;
    e.error += v.error;
}

#[derive(Default)]
struct Violations {
    total: u64,
    buckets: [u64; 6],
}

/// Per-vocabulary constraint and violation percentages. Total percentages are
/// the unweighted mean of the vocabulary ratios, rounded once; absolute
/// counts are summed.
/// Outcomes of unknown or unimplemented constraints are ignored.
pub fn aggregate(sets: &[OutcomeSet<'_>]) -> AggregateTable {
    let mut classes = BTreeMap::new();
    let mut violations: BTreeMap<String, Violations> = BTreeMap::new();
    for set in sets {
        for v in classify(set.catalog).vocabularies {
            match classes.get_mut(&v.vocabulary) {
                // The same vocabulary from several catalogs: counts add up.
                Some(e) => add_counts(e, &v),
                None => {
                    classes.insert(v.vocabulary.clone(), v);
                }
            }
        }
        for run in set.runs {
            for o in run {
                let Some(c) = set.catalog.get(&o.constraint_id) else { continue };
                if !c.is_implemented() {
                    continue;
                }
                let n = o.count() as u64;
                let acc = violations.entry(c.vocabulary.clone()).or_default();
                acc.total += n;
                let x = c.expressivity.normalized();
                let flags = [
                    x.sparql,
                    x.constraint_language,
                    x.rdfs_owl,
                    c.severity == Severity::Info,
                    c.severity == Severity::Warning,
                    c.severity == Severity::Error,
                ];
                for (b, on) in acc.buckets.iter_mut().zip(flags) {
                    if on {
                        *b += n;
                    }
                }
            }
        }
    }
    let columns: Vec<AggregateColumn> = classes
        .into_values()
        .map(|v| {
            let cv = violations.remove(&v.vocabulary).unwrap_or_default();
            AggregateColumn {
                constraints: v.total,
                violations: cv.total,
                constraint_pct: v.percentages(),
                violation_pct: cv.buckets.map(|b| Percent::of(b, cv.total)),
                constraint_counts: v.ratios().map(|r| r.0),
                violation_counts: cv.buckets,
                vocabulary: v.vocabulary,
            }
        })
        .collect();
    let mean = |f: &dyn Fn(&AggregateColumn) -> ([u64; 6], u64)| -> [Percent; 6] {
        std::array::from_fn(|i| {
            let ratios: Vec<(u64, u64)> = columns.iter().map(|c| { let (n, t) = f(c); (n[i], t) }).collect();
            Percent::mean_of_ratios(&ratios)
        })
    };
    let total = AggregateColumn {
        vocabulary: "Total".into(),
        constraints: columns.iter().map(|c| c.constraints).sum(),
        violations: columns.iter().map(|c| c.violations).sum(),
        constraint_pct: mean(&|c| (c.constraint_counts, c.constraints)),
        violation_pct: mean(&|c| (c.violation_counts, c.violations)),
        constraint_counts: std::array::from_fn(|i| columns.iter().map(|c| c.constraint_counts[i]).sum()),
        violation_counts: std::array::from_fn(|i| columns.iter().map(|c| c.violation_counts[i]).sum()),
    };
    AggregateTable { columns, total }
}

impl AggregateTable {
    pub fn render(&self) -> Document {
        let cols: Vec<&AggregateColumn> = self.columns.iter().chain(std::iter::once(&self.total)).collect();
        let mut header = vec![String::new()];
        for c in &cols {
            header.push(format!("{} C", c.vocabulary));
            header.push(format!("{} CV", c.vocabulary));
        }
        let build = |numbers: Numbers| {
            let fmt = |n: u64| match numbers {
                Numbers::Plain => n.to_string(),
                Numbers::Grouped => group_thousands(n),
            };
            let mut rows = vec![std::iter::once("count".to_string())
                .chain(cols.iter().flat_map(|c| [fmt(c.constraints), fmt(c.violations)]))
                .collect::<Vec<_>>()];
            for (i, label) in AGGREGATE_ROWS.iter().enumerate() {
                rows.push(
                    std::iter::once(label.to_string())
                        .chain(cols.iter().flat_map(|c| [c.constraint_pct[i].to_string(), c.violation_pct[i].to_string()]))
                        .collect(),
                );
            }
            rows
        };
        Document::from_rows(&header, &build(Numbers::Plain), &build(Numbers::Grouped))
    }
}

/// Validated data sets and triples for one vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub vocabulary: String,
    pub datasets: u64,
    pub triples: u64,
}

/// Per-vocabulary data set and triple totals (rows with the same vocabulary
/// are merged, first appearance first) and a grand total line.
pub fn summarize_counts(rows: &[CountRow]) -> Document {
    let mut merged: Vec<CountRow> = Vec::new();
    for r in rows {
        match merged.iter_mut().find(|m| m.vocabulary == r.vocabulary) {
            Some(m) => {
                m.datasets += r.datasets;
                m.triples += r.triples;
            }
            None => merged.push(r.clone()),
        }
    }
    merged.push(CountRow {
        vocabulary: "Total".into(),
        datasets: merged.iter().map(|r| r.datasets).sum(),
        triples: merged.iter().map(|r| r.triples).sum(),
    });
    let header = vec!["vocabulary".to_string(), "data sets".to_string(), "triples".to_string()];
    let build = |numbers: Numbers| -> Vec<Vec<String>> {
        let fmt = |n: u64| if numbers == Numbers::Grouped { group_thousands(n) } else { n.to_string() };
        merged.iter().map(|r| vec![r.vocabulary.clone(), fmt(r.datasets), fmt(r.triples)]).collect()
    };
    Document::from_rows(&header, &build(Numbers::Plain), &build(Numbers::Grouped))
}
