//! Shipped constraint catalogs for DDI-RDF, QB and SKOS, each with small
//! synthetic fixture graphs and the outcome expected for every constraint.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::checker::{check_with, CheckOptions, CheckOutcome, DEFAULT_LIMIT};
use crate::model::{load_catalog_str, Catalog};
use crate::rdf::{parse_ntriples_str, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vocabulary {
    DdiRdf,
    Qb,
    Skos,
}

impl Vocabulary {
    pub const ALL: [Vocabulary; 3] = [Vocabulary::DdiRdf, Vocabulary::Qb, Vocabulary::Skos];

    pub fn name(self) -> &'static str {
        match self {
            Vocabulary::DdiRdf => "DDI-RDF",
            Vocabulary::Qb => "QB",
            Vocabulary::Skos => "SKOS",
        }
    }

    /// Directory-style name used for exported files.
    pub fn slug(self) -> &'static str {
        match self {
            Vocabulary::DdiRdf => "ddi-rdf",
            Vocabulary::Qb => "qb",
            Vocabulary::Skos => "skos",
        }
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Error)]
#[error("unknown vocabulary '{0}' (expected DDI-RDF, QB or SKOS)")]
pub struct UnknownVocabulary(pub String);

impl FromStr for Vocabulary {
    type Err = UnknownVocabulary;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ddi-rdf" | "ddi" | "disco" => Ok(Vocabulary::DdiRdf),
            "qb" | "datacube" => Ok(Vocabulary::Qb),
            "skos" => Ok(Vocabulary::Skos),
            _ => Err(UnknownVocabulary(s.to_string())),
        }
    }
}

struct Source {
    catalog: &'static str,
    fixtures: &'static [(&'static str, &'static str, &'static str)],
}

macro_rules! fixture {
    ($pack:literal, $name:literal) => {
        (
            $name,
            include_str!(concat!("../packs/", $pack, "/fixtures/", $name, ".nt")),
            include_str!(concat!("../packs/", $pack, "/fixtures/", $name, ".expected.json")),
        )
    };
}

fn source(v: Vocabulary) -> Source {
    match v {
        Vocabulary::DdiRdf => Source {
            catalog: include_str!("../packs/ddi-rdf/catalog.json"),
            fixtures: &[fixture!("ddi-rdf", "missy")],
        },
        Vocabulary::Qb => Source {
            catalog: include_str!("../packs/qb/catalog.json"),
            fixtures: &[fixture!("qb", "linked"), fixture!("qb", "unlinked")],
        },
        Vocabulary::Skos => Source {
            catalog: include_str!("../packs/skos/catalog.json"),
            fixtures: &[fixture!("skos", "thesaurus"), fixture!("skos", "clean")],
        },
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    /// The fixture graph as shipped, in N-Triples.
    pub ntriples: &'static str,
    /// Outcome summary per constraint id, e.g. `violated(45)` or `ok`.
    pub expected: BTreeMap<String, String>,
}

impl Fixture {
    pub fn graph(&self) -> Graph {
        parse_ntriples_str(self.ntriples).expect("shipped fixture parses")
    }
}

#[derive(Debug, Clone)]
pub struct Pack {
    pub vocabulary: Vocabulary,
    pub catalog: Catalog,
    /// Catalog file as shipped.
    pub catalog_source: &'static str,
    pub fixtures: Vec<Fixture>,
}

impl Pack {
    pub fn fixture(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }
}

/// Loads an embedded pack. Packs are build-time resources, so a pack that
/// fails to load is a defect and panics.
pub fn load_pack(v: Vocabulary) -> Pack {
    let src = source(v);
    let catalog = load_catalog_str(src.catalog).unwrap_or_else(|e| panic!("{v} pack catalog: {e}"));
    let fixtures = src
        .fixtures
        .iter()
        .map(|(name, nt, expected)| Fixture {
            name,
            ntriples: nt,
            expected: serde_json::from_str(expected).unwrap_or_else(|e| panic!("{v}/{name} expectations: {e}")),
        })
        .collect();
    Pack { vocabulary: v, catalog, catalog_source: src.catalog, fixtures }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fixture {fixture}: {constraint_id} expected {expected}, got {got}")]
pub struct FixtureMismatch {
    pub fixture: String,
    pub constraint_id: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone)]
pub struct FixtureReport {
    /// Outcomes per fixture, in catalog order.
    pub runs: Vec<(String, Vec<CheckOutcome>)>,
    pub mismatches: Vec<FixtureMismatch>,
}

impl FixtureReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn into_result(self) -> Result<Self, FixtureMismatch> {
        match self.mismatches.first() {
            Some(m) => Err(m.clone()),
            None => Ok(self),
        }
    }
}

/// Checks every fixture of `pack` without a time budget and compares each
/// outcome with its expectation. Constraints without an expectation must
/// come out `ok`.
pub fn run_fixture_suite(pack: &Pack) -> FixtureReport {
    let opts = CheckOptions { limit: Some(DEFAULT_LIMIT), budget: None, parallel: true };
    let mut runs = Vec::new();
    let mut mismatches = Vec::new();
    for fx in &pack.fixtures {
        let outcomes = check_with(&fx.graph(), &pack.catalog, &opts);
        for o in &outcomes {
            let expected = fx.expected.get(&o.constraint_id).map(String::as_str).unwrap_or("ok");
            let got = o.status.to_string();
            if got != expected {
                mismatches.push(FixtureMismatch {
                    fixture: fx.name.to_string(),
                    constraint_id: o.constraint_id.clone(),
                    expected: expected.to_string(),
                    got,
                });
            }
        }
        runs.push((fx.name.to_string(), outcomes));
    }
    FixtureReport { runs, mismatches }
}
