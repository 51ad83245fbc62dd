use std::collections::BTreeMap;

use serde::Serialize;

use super::catalog::Catalog;
use super::{Percent, Severity};

/// Counts for one vocabulary. Only implemented constraints are counted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VocabularyClassification {
    pub vocabulary: String,
    pub total: u64,
    pub not_implemented: u64,
    pub sparql: u64,
    pub constraint_language: u64,
    pub rdfs_owl: u64,
    pub info: u64,
    pub warning: u64,
    pub error: u64,
}

impl VocabularyClassification {
    fn pct(&self, n: u64) -> Percent {
        Percent::of(n, self.total)
    }

    /// SPARQL, CL, RDFS/OWL.
    pub fn expressivity_percentages(&self) -> [Percent; 3] {
        [self.pct(self.sparql), self.pct(self.constraint_language), self.pct(self.rdfs_owl)]
    }

    /// info, warning, error.
    pub fn severity_percentages(&self) -> [Percent; 3] {
        [self.pct(self.info), self.pct(self.warning), self.pct(self.error)]
    }

    pub fn severity_count(&self, s: Severity) -> u64 {
        match s {
            Severity::Info => self.info,
            Severity::Warning => self.warning,
            Severity::Error => self.error,
        }
    }

    /// The six percentage cells in table order.
    pub fn percentages(&self) -> [Percent; 6] {
        self.ratios().map(|(n, t)| Percent::of(n, t))
    }

    /// The six cells as unrounded (count, total) ratios.
    pub fn ratios(&self) -> [(u64, u64); 6] {
        [self.sparql, self.constraint_language, self.rdfs_owl, self.info, self.warning, self.error].map(|n| (n, self.total))
    }
}

/// Per-vocabulary classification, vocabularies sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassificationSummary {
    pub vocabularies: Vec<VocabularyClassification>,
}

impl ClassificationSummary {
    pub fn get(&self, vocabulary: &str) -> Option<&VocabularyClassification> {
        self.vocabularies.iter().find(|v| v.vocabulary == vocabulary)
    }

    /// Unweighted mean of each cell across vocabularies, taken over the
    /// unrounded ratios.
    pub fn mean_percentages(&self) -> [Percent; 6] {
        let rows: Vec<[(u64, u64); 6]> = self.vocabularies.iter().map(|v| v.ratios()).collect();
        std::array::from_fn(|i| Percent::mean_of_ratios(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()))
    }
}

pub fn classify(catalog: &Catalog) -> ClassificationSummary {
    let mut by_vocab: BTreeMap<&str, VocabularyClassification> = BTreeMap::new();
    for c in catalog {
        let v = by_vocab.entry(&c.vocabulary).or_insert_with(|| VocabularyClassification {
            vocabulary: c.vocabulary.clone(),
            ..Default::default()
        });
        if !c.is_implemented() {
            v.not_implemented += 1;
            continue;
        }
        v.total += 1;
        let e = c.expressivity.normalized();
        v.sparql += u64::from(e.sparql);
        v.constraint_language += u64::from(e.constraint_language);
        v.rdfs_owl += u64::from(e.rdfs_owl);
        match c.severity {
            Severity::Info => v.info += 1,
            Severity::Warning => v.warning += 1,
            Severity::Error => v.error += 1,
        }
    }
    ClassificationSummary { vocabularies: by_vocab.into_values().collect() }
}
