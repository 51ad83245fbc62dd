use rdfval_core::packs::Vocabulary;
use rdfval_core::rdf::Graph;
use serde::{Deserialize, Serialize};

const DISCO: &str = "http://rdf-vocabulary.ddialliance.org/discovery#";
const QB: &str = "http://purl.org/linked-data/cube#";
const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub class: String,
    pub instances: usize,
}

/// Size of a harvested graph and its instance counts for selected classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub triples: usize,
    pub classes: Vec<ClassCount>,
}

impl ProfileRow {
    pub fn count(&self, class: &str) -> Option<usize> {
        self.classes.iter().find(|c| c.class == class).map(|c| c.instances)
    }
}

/// Counts distinct rdf:type subjects per class, in the order given. A node
/// typed with several listed classes counts once for each of them.
pub fn profile<S: AsRef<str>>(g: &Graph, classes: &[S]) -> ProfileRow {
    ProfileRow {
        triples: g.len(),
        classes: classes
            .iter()
            .map(|c| ClassCount { class: c.as_ref().to_string(), instances: g.instances_of(c.as_ref()).len() })
            .collect(),
    }
}

/// Classes profiled by default for each vocabulary's data sets.
pub fn default_classes(v: Vocabulary) -> Vec<String> {
    let (ns, locals): (&str, &[&str]) = match v {
        Vocabulary::DdiRdf => (
            DISCO,
            &[
                "StudyGroup",
                "Study",
                "LogicalDataSet",
                "Universe",
                "Variable",
                "Question",
                "SummaryStatistics",
                "CategoryStatistics",
            ],
        ),
        Vocabulary::Qb => (QB, &["DataSet", "DataStructureDefinition", "Observation", "Slice"]),
        Vocabulary::Skos => (SKOS, &["ConceptScheme", "Concept"]),
    };
    let mut out: Vec<String> = locals.iter().map(|l| format!("{ns}{l}")).collect();
    if v == Vocabulary::DdiRdf {
        out.push(format!("{SKOS}Concept"));
    }
    out
}
