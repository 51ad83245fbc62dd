use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use super::{parse_ntriples, parse_turtle_subset, Graph, Iri, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdfFormat {
    NTriples,
    Turtle,
}

impl RdfFormat {
    /// Guesses the format from the file name, ignoring a trailing `.gz`.
    /// Anything that is not `.ttl` / `.turtle` is read as N-Triples.
    pub fn from_path(path: &Path) -> Self {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let name = name.strip_suffix(".gz").unwrap_or(name);
        if name.ends_with(".ttl") || name.ends_with(".turtle") {
            RdfFormat::Turtle
        } else {
            RdfFormat::NTriples
        }
    }
}

/// Reads a graph from disk, decompressing when the name ends in `.gz`.
/// The graph is named after the file stem.
pub fn read_graph_file(path: &Path) -> Result<Graph, ParseError> {
    let file = BufReader::new(File::open(path)?);
    let gz = path.extension().is_some_and(|e| e == "gz");
    let reader: Box<dyn Read> = if gz {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    let mut graph = match RdfFormat::from_path(path) {
        RdfFormat::NTriples => parse_ntriples(reader)?,
        RdfFormat::Turtle => {
            let base = std::path::absolute(path)
                .ok()
                .and_then(|p| Iri::new(format!("file://{}", p.display())).ok());
            parse_turtle_subset(reader, base.as_ref())?
        }
    };
    graph.set_name(Some(dataset_name(path)));
    Ok(graph)
}

/// File name without directories and without `.gz` / format extensions.
pub(crate) fn dataset_name(path: &Path) -> String {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("data");
    let name = name.strip_suffix(".gz").unwrap_or(name);
    for ext in [".nt", ".ntriples", ".ttl", ".turtle"] {
        if let Some(stem) = name.strip_suffix(ext) {
            return stem.to_string();
        }
    }
    name.to_string()
}
