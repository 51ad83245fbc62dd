//! Core of the validator: RDF graphs, the pattern-matching kernel, the
//! constraint catalog model, the checker, the shipped packs and reporting.

pub mod checker;
pub mod model;
pub mod packs;
pub mod query;
pub mod rdf;
pub mod report;
