use super::CheckOutcome;
use crate::rdf::{Graph, GraphBuilder, Iri, Literal, Term, Triple};

/// Namespace of the violation-graph properties: `root`, `path`, `value`,
/// `severity`, `message` and `constraint`.
pub const REPORT_NS: &str = "https://w3id.org/rdfval/report#";

fn prop(local: &str) -> Iri {
    Iri::new(format!("{REPORT_NS}{local}")).expect("static IRI")
}

/// One blank node per violation, labelled `v0`, `v1`, ... in outcome order.
/// Severity, message and constraint id are plain string literals.
pub fn violations_to_graph(outcomes: &[CheckOutcome]) -> Graph {
    let (root, path, value, severity, message, constraint) =
        (prop("root"), prop("path"), prop("value"), prop("severity"), prop("message"), prop("constraint"));
    let mut b = GraphBuilder::new();
    let mut n = 0usize;
    for o in outcomes {
        for v in &o.violations {
            let node = Term::BlankNode(format!("v{n}"));
            n += 1;
            let mut add = |p: &Iri, obj: Term| {
                b.insert(&Triple::new(node.clone(), p.clone(), obj).expect("blank subject"));
            };
            add(&root, v.focus.clone());
            if let Some(p) = &v.path {
                add(&path, Term::Iri(p.clone()));
            }
            if let Some(x) = &v.value {
                add(&value, x.clone());
            }
            add(&severity, Term::Literal(Literal::string(v.severity.as_str())));
            add(&message, Term::Literal(Literal::string(v.message.clone())));
            add(&constraint, Term::Literal(Literal::string(v.constraint_id.clone())));
        }
    }
    b.freeze()
}
