use thiserror::Error;

use crate::model::{Bound, Constraint, FamilyKind, Status};
use crate::query::{CompareOp, Expr, Pattern, Slot, Variable};
use crate::rdf::{vocab, Iri, Literal, Term};

/// Default bound on cycle search depth.
pub const DEFAULT_CYCLE_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{constraint_id}: {reason}")]
pub struct CompileError {
    pub constraint_id: String,
    pub reason: String,
}

/// Where a violation's path comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PathSource {
    None,
    Fixed(Iri),
    Var(Variable),
}

/// One pattern whose solutions are violations.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub pattern: Pattern,
    pub focus: Variable,
    pub path: PathSource,
    pub value: Option<Variable>,
}

/// An executable form of one constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Compiled {
    /// The union of the branches' violations.
    Query(Vec<Branch>),
    /// Nodes that reach themselves along `property` within `max_depth` hops.
    Reachability {
        property: Iri,
        class: Option<Iri>,
        max_depth: usize,
    },
}

fn x() -> Variable {
    Variable::new("x")
}

fn v() -> Variable {
    Variable::new("v")
}

fn var(name: &str) -> Variable {
    Variable::new(name)
}

fn t(s: impl Into<Slot>, p: &Iri, o: impl Into<Slot>) -> Pattern {
    Pattern::triple(s, Term::Iri(p.clone()), o)
}

fn typed(s: impl Into<Slot>, class: &Iri) -> Pattern {
    Pattern::triple(s, Term::Iri(rdf_type()), Term::Iri(class.clone()))
}

fn rdf_type() -> Iri {
    Iri::new(vocab::rdf::TYPE).expect("static IRI")
}

fn ev(v: &Variable) -> Expr {
    Expr::var(v)
}

fn lit(l: &Literal) -> Expr {
    Expr::constant(Term::Literal(l.clone()))
}

/// Prepends the optional class restriction on `?x`.
fn scoped(class: Option<&Iri>, mut parts: Vec<Pattern>) -> Pattern {
    if let Some(c) = class {
        parts.insert(0, typed(x(), c));
    }
    Pattern::And(parts)
}

fn branch(pattern: Pattern, path: PathSource, value: Option<Variable>) -> Branch {
    Branch { pattern, focus: x(), path, value }
}

struct Ctx<'a> {
    c: &'a Constraint,
}

impl Ctx<'_> {
    fn fail(&self, reason: impl Into<String>) -> CompileError {
        CompileError { constraint_id: self.c.id.clone(), reason: reason.into() }
    }

    fn iri(&self, name: &str) -> Result<&Iri, CompileError> {
        self.c.params.iri(name).ok_or_else(|| self.fail(format!("missing parameter '{name}'")))
    }

    fn opt_iri(&self, name: &str) -> Option<&Iri> {
        self.c.params.iri(name)
    }

    fn iris(&self, name: &str) -> Result<&[Iri], CompileError> {
        self.c.params.iris(name).ok_or_else(|| self.fail(format!("missing parameter '{name}'")))
    }

    fn text(&self, name: &str) -> Result<&str, CompileError> {
        self.c.params.text(name).ok_or_else(|| self.fail(format!("missing parameter '{name}'")))
    }

    fn count(&self, name: &str) -> Result<Option<u64>, CompileError> {
        let Some(l) = self.c.params.number(name) else {
            return Ok(None);
        };
        l.lexical()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| self.fail(format!("parameter '{name}' must be a non-negative integer")))
    }
}

/// Compiles an implemented constraint. The result depends only on the
/// constraint, never on a graph.
pub fn compile(c: &Constraint) -> Result<Compiled, CompileError> {
    let cx = Ctx { c };
    if c.status != Status::Implemented {
        return Err(cx.fail("constraint is not implemented"));
    }
    let class = cx.opt_iri("class");
    let fixed = |p: &Iri| PathSource::Fixed(p.clone());
    let branches = match c.family.kind {
        FamilyKind::ExistentialQuantification => {
            let (cl, p) = (cx.iri("class")?, cx.iri("property")?);
            vec![branch(
                Pattern::And(vec![typed(x(), cl), Pattern::not_exists(t(x(), p, var("_o")))]),
                fixed(p),
                None,
            )]
        }
        FamilyKind::UniversalQuantification | FamilyKind::ClassSpecificPropertyRange => {
            let (cl, p, vc) = (cx.iri("class")?, cx.iri("property")?, cx.iri("value-class")?);
            vec![branch(
                Pattern::And(vec![typed(x(), cl), t(x(), p, v()), Pattern::not_exists(typed(v(), vc))]),
                fixed(p),
                Some(v()),
            )]
        }
        FamilyKind::ConditionalProperty => {
            let (cl, p, q) = (cx.iri("class")?, cx.iri("if-property")?, cx.iri("then-property")?);
            vec![branch(
                Pattern::And(vec![typed(x(), cl), t(x(), p, var("_a")), Pattern::not_exists(t(x(), q, var("_b")))]),
                fixed(q),
                None,
            )]
        }
        FamilyKind::Cardinality { bound, qualified } => {
            let (cl, p) = (cx.iri("class")?, cx.iri("property")?);
            let n = cx.count("bound")?.ok_or_else(|| cx.fail("missing parameter 'bound'"))?;
            let value_class = if qualified { Some(cx.iri("value-class")?) } else { None };
            cardinality(cl, p, n, bound, value_class)
        }
        FamilyKind::MembershipInControlledVocabulary => {
            let (p, schemes) = (cx.iri("property")?, cx.iris("schemes")?);
            let in_scheme = Iri::new(vocab::skos::IN_SCHEME).expect("static IRI");
            let mut parts = vec![t(x(), p, v())];
            for s in schemes {
                parts.push(Pattern::not_exists(t(v(), &in_scheme, Term::Iri(s.clone()))));
            }
            vec![branch(scoped(class, parts), fixed(p), Some(v()))]
        }
        FamilyKind::ValueIsValidForDatatype => {
            let dt = cx.opt_iri("datatype");
            let invalid = Expr::not(Expr::IsValidForDatatype(Box::new(ev(&v())), dt.cloned()));
            let test = match dt {
                // Against a declared datatype, non-literals are invalid too.
                Some(_) => Expr::or(Expr::not(Expr::IsLiteral(Box::new(ev(&v())))), invalid),
                None => Expr::and(Expr::IsLiteral(Box::new(ev(&v()))), invalid),
            };
            let (triple, path) = match cx.opt_iri("property") {
                Some(p) => (t(x(), p, v()), fixed(p)),
                None => (Pattern::triple(x(), var("p"), v()), PathSource::Var(var("p"))),
            };
            vec![branch(scoped(class, vec![triple, Pattern::Filter(test)]), path, Some(v()))]
        }
        FamilyKind::InverseFunctionalProperty => {
            let p = cx.iri("property")?;
            vec![branch(
                Pattern::And(vec![
                    t(x(), p, v()),
                    t(var("y"), p, v()),
                    Pattern::Filter(Expr::not(Expr::same_term(ev(&x()), ev(&var("y"))))),
                ]),
                fixed(p),
                Some(v()),
            )]
        }
        FamilyKind::LiteralRange => {
            let p = cx.iri("property")?;
            let mut out = Vec::new();
            if let Some(min) = c.params.number("min") {
                out.push(compare_branch(class, p, CompareOp::Lt, min));
            }
            if let Some(max) = c.params.number("max") {
                out.push(compare_branch(class, p, CompareOp::Gt, max));
            }
            out
        }
        FamilyKind::DataPropertyFacets => {
            let p = cx.iri("property")?;
            let mut out = Vec::new();
            for (name, op) in [
                ("min-inclusive", CompareOp::Lt),
                ("max-inclusive", CompareOp::Gt),
                ("min-exclusive", CompareOp::Le),
                ("max-exclusive", CompareOp::Ge),
            ] {
                if let Some(bound) = c.params.number(name) {
                    out.push(compare_branch(class, p, op, bound));
                }
            }
            for (name, op) in [("min-length", CompareOp::Lt), ("max-length", CompareOp::Gt)] {
                if let Some(n) = cx.count(name)? {
                    let len = Expr::StrLen(Box::new(ev(&v())));
                    let test = Expr::compare(op, len, lit(&Literal::integer(n as i64)));
                    out.push(branch(scoped(class, vec![t(x(), p, v()), Pattern::Filter(test)]), fixed(p), Some(v())));
                }
            }
            out
        }
        FamilyKind::LiteralValueComparison => {
            let (p, q) = (cx.iri("property")?, cx.iri("other-property")?);
            let op = c.params.operator("operator").ok_or_else(|| cx.fail("missing parameter 'operator'"))?;
            let w = var("w");
            let test = Expr::not(Expr::compare(op, ev(&v()), ev(&w)));
            vec![branch(
                scoped(class, vec![t(x(), p, v()), t(x(), q, w), Pattern::Filter(test)]),
                fixed(p),
                Some(v()),
            )]
        }
        FamilyKind::LiteralPatternMatching => {
            let p = cx.iri("property")?;
            let pattern = cx.text("pattern")?;
            let flags = c.params.text("flags").unwrap_or("");
            let test = Expr::and(
                Expr::IsLiteral(Box::new(ev(&v()))),
                Expr::not(Expr::regex(ev(&v()), pattern, flags)),
            );
            vec![branch(scoped(class, vec![t(x(), p, v()), Pattern::Filter(test)]), fixed(p), Some(v()))]
        }
        FamilyKind::IriPatternMatching => {
            let cl = cx.iri("class")?;
            let pattern = cx.text("pattern")?;
            let flags = c.params.text("flags").unwrap_or("");
            let test = Expr::and(Expr::IsIri(Box::new(ev(&x()))), Expr::not(Expr::regex(ev(&x()), pattern, flags)));
            vec![branch(Pattern::And(vec![typed(x(), cl), Pattern::Filter(test)]), PathSource::None, None)]
        }
        FamilyKind::PropertyDomain => {
            let (p, cl) = (cx.iri("property")?, cx.iri("class")?);
            vec![branch(
                Pattern::And(vec![t(x(), p, var("_o")), Pattern::not_exists(typed(x(), cl))]),
                fixed(p),
                None,
            )]
        }
        FamilyKind::PropertyRange => {
            let (p, cl) = (cx.iri("property")?, cx.iri("class")?);
            vec![branch(
                Pattern::And(vec![t(x(), p, v()), Pattern::not_exists(typed(v(), cl))]),
                fixed(p),
                Some(v()),
            )]
        }
        FamilyKind::ContextSpecificValidProperties => {
            let (cl, allowed) = (cx.iri("class")?, cx.iris("allowed")?);
            let q = var("q");
            let mut test: Option<Expr> = None;
            for p in allowed.iter().cloned().chain(std::iter::once(rdf_type())) {
                let differs = Expr::not(Expr::same_term(ev(&q), Expr::constant(Term::Iri(p))));
                test = Some(match test {
                    Some(acc) => Expr::and(acc, differs),
                    None => differs,
                });
            }
            let test = test.expect("rdf:type is always allowed");
            vec![branch(
                Pattern::And(vec![typed(x(), cl), Pattern::triple(x(), q.clone(), v()), Pattern::Filter(test)]),
                PathSource::Var(q),
                Some(v()),
            )]
        }
        FamilyKind::DisjointClasses => {
            let (a, b) = (cx.iri("class")?, cx.iri("other-class")?);
            vec![branch(Pattern::And(vec![typed(x(), a), typed(x(), b)]), PathSource::Fixed(rdf_type()), None)]
        }
        FamilyKind::LanguageTagCardinality => {
            let p = cx.iri("property")?;
            let mut out = Vec::new();
            if let Some(n) = cx.count("max-per-language")? {
                let (l, k) = (var("l"), var("k"));
                let inner = scoped(
                    class,
                    vec![
                        t(x(), p, v()),
                        Pattern::Filter(Expr::HasLanguage(Box::new(ev(&v())))),
                        Pattern::Bind { expr: Expr::Lang(Box::new(ev(&v()))), var: l.clone() },
                    ],
                );
                let grouped = Pattern::GroupCount {
                    inner: Box::new(inner),
                    group: vec![x(), l.clone()],
                    counted: v(),
                    into: k.clone(),
                };
                let test = Expr::compare(CompareOp::Gt, ev(&k), lit(&Literal::integer(n as i64)));
                out.push(branch(Pattern::And(vec![grouped, Pattern::Filter(test)]), fixed(p), Some(l)));
            }
            if let Some(range) = c.params.text("required-language") {
                let w = var("w");
                let has_match = Pattern::And(vec![
                    t(x(), p, w.clone()),
                    Pattern::Filter(Expr::LangMatches(Box::new(ev(&w)), range.to_string())),
                ]);
                let focus = match class {
                    Some(cl) => typed(x(), cl),
                    None => t(x(), p, var("_any")),
                };
                out.push(branch(Pattern::And(vec![focus, Pattern::not_exists(has_match)]), fixed(p), None));
            }
            out
        }
        FamilyKind::LanguageTagMatching => {
            let p = cx.iri("property")?;
            let range = cx.text("range")?;
            let test = Expr::and(
                Expr::IsLiteral(Box::new(ev(&v()))),
                Expr::not(Expr::LangMatches(Box::new(ev(&v())), range.to_string())),
            );
            vec![branch(scoped(class, vec![t(x(), p, v()), Pattern::Filter(test)]), fixed(p), Some(v()))]
        }
        FamilyKind::AllowedValues => {
            let (p, values) = (cx.iri("property")?, cx.iris("values")?);
            let mut parts = vec![t(x(), p, v())];
            for allowed in values {
                let differs = Expr::not(Expr::same_term(ev(&v()), Expr::constant(Term::Iri(allowed.clone()))));
                parts.push(Pattern::Filter(differs));
            }
            vec![branch(scoped(class, parts), fixed(p), Some(v()))]
        }
        FamilyKind::DeclaredPropertyCompleteness => {
            let (cl, path) = (cx.iri("class")?, cx.iris("path")?);
            if path.is_empty() {
                return Err(cx.fail("parameter 'path' must name at least one property"));
            }
            let q = var("q");
            let mut parts = vec![typed(x(), cl)];
            let mut from = x();
            for (i, hop) in path.iter().enumerate() {
                let to = if i + 1 == path.len() { q.clone() } else { var(&format!("n{i}")) };
                parts.push(t(from, hop, to.clone()));
                from = to;
            }
            parts.push(Pattern::not_exists(Pattern::triple(x(), q.clone(), var("_z"))));
            vec![branch(Pattern::And(parts), PathSource::Var(q), None)]
        }
        FamilyKind::StructureAcyclicity => {
            let p = cx.iri("property")?;
            let depth = cx.count("max-depth")?.map(|d| d as usize).unwrap_or(DEFAULT_CYCLE_DEPTH);
            if depth == 0 {
                return Err(cx.fail("parameter 'max-depth' must be positive"));
            }
            return Ok(Compiled::Reachability { property: p.clone(), class: class.cloned(), max_depth: depth });
        }
        FamilyKind::Descriptive => return Err(cx.fail(format!("family {} has no compiler", c.family.id))),
    };
    if branches.is_empty() {
        return Err(cx.fail("no bound or facet given"));
    }
    Ok(Compiled::Query(branches))
}

/// Violations where `?v <op> bound` holds.
fn compare_branch(class: Option<&Iri>, p: &Iri, op: CompareOp, bound: &Literal) -> Branch {
    let test = Expr::compare(op, ev(&v()), lit(bound));
    branch(scoped(class, vec![t(x(), p, v()), Pattern::Filter(test)]), PathSource::Fixed(p.clone()), Some(v()))
}

fn cardinality(class: &Iri, p: &Iri, n: u64, bound: Bound, value_class: Option<&Iri>) -> Vec<Branch> {
    let values = |subject: Variable| {
        let mut parts = vec![t(subject, p, v())];
        if let Some(vc) = value_class {
            parts.push(typed(v(), vc));
        }
        Pattern::And(parts)
    };
    let k = var("k");
    let grouped = Pattern::GroupCount {
        inner: Box::new(Pattern::And(vec![typed(x(), class), values(x())])),
        group: vec![x()],
        counted: v(),
        into: k.clone(),
    };
    let violating = match bound {
        Bound::Min => CompareOp::Lt,
        Bound::Max => CompareOp::Gt,
        Bound::Exact => CompareOp::Ne,
    };
    let test = Expr::compare(violating, ev(&k), lit(&Literal::integer(n as i64)));
    let path = PathSource::Fixed(p.clone());
    let mut out = vec![branch(Pattern::And(vec![grouped, Pattern::Filter(test)]), path.clone(), None)];
    // Foci without any matching value never appear in the grouped rows.
    if bound != Bound::Max && n > 0 {
        out.push(branch(Pattern::And(vec![typed(x(), class), Pattern::not_exists(values(x()))]), path, None));
    }
    out
}
