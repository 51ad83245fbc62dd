//! A naive all-bindings enumerator for patterns, written against the
//! definitions rather than the engine: every conjunct is tried against
//! every triple, filters run last, and expressions are evaluated by a
//! separate small interpreter that only understands the shapes the
//! generators emit.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use proptest::prelude::*;
use rdfval_core::query::{Binding, CompareOp, Expr, Pattern, Slot, TriplePattern, Variable};
use rdfval_core::rdf::{Term, Triple};

use super::*;

/// Enumerates solutions over `g` read as a set of triples.
pub fn solve(g: &[Triple], p: &Pattern, mu: &Binding) -> Vec<Binding> {
    let set: std::collections::BTreeSet<&Triple> = g.iter().collect();
    let g: Vec<Triple> = set.into_iter().cloned().collect();
    solve_set(&g, p, mu)
}

fn solve_set(g: &[Triple], p: &Pattern, mu: &Binding) -> Vec<Binding> {
    match p {
        Pattern::Triple(tp) => g.iter().filter_map(|t| unify(tp, t, mu)).collect(),
        Pattern::And(ps) => {
            let mut flat = Vec::new();
            flatten(ps, &mut flat);
            let mut sols = vec![mu.clone()];
            for q in &flat {
                if matches!(q, Pattern::Triple(_) | Pattern::GroupCount { .. }) {
                    sols = sols.iter().flat_map(|s| solve_set(g, q, s)).collect();
                }
            }
            for q in &flat {
                if let Pattern::Bind { expr, var } = q {
                    sols = sols
                        .into_iter()
                        .filter_map(|mut s| {
                            let v = eval(expr, &s).ok()?;
                            s.insert(var.clone(), v.into_term());
                            Some(s)
                        })
                        .collect();
                }
            }
            for q in &flat {
                if let Pattern::Filter(e) = q {
                    sols.retain(|s| truth(e, s) == Some(true));
                }
            }
            for q in &flat {
                if let Pattern::NotExists(inner) = q {
                    sols.retain(|s| solve_set(g, inner, s).is_empty());
                }
            }
            sols
        }
        Pattern::NotExists(q) => {
            if solve_set(g, q, mu).is_empty() {
                vec![mu.clone()]
            } else {
                vec![]
            }
        }
        Pattern::Filter(e) => {
            if truth(e, mu) == Some(true) {
                vec![mu.clone()]
            } else {
                vec![]
            }
        }
        Pattern::GroupCount { inner, group, counted, into } => {
            let rows = solve_set(g, inner, &Binding::new());
            let mut counts: BTreeMap<Vec<Term>, i64> = BTreeMap::new();
            for r in &rows {
                if r.contains_key(counted) {
                    *counts.entry(group.iter().map(|v| r[v].clone()).collect()).or_default() += 1;
                }
            }
            if group.is_empty() && counts.is_empty() {
                counts.insert(vec![], 0);
            }
            counts
                .into_iter()
                .filter_map(|(key, n)| {
                    let mut s = mu.clone();
                    for (v, t) in group.iter().zip(key).chain(std::iter::once((into, int(n)))) {
                        match s.get(v) {
                            Some(existing) if *existing != t => return None,
                            _ => {
                                s.insert(v.clone(), t);
                            }
                        }
                    }
                    Some(s)
                })
                .collect()
        }
        Pattern::Bind { expr, var } => match eval(expr, mu) {
            Ok(v) => {
                let mut s = mu.clone();
                s.insert(var.clone(), v.into_term());
                vec![s]
            }
            Err(()) => vec![],
        },
    }
}

fn flatten<'a>(ps: &'a [Pattern], out: &mut Vec<&'a Pattern>) {
    for p in ps {
        match p {
            Pattern::And(qs) => flatten(qs, out),
            other => out.push(other),
        }
    }
}

fn unify(tp: &TriplePattern, t: &Triple, mu: &Binding) -> Option<Binding> {
    let mut s = mu.clone();
    let p = Term::Iri(t.predicate.clone());
    for (slot, term) in [(&tp.s, &t.subject), (&tp.p, &p), (&tp.o, &t.object)] {
        match slot {
            Slot::Term(c) => {
                if c != term {
                    return None;
                }
            }
            Slot::Var(v) => match s.get(v) {
                Some(b) if b != term => return None,
                Some(_) => {}
                None => {
                    s.insert(v.clone(), term.clone());
                }
            },
        }
    }
    Some(s)
}

#[derive(Debug, Clone)]
pub enum OVal {
    Bool(bool),
    Term(Term),
    Int(i64),
}

impl OVal {
    fn into_term(self) -> Term {
        match self {
            OVal::Bool(b) => typed(&b.to_string(), "http://www.w3.org/2001/XMLSchema#boolean"),
            OVal::Term(t) => t,
            OVal::Int(i) => int(i),
        }
    }
}

/// Comparison classes as defined for the kernel's filters.
#[derive(Debug, PartialEq)]
enum K {
    Num(i64),
    Str(String),
    Lang(String, String),
    Date(String),
    Iri(String),
    Blank(String),
    Bool(bool),
    Other(String, String),
}

fn kind(v: &OVal) -> Result<K, ()> {
    Ok(match v {
        OVal::Bool(b) => K::Bool(*b),
        OVal::Int(i) => K::Num(*i),
        OVal::Term(Term::Iri(i)) => K::Iri(i.as_str().to_string()),
        OVal::Term(Term::BlankNode(b)) => K::Blank(b.clone()),
        OVal::Term(Term::Literal(l)) => {
            let dt = l.datatype().as_str();
            let lex = l.lexical();
            if dt == XSD_INTEGER {
                let body = lex.strip_prefix(['+', '-']).unwrap_or(lex);
                if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(());
                }
                K::Num(lex.parse().map_err(|_| ())?)
            } else if dt == "http://www.w3.org/2001/XMLSchema#string" {
                K::Str(lex.to_string())
            } else if let Some(tag) = l.language() {
                K::Lang(lex.to_string(), tag.to_string())
            } else if dt == XSD_DATE {
                K::Date(lex.to_string())
            } else if dt == "http://www.w3.org/2001/XMLSchema#boolean" {
                K::Bool(lex == "true" || lex == "1")
            } else {
                K::Other(lex.to_string(), dt.to_string())
            }
        }
    })
}

fn cmp_op(op: CompareOp, a: &OVal, b: &OVal) -> Result<bool, ()> {
    let ordering_op = !matches!(op, CompareOp::Eq | CompareOp::Ne);
    let ord: Ordering = match (kind(a)?, kind(b)?) {
        (K::Num(x), K::Num(y)) => x.cmp(&y),
        (K::Str(x), K::Str(y)) | (K::Date(x), K::Date(y)) => x.as_bytes().cmp(y.as_bytes()),
        (K::Bool(x), K::Bool(y)) => x.cmp(&y),
        (x @ (K::Iri(_) | K::Blank(_) | K::Lang(..) | K::Other(..)), y) if !ordering_op => {
            let same_class = std::mem::discriminant(&x) == std::mem::discriminant(&y);
            let same_dt = match (&x, &y) {
                (K::Other(_, d1), K::Other(_, d2)) => d1 == d2,
                _ => true,
            };
            if !same_class || !same_dt {
                return Err(());
            }
            if x == y {
                Ordering::Equal
            } else {
                Ordering::Less
            }
        }
        _ => return Err(()),
    };
    Ok(match op {
        CompareOp::Eq => ord == Ordering::Equal,
        CompareOp::Ne => ord != Ordering::Equal,
        CompareOp::Lt => ord == Ordering::Less,
        CompareOp::Le => ord != Ordering::Greater,
        CompareOp::Gt => ord == Ordering::Greater,
        CompareOp::Ge => ord != Ordering::Less,
    })
}

/// Comparison of two terms under the filter rules; `None` on a type error.
pub fn compare_terms(op: &str, a: &Term, b: &Term) -> Option<bool> {
    let op = match op {
        "=" => CompareOp::Eq,
        "!=" => CompareOp::Ne,
        "<" => CompareOp::Lt,
        "<=" => CompareOp::Le,
        ">" => CompareOp::Gt,
        ">=" => CompareOp::Ge,
        other => panic!("operator {other}"),
    };
    cmp_op(op, &OVal::Term(a.clone()), &OVal::Term(b.clone())).ok()
}

pub fn eval(e: &Expr, mu: &Binding) -> Result<OVal, ()> {
    Ok(match e {
        Expr::Var(v) => OVal::Term(mu.get(v).cloned().ok_or(())?),
        Expr::Constant(t) => OVal::Term(t.clone()),
        Expr::Compare(op, a, b) => OVal::Bool(cmp_op(*op, &eval(a, mu)?, &eval(b, mu)?)?),
        Expr::Regex { arg, pattern, flags } => {
            let text = match eval(arg, mu)? {
                OVal::Term(Term::Literal(l)) => l.lexical().to_string(),
                OVal::Term(Term::Iri(i)) => i.as_str().to_string(),
                _ => return Err(()),
            };
            let (text, pattern) = if flags.contains('i') {
                (text.to_lowercase(), pattern.to_lowercase())
            } else {
                (text, pattern.clone())
            };
            OVal::Bool(match pattern.as_str() {
                p if p.starts_with('^') => text.starts_with(&p[1..]),
                p if p.ends_with('$') => text.ends_with(&p[..p.len() - 1]),
                p => text.contains(p),
            })
        }
        Expr::HasLanguage(a) => OVal::Bool(matches!(eval(a, mu)?, OVal::Term(Term::Literal(l)) if l.language().is_some())),
        Expr::IsIri(a) => OVal::Bool(matches!(eval(a, mu)?, OVal::Term(Term::Iri(_)))),
        Expr::IsLiteral(a) => OVal::Bool(matches!(eval(a, mu)?, OVal::Term(Term::Literal(_)) | OVal::Int(_) | OVal::Bool(_))),
        Expr::LangMatches(a, range) => match eval(a, mu)? {
            OVal::Term(Term::Literal(l)) => {
                let tag = l.language().unwrap_or("");
                OVal::Bool(if range == "*" {
                    !tag.is_empty()
                } else {
                    tag == range || tag.starts_with(&format!("{range}-"))
                })
            }
            _ => return Err(()),
        },
        Expr::Not(a) => OVal::Bool(!truth(a, mu).ok_or(())?),
        Expr::And(a, b) => match (truth(a, mu), truth(b, mu)) {
            (Some(false), _) | (_, Some(false)) => OVal::Bool(false),
            (Some(true), Some(true)) => OVal::Bool(true),
            _ => return Err(()),
        },
        Expr::Or(a, b) => match (truth(a, mu), truth(b, mu)) {
            (Some(true), _) | (_, Some(true)) => OVal::Bool(true),
            (Some(false), Some(false)) => OVal::Bool(false),
            _ => return Err(()),
        },
        Expr::SameTerm(a, b) => OVal::Bool(eval(a, mu)?.into_term() == eval(b, mu)?.into_term()),
        Expr::StrLen(a) => match eval(a, mu)? {
            OVal::Term(Term::Literal(l)) => OVal::Int(l.lexical().chars().count() as i64),
            _ => return Err(()),
        },
        other => panic!("oracle does not interpret {other:?}"),
    })
}

pub fn truth(e: &Expr, mu: &Binding) -> Option<bool> {
    match eval(e, mu).ok()? {
        OVal::Bool(b) => Some(b),
        OVal::Int(i) => Some(i != 0),
        v => match kind(&v).ok()? {
            K::Bool(b) => Some(b),
            K::Num(i) => Some(i != 0),
            K::Str(s) => Some(!s.is_empty()),
            K::Lang(s, _) => Some(!s.is_empty()),
            _ => None,
        },
    }
}

pub fn sorted(mut v: Vec<Binding>) -> Vec<Binding> {
    v.sort();
    v
}

// ---- random patterns -------------------------------------------------

pub const VARS: [&str; 4] = ["a", "b", "c", "d"];

pub fn var(name: &str) -> Variable {
    Variable::new(name)
}

fn subject_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        3 => prop::sample::select(VARS.to_vec()).prop_map(|v| Slot::Var(var(v))),
        1 => (0..NODES).prop_map(|i| Slot::Term(node(i))),
    ]
}

fn predicate_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        1 => prop::sample::select(VARS.to_vec()).prop_map(|v| Slot::Var(var(v))),
        4 => (0..PREDICATES.len()).prop_map(|i| Slot::Term(Term::Iri(pred(PREDICATES[i])))),
        2 => Just(Slot::Term(Term::Iri(rdf_type()))),
    ]
}

fn object_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        3 => prop::sample::select(VARS.to_vec()).prop_map(|v| Slot::Var(var(v))),
        2 => any_object().prop_map(Slot::Term),
    ]
}

pub fn triple_pattern() -> impl Strategy<Value = TriplePattern> {
    (subject_slot(), predicate_slot(), object_slot()).prop_map(|(s, p, o)| TriplePattern { s, p, o })
}

/// A filter over `v`, in a shape the oracle interprets.
pub fn filter_on(v: Variable, other: Option<Variable>) -> BoxedStrategy<Expr> {
    let x = Expr::Var(v);
    let ops = prop::sample::select(vec![
        CompareOp::Eq,
        CompareOp::Ne,
        CompareOp::Lt,
        CompareOp::Le,
        CompareOp::Gt,
        CompareOp::Ge,
    ]);
    let mut choices: Vec<BoxedStrategy<Expr>> = vec![
        (ops.clone(), -1i64..5)
            .prop_map({
                let x = x.clone();
                move |(op, k)| Expr::compare(op, x.clone(), Expr::Constant(int(k)))
            })
            .boxed(),
        (ops.clone(), prop::sample::select(vec!["a", "b", "A"]))
            .prop_map({
                let x = x.clone();
                move |(op, s)| Expr::compare(op, x.clone(), Expr::Constant(string(s)))
            })
            .boxed(),
        (ops.clone(), prop::sample::select(vec!["2015-01-01", "2014-06-01"]))
            .prop_map({
                let x = x.clone();
                move |(op, d)| Expr::compare(op, x.clone(), Expr::Constant(typed(d, XSD_DATE)))
            })
            .boxed(),
        (prop::sample::select(vec!["^a", "b$", "^n1"]), prop::sample::select(vec!["", "i"]))
            .prop_map({
                let x = x.clone();
                move |(p, f)| Expr::regex(x.clone(), p, f)
            })
            .boxed(),
        Just(Expr::HasLanguage(Box::new(x.clone()))).boxed(),
        Just(Expr::not(Expr::IsIri(Box::new(x.clone())))).boxed(),
        Just(Expr::IsLiteral(Box::new(x.clone()))).boxed(),
        (ops.clone(), 0i64..4)
            .prop_map({
                let x = x.clone();
                move |(op, k)| Expr::compare(op, Expr::StrLen(Box::new(x.clone())), Expr::Constant(int(k)))
            })
            .boxed(),
        prop::sample::select(vec!["en", "*", "de"])
            .prop_map({
                let x = x.clone();
                move |r| Expr::LangMatches(Box::new(x.clone()), r.to_string())
            })
            .boxed(),
    ];
    if let Some(y) = other {
        let y = Expr::Var(y);
        choices.push(Just(Expr::not(Expr::same_term(x.clone(), y.clone()))).boxed());
        choices.push(
            ops.prop_map(move |op| Expr::compare(op, x.clone(), y.clone()))
                .boxed(),
        );
    }
    proptest::strategy::Union::new(choices).boxed()
}

fn vars_of(tps: &[TriplePattern]) -> Vec<Variable> {
    let mut out: Vec<Variable> = Vec::new();
    for tp in tps {
        for v in tp.slots().into_iter().filter_map(Slot::var) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
    out
}

/// Up to four conjuncts: one to three triple patterns, at most one
/// negation and at most one filter.
pub fn random_pattern() -> impl Strategy<Value = Pattern> {
    (
        prop::collection::vec(triple_pattern(), 1..=3),
        prop::option::of(triple_pattern()),
        any::<bool>(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
    )
        .prop_flat_map(|(tps, neg, with_filter, i1, i2)| {
            let vars = vars_of(&tps);
            let filter: BoxedStrategy<Option<Expr>> = if with_filter && !vars.is_empty() {
                let v = vars[i1.index(vars.len())].clone();
                let w = vars[i2.index(vars.len())].clone();
                let other = (w != v).then_some(w);
                filter_on(v, other).prop_map(Some).boxed()
            } else {
                Just(None).boxed()
            };
            let budget = 4 - tps.len();
            (Just(tps), Just(neg), filter, Just(budget))
        })
        .prop_map(|(tps, neg, filter, budget)| {
            let mut parts: Vec<Pattern> = tps.into_iter().map(Pattern::Triple).collect();
            let mut left = budget;
            if let Some(n) = neg {
                if left > 0 {
                    parts.push(Pattern::not_exists(Pattern::Triple(n)));
                    left -= 1;
                }
            }
            if let Some(f) = filter {
                if left > 0 {
                    parts.push(Pattern::Filter(f));
                }
            }
            Pattern::And(parts)
        })
}
