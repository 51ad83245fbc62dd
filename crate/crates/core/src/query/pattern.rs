use std::collections::BTreeMap;
use std::fmt;

use crate::rdf::{Iri, Term};

/// A query variable, written `?name`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        Variable(name.strip_prefix('?').map(str::to_string).unwrap_or(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slot {
    Term(Term),
    Var(Variable),
}

impl From<Term> for Slot {
    fn from(t: Term) -> Self {
        Slot::Term(t)
    }
}

impl From<Variable> for Slot {
    fn from(v: Variable) -> Self {
        Slot::Var(v)
    }
}

impl From<&Variable> for Slot {
    fn from(v: &Variable) -> Self {
        Slot::Var(v.clone())
    }
}

impl Slot {
    pub fn var(&self) -> Option<&Variable> {
        match self {
            Slot::Var(v) => Some(v),
            Slot::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub s: Slot,
    pub p: Slot,
    pub o: Slot,
}

impl TriplePattern {
    pub fn new(s: impl Into<Slot>, p: impl Into<Slot>, o: impl Into<Slot>) -> Self {
        TriplePattern {
            s: s.into(),
            p: p.into(),
            o: o.into(),
        }
    }

    pub fn slots(&self) -> [&Slot; 3] {
        [&self.s, &self.p, &self.o]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    /// The operator whose truth value is the complement of this one on
    /// comparable operands.
    pub fn negated(self) -> Self {
        match self {
            CompareOp::Eq => CompareOp::Ne,
            CompareOp::Ne => CompareOp::Eq,
            CompareOp::Lt => CompareOp::Ge,
            CompareOp::Le => CompareOp::Gt,
            CompareOp::Gt => CompareOp::Le,
            CompareOp::Ge => CompareOp::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "=" | "==" => CompareOp::Eq,
            "!=" | "<>" => CompareOp::Ne,
            "<" => CompareOp::Lt,
            "<=" => CompareOp::Le,
            ">" => CompareOp::Gt,
            ">=" => CompareOp::Ge,
            _ => return None,
        })
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CompareOp::Eq => ord == Equal,
            CompareOp::Ne => ord != Equal,
            CompareOp::Lt => ord == Less,
            CompareOp::Le => ord != Greater,
            CompareOp::Gt => ord == Greater,
            CompareOp::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Filter and bind expressions. Evaluation errors make a filter false.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Compare(CompareOp, Box<Expr>, Box<Expr>),
    /// Regex over a literal's lexical form or an IRI's text.
    Regex {
        arg: Box<Expr>,
        pattern: String,
        flags: String,
    },
    /// Lexical validity of a literal against `datatype`, or against its own
    /// datatype when none is given.
    IsValidForDatatype(Box<Expr>, Option<Iri>),
    /// Basic language-range filtering on a literal's tag; `*` matches any tag.
    LangMatches(Box<Expr>, String),
    HasLanguage(Box<Expr>),
    IsIri(Box<Expr>),
    IsLiteral(Box<Expr>),
    Constant(Term),
    Var(Variable),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    /// The language tag of a literal as a plain string, empty if untagged.
    Lang(Box<Expr>),
    /// Term identity; never a type error.
    SameTerm(Box<Expr>, Box<Expr>),
    /// Length in characters of a literal's lexical form.
    StrLen(Box<Expr>),
}

impl Expr {
    pub fn var(v: &Variable) -> Self {
        Expr::Var(v.clone())
    }

    pub fn constant(t: Term) -> Self {
        Expr::Constant(t)
    }

    pub fn compare(op: CompareOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Compare(op, Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn same_term(a: Expr, b: Expr) -> Self {
        Expr::SameTerm(Box::new(a), Box::new(b))
    }

    pub fn regex(arg: Expr, pattern: impl Into<String>, flags: impl Into<String>) -> Self {
        Expr::Regex {
            arg: Box::new(arg),
            pattern: pattern.into(),
            flags: flags.into(),
        }
    }

    pub fn variables(&self, out: &mut Vec<Variable>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Constant(_) => {}
            Expr::Compare(_, a, b)
            | Expr::Arith(_, a, b)
            | Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::SameTerm(a, b) => {
                a.variables(out);
                b.variables(out);
            }
            Expr::Regex { arg, .. }
            | Expr::IsValidForDatatype(arg, _)
            | Expr::StrLen(arg)
            | Expr::LangMatches(arg, _)
            | Expr::HasLanguage(arg)
            | Expr::IsIri(arg)
            | Expr::IsLiteral(arg)
            | Expr::Not(arg)
            | Expr::Lang(arg) => arg.variables(out),
        }
    }
}

/// A graph pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum Pattern {
    Triple(TriplePattern),
    /// Conjunction; the empty conjunction yields one empty binding.
    And(Vec<Pattern>),
    /// Negation as failure under the current binding.
    NotExists(Box<Pattern>),
    Filter(Expr),
    /// Evaluates `inner` on its own, groups the solutions by `group` and
    /// binds the number of solutions with `counted` bound to `into`. The
    /// grouped rows are then joined with the enclosing conjunction.
    GroupCount {
        inner: Box<Pattern>,
        group: Vec<Variable>,
        counted: Variable,
        into: Variable,
    },
    /// Binds the value of `expr` to a fresh variable.
    Bind { expr: Expr, var: Variable },
}

impl Pattern {
    pub fn triple(s: impl Into<Slot>, p: impl Into<Slot>, o: impl Into<Slot>) -> Self {
        Pattern::Triple(TriplePattern::new(s, p, o))
    }

    pub fn not_exists(p: Pattern) -> Self {
        Pattern::NotExists(Box::new(p))
    }

    /// Variables a solution of this pattern binds.
    pub fn in_scope(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_scope(&mut out);
        out
    }

    fn collect_scope(&self, out: &mut Vec<Variable>) {
        let mut push = |v: &Variable| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Pattern::Triple(t) => {
                for v in t.slots().into_iter().filter_map(Slot::var) {
                    push(v);
                }
            }
            Pattern::And(ps) => {
                for p in ps {
                    p.collect_scope(out);
                }
            }
            Pattern::GroupCount { group, into, .. } => {
                for v in group {
                    push(v);
                }
                push(into);
            }
            Pattern::Bind { var, .. } => push(var),
            Pattern::NotExists(_) | Pattern::Filter(_) => {}
        }
    }
}

/// One solution: a total mapping of the pattern's in-scope variables.
pub type Binding = BTreeMap<Variable, Term>;
