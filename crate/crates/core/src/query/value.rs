//! Runtime values of filter expressions and their comparison rules.

use std::cmp::Ordering;
use std::str::FromStr;

use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;

use super::datatype::{is_decimal, is_double, is_integer};
use super::pattern::{ArithOp, CompareOp};
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{Iri, Literal, Term};

/// Raised when an operand has the wrong kind; the enclosing filter fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Numeric {
    Integer(i128),
    Decimal(Decimal),
    Double(f64),
}

const INTEGER_TYPES: [&str; 13] = [
    xsd::INTEGER,
    xsd::NON_NEGATIVE_INTEGER,
    "http://www.w3.org/2001/XMLSchema#positiveInteger",
    "http://www.w3.org/2001/XMLSchema#negativeInteger",
    "http://www.w3.org/2001/XMLSchema#nonPositiveInteger",
    "http://www.w3.org/2001/XMLSchema#long",
    "http://www.w3.org/2001/XMLSchema#int",
    "http://www.w3.org/2001/XMLSchema#short",
    "http://www.w3.org/2001/XMLSchema#byte",
    "http://www.w3.org/2001/XMLSchema#unsignedLong",
    "http://www.w3.org/2001/XMLSchema#unsignedInt",
    "http://www.w3.org/2001/XMLSchema#unsignedShort",
    "http://www.w3.org/2001/XMLSchema#unsignedByte",
];

const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";

pub fn is_numeric_datatype(dt: &str) -> bool {
    INTEGER_TYPES.contains(&dt) || dt == xsd::DECIMAL || dt == xsd::DOUBLE || dt == FLOAT
}

impl Numeric {
    /// The value of a numeric literal; `None` for non-numeric datatypes or
    /// ill-formed lexical forms.
    pub fn from_literal(lit: &Literal) -> Option<Self> {
        let dt = lit.datatype().as_str();
        let lex = lit.lexical();
        if INTEGER_TYPES.contains(&dt) {
            if !is_integer(lex) {
                return None;
            }
            return Some(match lex.parse::<i128>() {
                Ok(i) => Numeric::Integer(i),
                Err(_) => Numeric::Double(lex.parse().ok()?),
            });
        }
        if dt == xsd::DECIMAL {
            if !is_decimal(lex) {
                return None;
            }
            return Some(match Decimal::from_str(lex) {
                Ok(d) => Numeric::Decimal(d),
                Err(_) => Numeric::Double(lex.parse().ok()?),
            });
        }
        if dt == xsd::DOUBLE || dt == FLOAT {
            if !is_double(lex) {
                return None;
            }
            return Some(Numeric::Double(match lex {
                "INF" | "+INF" => f64::INFINITY,
                "-INF" => f64::NEG_INFINITY,
                "NaN" => f64::NAN,
                _ => lex.parse().ok()?,
            }));
        }
        None
    }

    fn as_decimal(self) -> Option<Decimal> {
        match self {
            Numeric::Integer(i) => i64::try_from(i).ok().map(Decimal::from),
            Numeric::Decimal(d) => Some(d),
            Numeric::Double(_) => None,
        }
    }

    fn as_double(self) -> f64 {
        match self {
            Numeric::Integer(i) => i as f64,
            Numeric::Decimal(d) => d.to_f64().unwrap_or(f64::NAN),
            Numeric::Double(f) => f,
        }
    }

    /// Compares after promoting integer to decimal to double.
    pub fn partial_cmp(self, other: Numeric) -> Option<Ordering> {
        match (self, other) {
            (Numeric::Integer(a), Numeric::Integer(b)) => Some(a.cmp(&b)),
            (Numeric::Double(_), _) | (_, Numeric::Double(_)) => {
                self.as_double().partial_cmp(&other.as_double())
            }
            _ => match (self.as_decimal(), other.as_decimal()) {
                (Some(a), Some(b)) => Some(a.cmp(&b)),
                _ => self.as_double().partial_cmp(&other.as_double()),
            },
        }
    }

    pub fn arith(self, op: ArithOp, other: Numeric) -> Result<Numeric, TypeError> {
        if let (Numeric::Integer(a), Numeric::Integer(b)) = (self, other) {
            let r = match op {
                ArithOp::Add => a.checked_add(b),
                ArithOp::Sub => a.checked_sub(b),
                ArithOp::Mul => a.checked_mul(b),
                ArithOp::Div => None,
            };
            if let Some(r) = r {
                return Ok(Numeric::Integer(r));
            }
        }
        let doubles = matches!(self, Numeric::Double(_)) || matches!(other, Numeric::Double(_));
        if !doubles {
            if let (Some(a), Some(b)) = (self.as_decimal(), other.as_decimal()) {
                let r = match op {
                    ArithOp::Add => a.checked_add(b),
                    ArithOp::Sub => a.checked_sub(b),
                    ArithOp::Mul => a.checked_mul(b),
                    ArithOp::Div if b.is_zero() => return Err(TypeError),
                    ArithOp::Div => a.checked_div(b),
                };
                if let Some(r) = r {
                    return Ok(Numeric::Decimal(r.normalize()));
                }
            }
        }
        let (a, b) = (self.as_double(), other.as_double());
        Ok(Numeric::Double(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a / b,
        }))
    }

    pub fn to_term(self) -> Term {
        let (lex, dt) = match self {
            Numeric::Integer(i) => (i.to_string(), xsd::INTEGER),
            Numeric::Decimal(d) => {
                let mut s = d.normalize().to_string();
                if !s.contains('.') {
                    s.push_str(".0");
                }
                (s, xsd::DECIMAL)
            }
            Numeric::Double(f) => (
                if f.is_nan() {
                    "NaN".to_string()
                } else if f.is_infinite() {
                    if f > 0.0 { "INF" } else { "-INF" }.to_string()
                } else {
                    format!("{f:E}")
                },
                xsd::DOUBLE,
            ),
        };
        Term::Literal(Literal::typed(lex, Iri::new_unchecked(dt)).expect("numeric datatype"))
    }
}

/// The value an expression evaluates to.
#[derive(Debug, Clone)]
pub enum Val<'a> {
    Bool(bool),
    Term(&'a Term),
    Num(Numeric),
    /// A plain string produced by an expression such as `Lang`.
    Str(String),
}

/// Comparison classes; values of different classes are incomparable.
enum Kind<'a> {
    Num(Numeric),
    Str(&'a str),
    Lang(&'a str, &'a str),
    Bool(bool),
    /// Dates and other ordered types compared by lexical form within one datatype.
    Lexical(&'a str, &'a str),
    Iri(&'a str),
    Blank(&'a str),
    Other(&'a str, &'a str),
}

const LEXICALLY_ORDERED: [&str; 3] = [xsd::DATE, xsd::DATE_TIME, xsd::G_YEAR];

impl<'a> Val<'a> {
    pub fn into_term(self) -> Term {
        match self {
            Val::Bool(b) => Term::Literal(
                Literal::typed(b.to_string(), Iri::new_unchecked(xsd::BOOLEAN)).expect("boolean"),
            ),
            Val::Term(t) => t.clone(),
            Val::Num(n) => n.to_term(),
            Val::Str(s) => Term::Literal(Literal::string(s)),
        }
    }

    fn kind(&self) -> Result<Kind<'_>, TypeError> {
        Ok(match self {
            Val::Bool(b) => Kind::Bool(*b),
            Val::Num(n) => Kind::Num(*n),
            Val::Str(s) => Kind::Str(s),
            Val::Term(Term::Iri(i)) => Kind::Iri(i.as_str()),
            Val::Term(Term::BlankNode(b)) => Kind::Blank(b),
            Val::Term(Term::Literal(lit)) => {
                let dt = lit.datatype().as_str();
                if dt == xsd::STRING {
                    Kind::Str(lit.lexical())
                } else if dt == rdf::LANG_STRING {
                    Kind::Lang(lit.lexical(), lit.language().unwrap_or_default())
                } else if dt == xsd::BOOLEAN {
                    match lit.lexical() {
                        "true" | "1" => Kind::Bool(true),
                        "false" | "0" => Kind::Bool(false),
                        _ => return Err(TypeError),
                    }
                } else if is_numeric_datatype(dt) {
                    Kind::Num(Numeric::from_literal(lit).ok_or(TypeError)?)
                } else if LEXICALLY_ORDERED.contains(&dt) {
                    Kind::Lexical(lit.lexical(), dt)
                } else {
                    Kind::Other(lit.lexical(), dt)
                }
            }
        })
    }

    pub fn numeric(&self) -> Result<Numeric, TypeError> {
        match self.kind()? {
            Kind::Num(n) => Ok(n),
            _ => Err(TypeError),
        }
    }

    /// Applies a comparison operator. Values of different kinds, and
    /// ordering operators on unordered kinds, are type errors.
    pub fn compare(&self, op: CompareOp, other: &Val<'_>) -> Result<bool, TypeError> {
        let equality = matches!(op, CompareOp::Eq | CompareOp::Ne);
        let ord = match (self.kind()?, other.kind()?) {
            (Kind::Num(a), Kind::Num(b)) => match a.partial_cmp(b) {
                Some(o) => o,
                None => return Ok(op == CompareOp::Ne),
            },
            (Kind::Str(a), Kind::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            (Kind::Bool(a), Kind::Bool(b)) => a.cmp(&b),
            (Kind::Lexical(a, da), Kind::Lexical(b, db)) if da == db => a.cmp(b),
            (Kind::Lang(a, la), Kind::Lang(b, lb)) if equality => {
                if a == b && la == lb {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            (Kind::Iri(a), Kind::Iri(b)) | (Kind::Blank(a), Kind::Blank(b)) if equality => {
                if a == b {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            (Kind::Other(a, da), Kind::Other(b, db)) if equality && da == db => {
                if a == b {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            _ => return Err(TypeError),
        };
        Ok(op.holds(ord))
    }

    /// Effective boolean value.
    pub fn truth(&self) -> Result<bool, TypeError> {
        match self.kind()? {
            Kind::Bool(b) => Ok(b),
            Kind::Num(Numeric::Integer(i)) => Ok(i != 0),
            Kind::Num(Numeric::Decimal(d)) => Ok(!d.is_zero()),
            Kind::Num(Numeric::Double(f)) => Ok(f != 0.0 && !f.is_nan()),
            Kind::Str(s) => Ok(!s.is_empty()),
            Kind::Lang(s, _) => Ok(!s.is_empty()),
            _ => Err(TypeError),
        }
    }

    /// Text a regex runs over: lexical form of a literal or IRI text.
    pub fn text(&self) -> Result<std::borrow::Cow<'_, str>, TypeError> {
        match self {
            Val::Term(Term::Literal(l)) => Ok(l.lexical().into()),
            Val::Term(Term::Iri(i)) => Ok(i.as_str().into()),
            Val::Str(s) => Ok(s.as_str().into()),
            _ => Err(TypeError),
        }
    }

    pub fn literal(&self) -> Result<&Literal, TypeError> {
        match self {
            Val::Term(Term::Literal(l)) => Ok(l),
            _ => Err(TypeError),
        }
    }
}
