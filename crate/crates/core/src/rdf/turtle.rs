//! A Turtle subset: directives, prefixed names, `a`, object and
//! predicate-object lists, `[ ]` blank nodes, and typed, language-tagged,
//! numeric and boolean literals. Collections and quoted triples are rejected.

use std::collections::HashMap;
use std::io::Read;

use super::lex::{LexError, Lexer};
use super::term::{has_scheme, Iri, Literal, Term};
use super::vocab::{rdf, xsd};
use super::{BlankScope, Graph, GraphBuilder, ParseError, TermId};

pub fn parse_turtle_subset<R: Read>(mut input: R, base: Option<&Iri>) -> Result<Graph, ParseError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text = std::str::from_utf8(&bytes)?;
    parse_turtle_str(text, base)
}

pub fn parse_turtle_str(text: &str, base: Option<&Iri>) -> Result<Graph, ParseError> {
    let mut builder = GraphBuilder::new();
    parse_turtle_into(&mut builder, text, base, &mut BlankScope::new())?;
    Ok(builder.freeze())
}

/// Parses into an existing builder. On error no triple from `text` is kept.
pub fn parse_turtle_into(
    builder: &mut GraphBuilder,
    text: &str,
    base: Option<&Iri>,
    blanks: &mut BlankScope,
) -> Result<usize, ParseError> {
    let before = builder.staged();
    let mut p = Parser {
        lx: Lexer::new(text),
        b: builder,
        blanks,
        prefixes: HashMap::new(),
        base: base.map(|b| b.as_str().to_string()),
        unsupported: None,
    };
    let result = p.document();
    let unsupported = p.unsupported.take();
    match result {
        Ok(()) => Ok(builder.staged() - before),
        Err(e) => {
            builder.truncate(before);
            let (line, column) = Lexer::line_col(text, e.at);
            Err(match unsupported {
                Some(feature) => ParseError::UnsupportedFeature {
                    feature,
                    line,
                    column,
                },
                None => ParseError::Syntax {
                    line,
                    column,
                    reason: e.reason,
                },
            })
        }
    }
}

struct Parser<'a, 'b> {
    lx: Lexer<'a>,
    b: &'b mut GraphBuilder,
    blanks: &'b mut BlankScope,
    prefixes: HashMap<String, String>,
    base: Option<String>,
    unsupported: Option<String>,
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}')
}

impl Parser<'_, '_> {
    fn ws(&mut self) {
        loop {
            match self.lx.peek() {
                Some(' ' | '\t' | '\n' | '\r') => {
                    self.lx.bump();
                }
                Some('#') => {
                    while !matches!(self.lx.peek(), None | Some('\n' | '\r')) {
                        self.lx.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn unsupported(&mut self, feature: &str) -> LexError {
        self.unsupported = Some(feature.to_string());
        self.lx.err(format!("unsupported {feature}"))
    }

    fn expect(&mut self, c: char) -> Result<(), LexError> {
        self.ws();
        if self.lx.eat(c) {
            Ok(())
        } else {
            Err(self.lx.err(format!("expected '{c}'")))
        }
    }

    fn document(&mut self) -> Result<(), LexError> {
        loop {
            self.ws();
            if self.lx.at_end() {
                return Ok(());
            }
            if self.lx.eat_str("@prefix") {
                self.prefix_decl()?;
                self.expect('.')?;
            } else if self.lx.eat_str("@base") {
                self.base_decl()?;
                self.expect('.')?;
            } else if self.keyword("PREFIX") {
                self.prefix_decl()?;
            } else if self.keyword("BASE") {
                self.base_decl()?;
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    /// Case-insensitive SPARQL-style keyword followed by whitespace.
    fn keyword(&mut self, kw: &str) -> bool {
        let rest = self.lx.rest();
        if rest.len() > kw.len()
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && rest[kw.len()..].starts_with([' ', '\t', '\n', '\r'])
        {
            self.lx.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn prefix_decl(&mut self) -> Result<(), LexError> {
        self.ws();
        let start = self.lx.pos;
        while let Some(c) = self.lx.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) {
                return Err(self.lx.err("expected prefix name"));
            }
            self.lx.bump();
        }
        let name = self.lx.src[start..self.lx.pos].to_string();
        if !self.lx.eat(':') {
            return Err(self.lx.err("expected ':' after prefix name"));
        }
        self.ws();
        let iri = self.iriref()?;
        self.prefixes.insert(name, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), LexError> {
        self.ws();
        let iri = self.iriref()?;
        self.base = Some(iri);
        Ok(())
    }

    /// `<...>` resolved against the base.
    fn iriref(&mut self) -> Result<String, LexError> {
        let at = self.lx.pos;
        let raw = self.lx.iriref()?;
        if has_scheme(&raw) {
            return Ok(raw);
        }
        match &self.base {
            Some(base) => Ok(resolve(base, &raw)),
            None => Err(Lexer::err_at(at, format!("relative IRI <{raw}> without a base"))),
        }
    }

    fn triples(&mut self) -> Result<(), LexError> {
        self.ws();
        if self.lx.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.ws();
            if !matches!(self.lx.peek(), Some('.')) {
                self.predicate_object_list(subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(subject)
    }

    fn subject(&mut self) -> Result<TermId, LexError> {
        self.ws();
        match self.lx.peek() {
            Some('<') if self.lx.rest().starts_with("<<") => Err(self.unsupported("quoted triple")),
            Some('<') => self.iri_term(),
            Some('_') if self.lx.peek_nth(1) == Some(':') => self.blank_label(),
            Some('(') => Err(self.unsupported("collection")),
            Some('"' | '\'') => Err(self.lx.err("a literal cannot be a subject")),
            Some(c) if is_name_start(c) || c == ':' => {
                let iri = self.prefixed_name()?;
                Ok(self.b.intern_owned(Term::Iri(Iri::new_unchecked(iri))))
            }
            _ => Err(self.lx.err("expected subject")),
        }
    }

    fn predicate_object_list(&mut self, subject: TermId) -> Result<(), LexError> {
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.b.insert_ids([subject, predicate, object]);
                self.ws();
                if !self.lx.eat(',') {
                    break;
                }
            }
            self.ws();
            if !self.lx.eat(';') {
                return Ok(());
            }
            // Repeated and trailing semicolons are allowed.
            loop {
                self.ws();
                if !self.lx.eat(';') {
                    break;
                }
            }
            self.ws();
            if matches!(self.lx.peek(), Some('.' | ']') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<TermId, LexError> {
        self.ws();
        if self.lx.peek() == Some('a') && !self.lx.peek_nth(1).is_some_and(|c| is_name_char(c) || c == ':') {
            self.lx.bump();
            return Ok(self.b.intern_owned(Term::Iri(Iri::new_unchecked(rdf::TYPE))));
        }
        match self.lx.peek() {
            Some('<') => self.iri_term(),
            Some(c) if is_name_start(c) || c == ':' => {
                let iri = self.prefixed_name()?;
                Ok(self.b.intern_owned(Term::Iri(Iri::new_unchecked(iri))))
            }
            _ => Err(self.lx.err("expected predicate")),
        }
    }

    fn object(&mut self) -> Result<TermId, LexError> {
        self.ws();
        match self.lx.peek() {
            Some('<') if self.lx.rest().starts_with("<<") => Err(self.unsupported("quoted triple")),
            Some('<') => self.iri_term(),
            Some('_') if self.lx.peek_nth(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('(') => Err(self.unsupported("collection")),
            Some('"' | '\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => self.numeric(),
            Some(c) if is_name_start(c) || c == ':' => {
                if let Some(b) = self.boolean() {
                    return Ok(b);
                }
                let iri = self.prefixed_name()?;
                Ok(self.b.intern_owned(Term::Iri(Iri::new_unchecked(iri))))
            }
            _ => Err(self.lx.err("expected object")),
        }
    }

    fn iri_term(&mut self) -> Result<TermId, LexError> {
        let iri = self.iriref()?;
        Ok(self.b.intern_owned(Term::Iri(Iri::new_unchecked(iri))))
    }

    fn blank_label(&mut self) -> Result<TermId, LexError> {
        self.lx.eat_str("_:");
        let label = self.lx.blank_label()?;
        Ok(self.blanks.resolve(self.b, label))
    }

    fn blank_property_list(&mut self) -> Result<TermId, LexError> {
        self.lx.eat('[');
        let node = self.b.fresh_blank();
        self.ws();
        if self.lx.eat(']') {
            return Ok(node);
        }
        self.predicate_object_list(node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn boolean(&mut self) -> Option<TermId> {
        for word in ["true", "false"] {
            let rest = self.lx.rest();
            if rest.starts_with(word) && !rest[word.len()..].starts_with(|c: char| is_name_char(c) || c == ':') {
                self.lx.pos += word.len();
                let lit = Literal::typed(word, Iri::new_unchecked(xsd::BOOLEAN)).expect("boolean datatype");
                return Some(self.b.intern_owned(Term::Literal(lit)));
            }
        }
        None
    }

    fn numeric(&mut self) -> Result<TermId, LexError> {
        let start = self.lx.pos;
        let bytes = self.lx.src.as_bytes();
        let mut i = start;
        if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
            i += 1;
        }
        let int_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let int_digits = i - int_start;
        let mut frac_digits = 0;
        if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
                frac_digits += 1;
            }
        }
        let mut exponent = false;
        if int_digits + frac_digits > 0 && i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
            let mut j = i + 1;
            if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_start {
                exponent = true;
                i = j;
            }
        }
        if int_digits + frac_digits == 0 {
            return Err(self.lx.err("malformed number"));
        }
        let datatype = if exponent {
            xsd::DOUBLE
        } else if frac_digits > 0 {
            xsd::DECIMAL
        } else {
            xsd::INTEGER
        };
        let lexical = &self.lx.src[start..i];
        self.lx.pos = i;
        let lit = Literal::typed(lexical, Iri::new_unchecked(datatype)).expect("numeric datatype");
        Ok(self.b.intern_owned(Term::Literal(lit)))
    }

    fn rdf_literal(&mut self) -> Result<TermId, LexError> {
        let lexical = self.lx.quoted(true)?;
        let at = self.lx.pos;
        let lit = if self.lx.eat_str("^^") {
            let dt = match self.lx.peek() {
                Some('<') => self.iriref()?,
                _ => self.prefixed_name()?,
            };
            Literal::typed(lexical, Iri::new_unchecked(dt)).map_err(|e| Lexer::err_at(at, e.to_string()))?
        } else if self.lx.eat('@') {
            let tag = self.lx.lang_tag()?;
            Literal::lang(lexical, tag).map_err(|e| Lexer::err_at(at, e.to_string()))?
        } else {
            Literal::string(lexical)
        };
        Ok(self.b.intern_owned(Term::Literal(lit)))
    }

    /// `prefix:local`, expanded through the declared prefixes.
    fn prefixed_name(&mut self) -> Result<String, LexError> {
        let start = self.lx.pos;
        while let Some(c) = self.lx.peek() {
            if c == ':' || !is_name_char(c) {
                break;
            }
            self.lx.bump();
        }
        let prefix = &self.lx.src[start..self.lx.pos];
        if prefix.ends_with('.') || !self.lx.eat(':') {
            return Err(Lexer::err_at(start, "expected prefixed name"));
        }
        let Some(ns) = self.prefixes.get(prefix).cloned() else {
            return Err(Lexer::err_at(start, format!("undeclared prefix '{prefix}:'")));
        };
        let mut local = String::new();
        loop {
            match self.lx.peek() {
                Some(c) if is_name_char(c) || c == ':' => {
                    local.push(c);
                    self.lx.bump();
                }
                Some('%') => {
                    let rest = self.lx.rest().as_bytes();
                    if rest.len() < 3 || !rest[1].is_ascii_hexdigit() || !rest[2].is_ascii_hexdigit() {
                        return Err(self.lx.err("bad percent escape"));
                    }
                    local.push_str(&self.lx.rest()[..3]);
                    self.lx.pos += 3;
                }
                Some('\\') => {
                    let at = self.lx.pos;
                    self.lx.bump();
                    match self.lx.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => local.push(c),
                        _ => return Err(Lexer::err_at(at, "bad escape in local name")),
                    }
                }
                _ => break,
            }
        }
        // A trailing '.' terminates the statement rather than the name.
        while local.ends_with('.') {
            local.pop();
            self.lx.pos -= 1;
        }
        Ok(format!("{ns}{local}"))
    }
}

/// Reference resolution per RFC 3986 section 5.2, enough for relative
/// paths, fragments, queries and network-path references.
fn resolve(base: &str, reference: &str) -> String {
    let scheme_end = base.find(':').map_or(0, |i| i + 1);
    let scheme = &base[..scheme_end];
    let after_scheme = &base[scheme_end..];
    let (authority, path_and_more) = if let Some(rest) = after_scheme.strip_prefix("//") {
        let end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
        (&after_scheme[..end + 2], &rest[end..])
    } else {
        ("", after_scheme)
    };
    let base_path_end = path_and_more.find(['?', '#']).unwrap_or(path_and_more.len());
    let base_path = &path_and_more[..base_path_end];
    let base_no_fragment = &base[..base.find('#').unwrap_or(base.len())];

    if reference.starts_with("//") {
        return format!("{scheme}{reference}");
    }
    if reference.is_empty() {
        return base_no_fragment.to_string();
    }
    if reference.starts_with('#') {
        return format!("{base_no_fragment}{reference}");
    }
    if reference.starts_with('?') {
        return format!("{scheme}{authority}{base_path}{reference}");
    }
    let (ref_path, suffix) = match reference.find(['?', '#']) {
        Some(i) => (&reference[..i], &reference[i..]),
        None => (reference, ""),
    };
    let merged = if ref_path.starts_with('/') {
        ref_path.to_string()
    } else if !authority.is_empty() && base_path.is_empty() {
        format!("/{ref_path}")
    } else {
        let dir = &base_path[..base_path.rfind('/').map_or(0, |i| i + 1)];
        format!("{dir}{ref_path}")
    };
    format!("{scheme}{authority}{}{suffix}", remove_dot_segments(&merged))
}

fn remove_dot_segments(path: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    let absolute = path.starts_with('/');
    let segments: Vec<&str> = path.split('/').collect();
    let last = segments.len().saturating_sub(1);
    let mut trailing_slash = false;
    for (i, seg) in segments.iter().enumerate() {
        match *seg {
            "." => trailing_slash = i == last,
            ".." => {
                if out.len() > usize::from(absolute) {
                    out.pop();
                }
                trailing_slash = i == last;
            }
            s => {
                out.push(s);
                trailing_slash = false;
            }
        }
    }
    let mut joined = out.join("/");
    if trailing_slash {
        joined.push('/');
    }
    if absolute && !joined.starts_with('/') {
        joined.insert(0, '/');
    }
    joined
}
