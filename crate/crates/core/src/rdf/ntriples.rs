use std::io::{Read, Write};

use super::lex::{LexError, Lexer};
use super::term::{has_scheme, Iri, Literal, Term};
use super::{BlankScope, Graph, GraphBuilder, ParseError, TermId};

/// Parses a whole N-Triples document. Fails atomically on the first error.
pub fn parse_ntriples<R: Read>(mut input: R) -> Result<Graph, ParseError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text = std::str::from_utf8(&bytes)?;
    parse_ntriples_str(text)
}

pub fn parse_ntriples_str(text: &str) -> Result<Graph, ParseError> {
    let mut builder = GraphBuilder::new();
    parse_ntriples_into(&mut builder, text, &mut BlankScope::new())?;
    Ok(builder.freeze())
}

/// Parses into an existing builder. On error no triple from `text` is kept.
pub fn parse_ntriples_into(
    builder: &mut GraphBuilder,
    text: &str,
    blanks: &mut BlankScope,
) -> Result<usize, ParseError> {
    let before = builder.staged();
    let mut lx = Lexer::new(text);
    let mut count = 0;
    let result = loop {
        lx.skip_inline_ws();
        match lx.peek() {
            None => break Ok(count),
            Some('\n' | '\r') => {
                lx.bump();
                continue;
            }
            Some('#') => {
                skip_comment(&mut lx);
                continue;
            }
            _ => {}
        }
        match statement(&mut lx, builder, blanks) {
            Ok(()) => count += 1,
            Err(e) => break Err(e),
        }
    };
    result.map_err(|e| {
        builder.truncate(before);
        ParseError::syntax(text, e)
    })
}

fn skip_comment(lx: &mut Lexer<'_>) {
    while let Some(c) = lx.peek() {
        if c == '\n' || c == '\r' {
            break;
        }
        lx.bump();
    }
}

fn statement(lx: &mut Lexer<'_>, b: &mut GraphBuilder, blanks: &mut BlankScope) -> Result<(), LexError> {
    let s = match lx.peek() {
        Some('<') => iri(lx, b)?,
        Some('_') => blank(lx, b, blanks)?,
        Some('"') => return Err(lx.err("a literal cannot be a subject")),
        _ => return Err(lx.err("expected subject")),
    };
    lx.skip_inline_ws();
    let p = match lx.peek() {
        Some('<') => iri(lx, b)?,
        _ => return Err(lx.err("expected predicate IRI")),
    };
    lx.skip_inline_ws();
    let o = match lx.peek() {
        Some('<') => iri(lx, b)?,
        Some('_') => blank(lx, b, blanks)?,
        Some('"') => literal(lx, b)?,
        _ => return Err(lx.err("expected object")),
    };
    lx.skip_inline_ws();
    if !lx.eat('.') {
        return Err(lx.err("expected '.'"));
    }
    lx.skip_inline_ws();
    match lx.peek() {
        None | Some('\n' | '\r') => {}
        Some('#') => skip_comment(lx),
        _ => return Err(lx.err("trailing content after '.'")),
    }
    b.insert_ids([s, p, o]);
    Ok(())
}

fn iri(lx: &mut Lexer<'_>, b: &mut GraphBuilder) -> Result<TermId, LexError> {
    let at = lx.pos;
    let text = lx.iriref()?;
    if !has_scheme(&text) {
        return Err(Lexer::err_at(at, format!("relative IRI <{text}>")));
    }
    Ok(b.intern_owned(Term::Iri(Iri::new_unchecked(text))))
}

fn blank(lx: &mut Lexer<'_>, b: &mut GraphBuilder, blanks: &mut BlankScope) -> Result<TermId, LexError> {
    if !lx.eat_str("_:") {
        return Err(lx.err("expected '_:'"));
    }
    let label = lx.blank_label()?;
    Ok(blanks.resolve(b, label))
}

fn literal(lx: &mut Lexer<'_>, b: &mut GraphBuilder) -> Result<TermId, LexError> {
    let lexical = lx.quoted(false)?;
    let at = lx.pos;
    let lit = if lx.eat_str("^^") {
        let dt_at = lx.pos;
        let dt = lx.iriref()?;
        if !has_scheme(&dt) {
            return Err(Lexer::err_at(dt_at, format!("relative datatype IRI <{dt}>")));
        }
        Literal::typed(lexical, Iri::new_unchecked(dt)).map_err(|e| Lexer::err_at(at, e.to_string()))?
    } else if lx.eat('@') {
        let tag = lx.lang_tag()?;
        Literal::lang(lexical, tag).map_err(|e| Lexer::err_at(at, e.to_string()))?
    } else {
        Literal::string(lexical)
    };
    Ok(b.intern_owned(Term::Literal(lit)))
}

/// Parses one term in N-Triples syntax. Blank-node labels are kept as
/// written.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut lx = Lexer::new(text);
    lx.skip_inline_ws();
    let term = match lx.peek() {
        Some('<') => {
            let at = lx.pos;
            let iri = lx.iriref().map_err(|e| ParseError::syntax(text, e))?;
            if !has_scheme(&iri) {
                return Err(ParseError::syntax(text, Lexer::err_at(at, format!("relative IRI <{iri}>"))));
            }
            Term::Iri(Iri::new_unchecked(iri))
        }
        Some('_') => {
            if !lx.eat_str("_:") {
                return Err(ParseError::syntax(text, lx.err("expected '_:'")));
            }
            let label = lx.blank_label().map_err(|e| ParseError::syntax(text, e))?;
            Term::BlankNode(label.to_string())
        }
        Some('"') => {
            let mut b = GraphBuilder::new();
            let id = literal(&mut lx, &mut b).map_err(|e| ParseError::syntax(text, e))?;
            b.term(id).clone()
        }
        _ => return Err(ParseError::syntax(text, lx.err("expected a term"))),
    };
    lx.skip_inline_ws();
    if !lx.at_end() {
        return Err(ParseError::syntax(text, lx.err("trailing content after term")));
    }
    Ok(term)
}

/// Canonical N-Triples: one line per triple, lines sorted bytewise.
pub fn serialize_ntriples(g: &Graph) -> String {
    let mut lines: Vec<String> = g.triples().map(|t| t.to_string()).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn write_ntriples<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    out.write_all(serialize_ntriples(g).as_bytes())
}
