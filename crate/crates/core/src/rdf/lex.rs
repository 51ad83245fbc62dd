//! Token readers shared by the N-Triples and Turtle parsers.

pub(crate) struct LexError {
    pub at: usize,
    pub reason: String,
}

pub(crate) struct Lexer<'a> {
    pub src: &'a str,
    pub pos: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn err(&self, reason: impl Into<String>) -> LexError {
        LexError {
            at: self.pos,
            reason: reason.into(),
        }
    }

    pub fn err_at(at: usize, reason: impl Into<String>) -> LexError {
        LexError {
            at,
            reason: reason.into(),
        }
    }

    /// 1-based line and column (in characters) of a byte offset.
    pub fn line_col(src: &str, at: usize) -> (usize, usize) {
        let at = at.min(src.len());
        let before = &src[..at];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = before[line_start..].chars().count() + 1;
        (line, column)
    }

    pub fn skip_inline_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.pos += 1;
        }
    }

    /// Reads `<...>` with the cursor on `<`. Returns the unescaped text.
    pub fn iriref(&mut self) -> Result<String, LexError> {
        let start = self.pos;
        if !self.eat('<') {
            return Err(self.err("expected '<'"));
        }
        let mut out = String::new();
        loop {
            let at = self.pos;
            match self.bump() {
                None => return Err(Self::err_at(start, "unterminated IRI")),
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.hex_char(4, at)?),
                    Some('U') => out.push(self.hex_char(8, at)?),
                    _ => return Err(Self::err_at(at, "bad escape in IRI")),
                },
                Some(c) if (c as u32) <= 0x20 || "<\"{}|^`".contains(c) => {
                    return Err(Self::err_at(at, format!("character {c:?} not allowed in IRI")))
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn hex_char(&mut self, digits: usize, at: usize) -> Result<char, LexError> {
        let rest = self.rest();
        if rest.len() < digits || !rest.as_bytes()[..digits].iter().all(u8::is_ascii_hexdigit) {
            return Err(Self::err_at(at, "bad \\u escape"));
        }
        let code = u32::from_str_radix(&rest[..digits], 16).expect("checked hex");
        self.pos += digits;
        char::from_u32(code).ok_or_else(|| Self::err_at(at, format!("escape U+{code:X} is not a scalar value")))
    }

    /// Reads a blank node label with the cursor just after `_:`.
    pub fn blank_label(&mut self) -> Result<&'a str, LexError> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_alphanumeric() || c == '_' => {
                self.bump();
            }
            _ => return Err(self.err("bad blank node label")),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}') {
                self.bump();
            } else {
                break;
            }
        }
        while self.src[start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        Ok(&self.src[start..self.pos])
    }

    /// Reads a quoted string with the cursor on the opening quote. `turtle`
    /// enables the Turtle triple-quote forms and single quotes.
    pub fn quoted(&mut self, turtle: bool) -> Result<String, LexError> {
        let start = self.pos;
        let quote = match self.peek() {
            Some('"') => '"',
            Some('\'') if turtle => '\'',
            _ => return Err(self.err("expected '\"'")),
        };
        let triple: String = std::iter::repeat_n(quote, 3).collect();
        let long = turtle && self.rest().starts_with(&triple);
        if long {
            self.pos += 3;
        } else {
            self.pos += 1;
        }
        let mut out = String::new();
        loop {
            let at = self.pos;
            if long && self.rest().starts_with(&triple) {
                // A run of more than three quotes closes on the last three.
                let run = self.rest().chars().take_while(|&c| c == quote).count();
                if run >= 3 {
                    for _ in 0..run - 3 {
                        out.push(quote);
                    }
                    self.pos += run;
                    return Ok(out);
                }
            }
            match self.bump() {
                None => return Err(Self::err_at(start, "unterminated literal")),
                Some(c) if c == quote && !long => return Ok(out),
                Some('\n' | '\r') if !long => {
                    return Err(Self::err_at(start, "unterminated literal"))
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_char(4, at)?,
                        Some('U') => self.hex_char(8, at)?,
                        _ => return Err(Self::err_at(at, "bad escape in literal")),
                    };
                    out.push(c);
                }
                Some(c) => out.push(c),
            }
        }
    }

    /// Reads a language tag with the cursor just after `@`.
    pub fn lang_tag(&mut self) -> Result<&'a str, LexError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                self.bump();
            } else {
                break;
            }
        }
        let tag = &self.src[start..self.pos];
        if super::term::valid_language_tag(tag) {
            Ok(tag)
        } else {
            Err(Self::err_at(start, format!("bad language tag {tag:?}")))
        }
    }
}
