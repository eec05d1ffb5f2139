//! Character-level scanning shared by the text-format parsers.

use std::fmt;

/// A positioned parse error. Line and column are 1-based and point into the
/// input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token.is_empty() {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        } else {
            write!(
                f,
                "line {}, column {}: {} (at {:?})",
                self.line, self.column, self.message, self.token
            )
        }
    }
}

impl std::error::Error for ParseError {}

/// Cursor over the input with line/column tracking.
pub(crate) struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    last_content_line: usize,
}

impl Scanner {
    pub fn new(text: &str) -> Self {
        Scanner {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            last_content_line: 1,
        }
    }

    /// Scanner for a single line of a larger document; errors report `line`.
    pub fn for_line(text: &str, line: usize) -> Self {
        Scanner {
            chars: text.chars().collect(),
            pos: 0,
            line,
            col: 1,
            last_content_line: line,
        }
    }

    pub fn eof(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        if !c.is_whitespace() {
            self.last_content_line = self.line;
        }
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    pub fn error(&self, message: impl Into<String>, token: impl Into<String>) -> ParseError {
        // At end of input the cursor may sit past the final newline; report
        // the last line that actually carried content instead.
        let line = if self.eof() {
            self.last_content_line
        } else {
            self.line
        };
        ParseError {
            line,
            column: self.col,
            message: message.into(),
            token: token.into(),
        }
    }

    /// Skips whitespace and `#` comments (to end of line).
    pub fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    /// Consumes `c` or errors.
    pub fn expect(&mut self, c: char, context: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected {:?} {}", c, context), got.to_string())),
            None => Err(self.error(
                format!("expected {:?} {}, found end of input", c, context),
                "",
            )),
        }
    }

    /// `<...>` IRI reference; rejects whitespace and newlines inside.
    pub fn scan_iri_ref(&mut self) -> Result<String, ParseError> {
        self.expect('<', "to open an IRI reference")?;
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('>') => {
                    self.bump();
                    return Ok(out);
                }
                Some(c) if c.is_whitespace() => {
                    return Err(self.error("whitespace inside IRI reference", c.to_string()));
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
                None => return Err(self.error("unterminated IRI reference", "")),
            }
        }
    }

    /// Double-quoted string with `\"`, `\\` and `\n` escapes. When
    /// `allow_long` is set, `"""..."""` long strings (which may span lines)
    /// are recognised as well.
    pub fn scan_string(&mut self, allow_long: bool) -> Result<String, ParseError> {
        self.expect('"', "to open a string literal")?;
        let long = allow_long && self.peek() == Some('"') && self.peek_at(1) == Some('"');
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some('"') {
            // empty short string
            self.bump();
            return Ok(String::new());
        }
        let mut out = String::new();
        loop {
            match self.peek() {
                Some('"') if long => {
                    if self.peek_at(1) == Some('"') && self.peek_at(2) == Some('"') {
                        self.bump();
                        self.bump();
                        self.bump();
                        return Ok(out);
                    }
                    out.push('"');
                    self.bump();
                }
                Some('"') => {
                    self.bump();
                    return Ok(out);
                }
                Some('\\') => {
                    self.bump();
                    match self.peek() {
                        Some('"') => {
                            out.push('"');
                            self.bump();
                        }
                        Some('\\') => {
                            out.push('\\');
                            self.bump();
                        }
                        Some('n') => {
                            out.push('\n');
                            self.bump();
                        }
                        Some(c) => {
                            return Err(self.error("unsupported escape sequence", format!("\\{c}")))
                        }
                        None => return Err(self.error("unterminated string literal", "")),
                    }
                }
                Some('\n') if !long => {
                    return Err(self.error("unterminated string literal", ""));
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
                None => return Err(self.error("unterminated string literal", "")),
            }
        }
    }

    /// Scans an identifier / prefixed-name local part. `-` and `.` are only
    /// taken when followed by another name character, so trailing
    /// punctuation (statement dots, arrows) is left alone.
    pub fn scan_name(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            let continues = c.is_alphanumeric()
                || c == '_'
                || ((c == '-' || c == '.')
                    && self
                        .peek_at(1)
                        .map(|n| n.is_alphanumeric() || n == '_')
                        .unwrap_or(false));
            if !continues {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    /// Unsigned integer.
    pub fn scan_uint(&mut self) -> Result<u32, ParseError> {
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            let tok = self.peek().map(|c| c.to_string()).unwrap_or_default();
            return Err(self.error("expected a non-negative integer", tok));
        }
        digits
            .parse()
            .map_err(|_| self.error("integer out of range", digits.clone()))
    }
}

/// Escapes a string for emission inside double quotes.
pub fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out
}
