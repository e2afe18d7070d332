use super::{SourceSpan, Token, TokenKind};
use crate::diag::Diagnostic;

const PUNCT3: [&str; 5] = ["<=>", "<<=", ">>=", "...", "->*"];
const PUNCT2: [&str; 22] = [
    "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", ".*", "##",
];
const RAW_PREFIXES: [&str; 5] = ["u8R\"", "uR\"", "UR\"", "LR\"", "R\""];
const ENCODING_PREFIXES: [&str; 4] = ["u8", "u", "U", "L"];
const MAX_RAW_DELIMITER: usize = 16;

/// Maps byte offsets to 1-based line and column numbers.
#[derive(Clone, Debug)]
pub struct LineIndex {
    line_starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(text.bytes().enumerate().filter(|&(_, b)| b == b'\n').map(|(i, _)| i + 1));
        LineIndex { line_starts }
    }

    pub fn line_col(&self, offset: usize) -> (u32, u32) {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let col = offset - self.line_starts[line - 1] + 1;
        (line as u32, col as u32)
    }

    pub fn span(&self, start: usize, end: usize) -> SourceSpan {
        let (line, col) = self.line_col(start);
        SourceSpan { start, end, line, col }
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_' || b == b'$' || b >= 0x80
}

fn is_ident_continue(b: u8) -> bool {
    is_ident_start(b) || b.is_ascii_digit()
}

struct Lexer<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    lines: LineIndex,
}

/// Splits `text` into C++ preprocessing tokens.
///
/// Whitespace and comments are dropped but recorded in `leading_space`.
/// Any byte that does not begin a recognizable token becomes a one-byte
/// punctuator, so every non-blank byte is covered by exactly one token.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut lx = Lexer { text, bytes: text.as_bytes(), pos: 0, lines: LineIndex::new(text) };
    let mut out = Vec::new();
    let mut line_start = true;
    loop {
        let (space, newline) = lx.skip_blank()?;
        line_start |= newline;
        if lx.pos >= lx.bytes.len() {
            break;
        }
        let start = lx.pos;
        let kind = lx.next_kind()?;
        out.push(Token {
            kind,
            spelling: text[start..lx.pos].to_string(),
            span: lx.lines.span(start, lx.pos),
            leading_space: space,
            at_line_start: line_start,
        });
        line_start = false;
    }
    Ok(out)
}

impl<'a> Lexer<'a> {
    fn peek(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn error(&self, msg: &str, start: usize) -> Diagnostic {
        Diagnostic::error(msg, self.lines.span(start, (start + 1).min(self.bytes.len())))
    }

    /// Length of a backslash-newline at the cursor, if any.
    fn splice_len(&self, at: usize) -> usize {
        match (self.bytes.get(at), self.bytes.get(at + 1), self.bytes.get(at + 2)) {
            (Some(b'\\'), Some(b'\n'), _) => 2,
            (Some(b'\\'), Some(b'\r'), Some(b'\n')) => 3,
            _ => 0,
        }
    }

    /// Skips whitespace and comments; returns (skipped anything, saw newline).
    fn skip_blank(&mut self) -> Result<(bool, bool), Diagnostic> {
        let mut space = false;
        let mut newline = false;
        while let Some(b) = self.peek(0) {
            match b {
                b'\n' => {
                    newline = true;
                    self.pos += 1;
                }
                b' ' | b'\t' | b'\r' | 0x0b | 0x0c => self.pos += 1,
                b'\\' if self.splice_len(self.pos) > 0 => self.pos += self.splice_len(self.pos),
                b'/' if self.peek(1) == Some(b'/') => {
                    while let Some(c) = self.peek(0) {
                        let splice = self.splice_len(self.pos);
                        if splice > 0 {
                            self.pos += splice;
                        } else if c == b'\n' {
                            break;
                        } else {
                            self.pos += 1;
                        }
                    }
                }
                b'/' if self.peek(1) == Some(b'*') => {
                    let start = self.pos;
                    match self.rest()[2..].find("*/") {
                        Some(i) => self.pos += i + 4,
                        None => return Err(self.error("unterminated block comment", start)),
                    }
                }
                _ => break,
            }
            space = true;
        }
        Ok((space, newline))
    }

    fn next_kind(&mut self) -> Result<TokenKind, Diagnostic> {
        let rest = self.rest();
        if let Some(p) = RAW_PREFIXES.iter().find(|p| rest.starts_with(*p)) {
            let start = self.pos;
            self.pos += p.len();
            self.raw_string(start)?;
            return Ok(TokenKind::RawString);
        }
        for p in ENCODING_PREFIXES {
            if let Some(after) = rest.strip_prefix(p) {
                if after.starts_with('"') || after.starts_with('\'') {
                    self.pos += p.len();
                    break;
                }
            }
        }
        let b = self.bytes[self.pos];
        match b {
            b'"' => {
                self.quoted(b'"', "unterminated string literal")?;
                Ok(TokenKind::String)
            }
            b'\'' => {
                self.quoted(b'\'', "unterminated character literal")?;
                Ok(TokenKind::Char)
            }
            _ if is_ident_start(b) => {
                self.eat_ident();
                Ok(TokenKind::Identifier)
            }
            _ if b.is_ascii_digit() || (b == b'.' && self.peek(1).is_some_and(|c| c.is_ascii_digit())) => {
                self.number();
                Ok(TokenKind::Number)
            }
            _ => {
                self.punct();
                Ok(TokenKind::Punct)
            }
        }
    }

    fn eat_ident(&mut self) {
        while self.peek(0).is_some_and(is_ident_continue) {
            self.pos += 1;
        }
    }

    fn ud_suffix(&mut self) {
        if self.peek(0).is_some_and(is_ident_start) {
            self.eat_ident();
        }
    }

    fn quoted(&mut self, quote: u8, msg: &str) -> Result<(), Diagnostic> {
        let start = self.pos;
        self.pos += 1;
        loop {
            match self.peek(0) {
                None | Some(b'\n') => return Err(self.error(msg, start)),
                Some(b'\\') => {
                    let splice = self.splice_len(self.pos);
                    self.pos += if splice > 0 { splice } else { 2.min(self.bytes.len() - self.pos) };
                    // `\` followed by a multi-byte character: step to the char boundary.
                    while !self.text.is_char_boundary(self.pos) {
                        self.pos += 1;
                    }
                }
                Some(c) if c == quote => {
                    self.pos += 1;
                    break;
                }
                Some(_) => self.pos += 1,
            }
        }
        self.ud_suffix();
        Ok(())
    }

    fn raw_string(&mut self, start: usize) -> Result<(), Diagnostic> {
        let open = self.pos;
        let delim_len = self.rest().bytes().position(|c| c == b'(');
        let delim = match delim_len {
            Some(n)
                if n <= MAX_RAW_DELIMITER
                    && !self.rest()[..n]
                        .bytes()
                        .any(|c| matches!(c, b' ' | b')' | b'\\' | b'\t' | b'\n' | 0x0b | 0x0c | b'"')) =>
            {
                &self.text[open..open + n]
            }
            _ => return Err(self.error("unterminated raw string literal", start)),
        };
        let terminator = format!("){}\"", delim);
        let body_start = open + delim.len() + 1;
        match self.text[body_start..].find(&terminator) {
            Some(i) => self.pos = body_start + i + terminator.len(),
            None => return Err(self.error("unterminated raw string literal", start)),
        }
        self.ud_suffix();
        Ok(())
    }

    fn number(&mut self) {
        self.pos += 1;
        while let Some(c) = self.peek(0) {
            let exponent = matches!(c, b'e' | b'E' | b'p' | b'P') && matches!(self.peek(1), Some(b'+' | b'-'));
            let separator = c == b'\'' && self.peek(1).is_some_and(|d| d.is_ascii_alphanumeric());
            if exponent || separator {
                self.pos += 2;
            } else if is_ident_continue(c) || c == b'.' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn punct(&mut self) {
        let rest = self.rest();
        let len = PUNCT3
            .iter()
            .find(|p| rest.starts_with(*p))
            .or_else(|| PUNCT2.iter().find(|p| rest.starts_with(*p)))
            .map_or(1, |p| p.len());
        self.pos += len;
    }
}
