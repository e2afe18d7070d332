//! Lossless C++ tokenization with byte spans, token rendering, and
//! object-like macro substitution.

mod lexer;
mod macros;
mod render;

pub use lexer::{tokenize, LineIndex};
pub use macros::{
    expand_macros, scan_define_events, scan_defines, MacroEvent, MacroHistory, MacroTable, MAX_EXPANSION_DEPTH,
};
pub use render::render;

/// Byte range in the input plus the 1-based line/column of its start.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl SourceSpan {
    /// Span from the start of `self` to the end of `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan { start: self.start, end: other.end.max(self.start), line: self.line, col: self.col }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    Number,
    String,
    Char,
    RawString,
    Punct,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub spelling: String,
    pub span: SourceSpan,
    /// Whitespace or a comment preceded this token.
    pub leading_space: bool,
    /// First token on its logical line (backslash-newline does not count).
    pub at_line_start: bool,
}

impl Token {
    /// A token that does not come from any input; used by code that builds
    /// token lists by hand.
    pub fn synthetic(kind: TokenKind, spelling: impl Into<String>) -> Self {
        Token {
            kind,
            spelling: spelling.into(),
            span: SourceSpan::default(),
            leading_space: false,
            at_line_start: false,
        }
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punct && self.spelling == p
    }

    pub fn is_ident(&self, name: &str) -> bool {
        self.kind == TokenKind::Identifier && self.spelling == name
    }

    pub fn is_identifier(&self) -> bool {
        self.kind == TokenKind::Identifier
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind, TokenKind::Number | TokenKind::String | TokenKind::Char | TokenKind::RawString)
    }
}
