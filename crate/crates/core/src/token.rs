//! Classified lexical units.

use crate::span::Span;

/// Token classification used by the cascade passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punct,
    /// Sentence-final punctuation: `.` `!` `?`, `…`, and runs of two or more
    /// periods. Runs and `…` carry the ellipsis flag.
    Terminator { ellipsis: bool },
    Colon,
    /// Hyphen-minus, en dash or em dash when not word-internal.
    Dash,
    /// `«` `(` `[` and curly opening double quote.
    OpenDelim,
    /// `»` `)` `]` and curly closing double quote.
    CloseDelim,
    /// Straight double quote before resolution.
    AmbiguousQuote,
    /// An XML/SGML tag, kept opaque so segmentation never splits it.
    Markup,
    Whitespace,
}

impl TokenKind {
    pub fn is_terminator(&self) -> bool {
        matches!(self, TokenKind::Terminator { .. })
    }

    /// Tokens that sentences must cover; whitespace and markup may fall
    /// between sentences.
    pub fn is_covered(&self) -> bool {
        !matches!(self, TokenKind::Whitespace | TokenKind::Markup)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub surface: String,
    pub span: Span,
    /// First character is uppercase.
    pub initial_capital: bool,
    /// Exactly one letter, uppercase ("B" in "Dominique B.").
    pub is_single_capital: bool,
}

impl Token {
    pub fn is_capitalized_word(&self) -> bool {
        self.kind == TokenKind::Word && self.initial_capital
    }

    pub fn is_lowercase_word(&self) -> bool {
        self.kind == TokenKind::Word && !self.initial_capital
    }
}
