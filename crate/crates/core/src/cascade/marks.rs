//! Boundary marks: the working vocabulary the passes write and
//! [`build_tree`](super::build_tree) consumes.

use crate::token::{Token, TokenKind};
use crate::tree::SentenceKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkKind {
    /// A sentence at the current nesting level ends here.
    HardEnd,
    /// A nested region begins; the position is the first nested sentence's
    /// start and the payload is the kind its sentences will carry.
    NestedOpen { kind: SentenceKind },
    /// The current nested sentence ends here and the region closes.
    NestedClose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryMark {
    /// Byte offset; always a token boundary.
    pub pos: usize,
    pub kind: MarkKind,
    /// Pass that produced the mark.
    pub origin: &'static str,
}

impl BoundaryMark {
    pub fn hard_end(pos: usize, origin: &'static str) -> Self {
        BoundaryMark { pos, kind: MarkKind::HardEnd, origin }
    }

    fn rank(&self) -> u8 {
        match self.kind {
            MarkKind::NestedClose => 0,
            MarkKind::HardEnd => 1,
            MarkKind::NestedOpen { .. } => 2,
        }
    }

    /// Closes sort before boundaries, boundaries before opens at the same
    /// position.
    pub fn sort_key(&self) -> (usize, u8) {
        (self.pos, self.rank())
    }
}

/// Sorts marks into document order (stable, so emission order breaks ties)
/// and drops duplicate hard ends. Nested opens and closes are never deduped:
/// two regions may legitimately close at the same byte.
pub fn normalize_marks(mut marks: Vec<BoundaryMark>) -> Vec<BoundaryMark> {
    marks.sort_by_key(|m| m.sort_key());
    marks.dedup_by(|a, b| a.pos == b.pos && a.kind == b.kind && a.kind == MarkKind::HardEnd);
    marks
}

/// Index of the next covered (non-whitespace, non-markup) token after `i`.
pub(crate) fn next_covered(tokens: &[Token], i: usize) -> Option<usize> {
    tokens.iter().skip(i + 1).position(|t| t.kind.is_covered()).map(|off| i + 1 + off)
}

/// Index of the closest covered token before `i`.
pub(crate) fn prev_covered(tokens: &[Token], i: usize) -> Option<usize> {
    tokens[..i].iter().rposition(|t| t.kind.is_covered())
}

/// End offset of the last covered token, if any.
pub(crate) fn last_covered_end(tokens: &[Token]) -> Option<usize> {
    tokens.iter().rev().find(|t| t.kind.is_covered()).map(|t| t.span.end)
}

/// First covered token start at or after `pos`.
pub(crate) fn next_covered_start_at(tokens: &[Token], pos: usize) -> Option<usize> {
    tokens.iter().find(|t| t.kind.is_covered() && t.span.start >= pos).map(|t| t.span.start)
}

pub(crate) fn is_open_quote(token: &Token) -> bool {
    token.kind == TokenKind::OpenDelim && matches!(token.surface.as_str(), "«" | "\"" | "\u{201C}")
}
