//! Base segmentation: one hard end per sentence terminator, minus the
//! exceptions (initials, abbreviations, number-internal periods, deferrals
//! in front of closing delimiters, lowercase continuations).

use crate::lexicon::Lexicon;
use crate::token::{Token, TokenKind};
use crate::tree::{Decision, TraceEvent};

use super::marks::{next_covered, prev_covered, BoundaryMark};

/// What a terminator does, before the delimiter pass has its say.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TermClass {
    /// Not a sentence end at all (initial, abbreviation, number-internal).
    Suppressed(&'static str),
    /// A closing delimiter follows; the delimiter pass decides.
    Deferred,
    Boundary(&'static str),
    NoBoundary(&'static str),
}

pub(crate) fn classify_terminator(tokens: &[Token], i: usize, lexicon: &Lexicon) -> TermClass {
    let t = &tokens[i];
    let TokenKind::Terminator { ellipsis } = t.kind else {
        unreachable!("classify_terminator on non-terminator");
    };

    if !ellipsis && t.surface == "." {
        if let Some(p) = prev_covered(tokens, i) {
            let prev = &tokens[p];
            let attached = prev.span.end == t.span.start;
            if attached && prev.is_single_capital {
                return TermClass::Suppressed("terminator:initial");
            }
            if attached
                && prev.kind == TokenKind::Word
                && lexicon.is_abbreviation(&format!("{}.", prev.surface))
            {
                return TermClass::Suppressed("terminator:abbreviation");
            }
            if attached && prev.kind == TokenKind::Number {
                if let Some(n) = next_covered(tokens, i) {
                    if tokens[n].kind == TokenKind::Number && tokens[n].span.start == t.span.end {
                        return TermClass::Suppressed("terminator:number");
                    }
                }
            }
        }
    }

    match next_covered(tokens, i) {
        None => TermClass::Boundary("terminator:end-of-text"),
        Some(n) => match tokens[n].kind {
            TokenKind::CloseDelim | TokenKind::AmbiguousQuote => TermClass::Deferred,
            // Dialogue resumption: a quote or dash may open a sentence even
            // when the first word after it is lowercase.
            TokenKind::OpenDelim | TokenKind::Dash => {
                TermClass::Boundary("terminator:dialogue-resumption")
            }
            TokenKind::Number => TermClass::Boundary("terminator:end"),
            TokenKind::Word if tokens[n].initial_capital => TermClass::Boundary("terminator:end"),
            TokenKind::Word => TermClass::NoBoundary("terminator:lowercase"),
            TokenKind::Terminator { .. } => TermClass::NoBoundary("terminator:run"),
            TokenKind::Colon | TokenKind::Punct => TermClass::NoBoundary("terminator:punctuation"),
            TokenKind::Whitespace | TokenKind::Markup => unreachable!("not covered"),
        },
    }
}

/// Emits a hard end after every terminator that survives the exceptions.
/// Deferred terminators produce no mark and no event here; the delimiter
/// pass resolves them.
pub fn pass_terminators(
    tokens: &[Token],
    lexicon: &Lexicon,
) -> (Vec<BoundaryMark>, Vec<TraceEvent>) {
    let mut marks = Vec::new();
    let mut trace = Vec::new();

    for (i, t) in tokens.iter().enumerate() {
        if !t.kind.is_terminator() {
            continue;
        }
        match classify_terminator(tokens, i, lexicon) {
            TermClass::Boundary(rule) => {
                marks.push(BoundaryMark::hard_end(t.span.end, "terminators"));
                trace.push(TraceEvent {
                    pass: "terminators",
                    rule,
                    trigger: t.span,
                    decision: Decision::Boundary,
                    evidence: None,
                });
            }
            TermClass::Suppressed(rule) | TermClass::NoBoundary(rule) => {
                trace.push(TraceEvent {
                    pass: "terminators",
                    rule,
                    trigger: t.span,
                    decision: Decision::NoBoundary,
                    evidence: None,
                });
            }
            TermClass::Deferred => {}
        }
    }

    (marks, trace)
}
