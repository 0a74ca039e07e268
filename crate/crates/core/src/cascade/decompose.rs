//! Decomposition of a sentence into text segments, punctuation and
//! indicators, the annotation layer behind the colon rule.

use crate::lexicon::Lexicon;
use crate::span::Span;
use crate::token::{Token, TokenKind};
use crate::tree::SentenceNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionLabel {
    Segment,
    Indicateur,
    Ponctuation,
}

impl DecompositionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecompositionLabel::Segment => "Segment",
            DecompositionLabel::Indicateur => "Indicateur",
            DecompositionLabel::Ponctuation => "Ponctuation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionItem {
    pub span: Span,
    pub label: DecompositionLabel,
}

impl DecompositionItem {
    /// The brace rendering, `{text,.Label}`.
    pub fn brace_notation(&self, source: &str) -> String {
        format!("{{{},.{}}}", self.span.slice(source), self.label.as_str())
    }
}

/// Splits `sentence` into ordered, disjoint items covering its covered
/// tokens: lexicon matches become indicators, punctuation-class tokens become
/// punctuation, and the maximal word/number runs in between become segments.
pub fn decompose(
    tokens: &[Token],
    sentence: &SentenceNode,
    lexicon: &Lexicon,
) -> Vec<DecompositionItem> {
    let inside: Vec<(usize, &Token)> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind.is_covered() && sentence.span.contains(t.span))
        .collect();

    // Indicator spans: longest-match, non-overlapping, left to right.
    let mut indicator_spans: Vec<Span> = Vec::new();
    let mut cursor = sentence.span.start;
    for &(idx, t) in &inside {
        if t.kind != TokenKind::Word || t.span.start < cursor {
            continue;
        }
        if let Some((span, _, _)) = lexicon.match_entry_at(tokens, idx, sentence.span.end) {
            indicator_spans.push(span);
            cursor = span.end;
        }
    }

    let mut items: Vec<DecompositionItem> = Vec::new();
    let mut segment_start: Option<usize> = None;
    let mut segment_end = 0;
    let flush = |items: &mut Vec<DecompositionItem>, start: &mut Option<usize>, end: usize| {
        if let Some(s) = start.take() {
            if s < end {
                items.push(DecompositionItem {
                    span: Span::new(s, end),
                    label: DecompositionLabel::Segment,
                });
            }
        }
    };

    let mut i = 0;
    while i < inside.len() {
        let (_, t) = inside[i];
        if let Some(&ind) = indicator_spans.iter().find(|s| s.start == t.span.start) {
            flush(&mut items, &mut segment_start, segment_end);
            items.push(DecompositionItem { span: ind, label: DecompositionLabel::Indicateur });
            while i < inside.len() && inside[i].1.span.start < ind.end {
                i += 1;
            }
            continue;
        }
        match t.kind {
            TokenKind::Word | TokenKind::Number => {
                if segment_start.is_none() {
                    segment_start = Some(t.span.start);
                }
                segment_end = t.span.end;
            }
            _ => {
                flush(&mut items, &mut segment_start, segment_end);
                items.push(DecompositionItem {
                    span: t.span,
                    label: DecompositionLabel::Ponctuation,
                });
            }
        }
        i += 1;
    }
    flush(&mut items, &mut segment_start, segment_end);
    items
}
