//! Quotes, parentheses and brackets: a balanced region whose interior holds a
//! full sentence followed by more material becomes a block of included
//! sentences; anything less stays inline. Also resolves the terminator
//! decisions deferred in front of closing delimiters.

use std::collections::HashSet;

use crate::lexicon::Lexicon;
use crate::span::Span;
use crate::token::{Token, TokenKind};
use crate::tree::{Decision, SentenceKind, TraceEvent};

use super::marks::{next_covered, prev_covered, BoundaryMark, MarkKind};
use super::terminators::{classify_terminator, TermClass};
use super::{CascadeConfig, DivergenceMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DelimClass {
    Guillemet,
    Straight,
    Curly,
    Paren,
    Bracket,
}

impl DelimClass {
    fn of(token: &Token) -> Option<DelimClass> {
        Some(match token.surface.as_str() {
            "«" | "»" => DelimClass::Guillemet,
            "\"" => DelimClass::Straight,
            "\u{201C}" | "\u{201D}" => DelimClass::Curly,
            "(" | ")" => DelimClass::Paren,
            "[" | "]" => DelimClass::Bracket,
            _ => return None,
        })
    }

    fn is_quote(&self) -> bool {
        matches!(self, DelimClass::Guillemet | DelimClass::Straight | DelimClass::Curly)
    }
}

#[derive(Debug, Clone, Copy)]
struct Region {
    open: usize,
    close: usize,
    class: DelimClass,
}

/// Pairs opening and closing delimiters, leniently: a close with no matching
/// open of its own class is ignored, and mismatched opens above a match are
/// dropped as inline characters.
fn pair_regions(tokens: &[Token]) -> Vec<Region> {
    let mut stack: Vec<(DelimClass, usize)> = Vec::new();
    let mut regions = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        let Some(class) = DelimClass::of(t) else { continue };
        match t.kind {
            TokenKind::OpenDelim => stack.push((class, i)),
            TokenKind::CloseDelim => {
                if let Some(at) = stack.iter().rposition(|(c, _)| *c == class) {
                    let (_, open) = stack[at];
                    stack.truncate(at);
                    regions.push(Region { open, close: i, class });
                }
            }
            _ => {}
        }
    }
    regions
}

pub fn pass_paired_delimiters(
    tokens: &[Token],
    lexicon: &Lexicon,
    config: &CascadeConfig,
    marks: &[BoundaryMark],
) -> (Vec<BoundaryMark>, Vec<TraceEvent>) {
    let mut out = marks.to_vec();
    let mut trace = Vec::new();
    let paper2024 = config.known_divergences_mode == DivergenceMode::Paper2024;

    let regions = pair_regions(tokens);
    let region_of_close: std::collections::HashMap<usize, usize> =
        regions.iter().enumerate().map(|(r, reg)| (reg.close, r)).collect();

    // Dialogue chains: a quote region directly adjacent to another quote
    // region (whitespace only between close and next open) renders both as
    // plain characters of flat dialogue sentences.
    let mut chained = vec![false; regions.len()];
    for (a, ra) in regions.iter().enumerate() {
        for (b, rb) in regions.iter().enumerate() {
            if a == b || !ra.class.is_quote() || !rb.class.is_quote() {
                continue;
            }
            if ra.close < rb.open
                && tokens[ra.close + 1..rb.open].iter().all(|t| !t.kind.is_covered())
            {
                chained[a] = true;
                chained[b] = true;
            }
        }
    }

    // Innermost regions first, so inner decisions (and the boundaries they
    // release) are visible when the enclosing region is judged.
    let mut order: Vec<usize> = (0..regions.len()).collect();
    order.sort_by_key(|&r| (regions[r].close - regions[r].open, regions[r].open));

    let mut decided = vec![false; regions.len()];
    let mut nested_close_toks: HashSet<usize> = HashSet::new();
    let mut consumed_hard_ends: HashSet<usize> = HashSet::new();

    // Deferred terminators, in document order.
    let deferred: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| {
            t.kind.is_terminator()
                && classify_terminator(tokens, *i, lexicon) == TermClass::Deferred
        })
        .map(|(i, _)| i)
        .collect();
    let mut resolved: HashSet<usize> = HashSet::new();

    let close_run = |start: usize| -> (Vec<usize>, Option<usize>) {
        let mut run = Vec::new();
        let mut next = next_covered(tokens, start);
        while let Some(n) = next {
            if matches!(tokens[n].kind, TokenKind::CloseDelim | TokenKind::AmbiguousQuote) {
                run.push(n);
                next = next_covered(tokens, n);
            } else {
                break;
            }
        }
        (run, next)
    };

    for &r in &order {
        let reg = regions[r];
        let open_tok = &tokens[reg.open];
        let close_tok = &tokens[reg.close];
        let region_span = Span::new(open_tok.span.start, close_tok.span.end);

        let interior_first = next_covered(tokens, reg.open).filter(|&j| j < reg.close);
        let interior_last = prev_covered(tokens, reg.close).filter(|&j| j > reg.open);

        let nest_flag =
            if reg.class.is_quote() { config.nest_quotes } else { config.nest_parentheses };

        let inline = |trace: &mut Vec<TraceEvent>, rule: &'static str| {
            trace.push(TraceEvent {
                pass: "paired-delimiters",
                rule,
                trigger: region_span,
                decision: Decision::InlineDelimiter,
                evidence: None,
            });
        };

        let decision: Option<(SentenceKind, &'static str)> = if interior_first.is_none() {
            inline(&mut trace, "delimiters:empty");
            None
        } else if !nest_flag {
            inline(&mut trace, "delimiters:nesting-disabled");
            None
        } else if prev_covered(tokens, reg.open)
            .is_some_and(|p| tokens[p].kind == TokenKind::Colon)
        {
            // Colon-introduced reported speech always nests.
            let kind =
                if reg.class.is_quote() { SentenceKind::Quoted } else { SentenceKind::Parenthetical };
            Some((kind, "delimiters:colon-quote"))
        } else if reg.class.is_quote() && chained[r] {
            inline(&mut trace, "delimiters:dialogue-chain");
            None
        } else if paper2024
            && !reg.class.is_quote()
            && interior_initial_name(tokens, interior_first, interior_last, lexicon)
        {
            // Known 2024 divergence: "(Dominique B.)" read as a one-sentence
            // incise.
            Some((SentenceKind::Parenthetical, "delimiters:initial-2024"))
        } else {
            // An interior sentence end followed by further interior material
            // qualifies the region for nesting.
            let open_end = open_tok.span.end;
            let close_start = close_tok.span.start;
            let qualifying = out.iter().any(|m| {
                m.kind == MarkKind::HardEnd
                    && m.pos > open_end
                    && m.pos < close_start
                    && (m.origin == "terminators" || m.origin == "paired-delimiters")
                    && !consumed_hard_ends.contains(&m.pos)
                    && tokens.iter().any(|t| {
                        t.kind.is_covered()
                            && t.span.start >= m.pos
                            && t.span.end <= close_start
                    })
            });
            if qualifying {
                let kind = if reg.class.is_quote() {
                    SentenceKind::Quoted
                } else {
                    SentenceKind::Parenthetical
                };
                Some((kind, "delimiters:included-sentences"))
            } else {
                inline(&mut trace, "delimiters:inline");
                None
            }
        };

        if let Some((kind, rule)) = decision {
            let first = interior_first.expect("nested region has interior");
            let last = interior_last.expect("nested region has interior");
            let open_pos = tokens[first].span.start;

            // The last nested sentence closes at its own terminator when it
            // has one; an unterminated sentence is closed by the delimiter
            // and keeps it.
            let trailing_terminator = tokens[last].kind.is_terminator()
                && match classify_terminator(tokens, last, lexicon) {
                    TermClass::Deferred => true,
                    // Initial-in-parens divergence: the suppressed initial
                    // period acts as the
                    // sentence end the 2024 model saw.
                    TermClass::Suppressed(_) => rule == "delimiters:initial-2024",
                    _ => false,
                };
            let close_pos =
                if trailing_terminator { tokens[last].span.end } else { close_tok.span.end };
            if trailing_terminator {
                resolved.insert(last);
            }

            for m in out.iter() {
                if m.kind == MarkKind::HardEnd && m.pos > open_tok.span.end && m.pos < close_pos {
                    consumed_hard_ends.insert(m.pos);
                }
            }

            out.push(BoundaryMark {
                pos: open_pos,
                kind: MarkKind::NestedOpen { kind },
                origin: "paired-delimiters",
            });
            out.push(BoundaryMark {
                pos: close_pos,
                kind: MarkKind::NestedClose,
                origin: "paired-delimiters",
            });
            nested_close_toks.insert(reg.close);
            trace.push(TraceEvent {
                pass: "paired-delimiters",
                rule,
                trigger: region_span,
                decision: Decision::OpenNested,
                evidence: None,
            });
            trace.push(TraceEvent {
                pass: "paired-delimiters",
                rule,
                trigger: Span::new(close_pos, close_tok.span.end),
                decision: Decision::CloseNested,
                evidence: None,
            });

            // Does the enclosing sentence end right after the closing
            // delimiter?
            let ends_parent = match next_covered(tokens, reg.close) {
                None => true,
                Some(n) => match tokens[n].kind {
                    TokenKind::OpenDelim | TokenKind::Dash | TokenKind::Number => true,
                    TokenKind::Word => tokens[n].initial_capital,
                    _ => false,
                },
            };
            if ends_parent {
                out.push(BoundaryMark::hard_end(close_tok.span.end, "paired-delimiters"));
                trace.push(TraceEvent {
                    pass: "paired-delimiters",
                    rule: "delimiters:block-end",
                    trigger: close_tok.span,
                    decision: Decision::Boundary,
                    evidence: None,
                });
            }
        }
        decided[r] = true;

        // Resolve any deferred terminator whose closing run is now fully
        // decided.
        for &t in &deferred {
            if resolved.contains(&t) {
                continue;
            }
            let (run, after) = close_run(t);
            let ready = run
                .iter()
                .all(|c| region_of_close.get(c).map_or(true, |&rr| decided[rr]));
            if !ready {
                continue;
            }
            resolved.insert(t);
            if run.iter().any(|c| nested_close_toks.contains(c)) {
                // The nested-close logic already placed this sentence end.
                trace.push(TraceEvent {
                    pass: "paired-delimiters",
                    rule: "delimiters:deferred-inside",
                    trigger: tokens[t].span,
                    decision: Decision::NoBoundary,
                    evidence: None,
                });
                continue;
            }
            let boundary = match after {
                None => true,
                Some(n) => match tokens[n].kind {
                    TokenKind::OpenDelim | TokenKind::Dash | TokenKind::Number => true,
                    TokenKind::Word => tokens[n].initial_capital,
                    _ => false,
                },
            };
            if boundary {
                let pos = tokens[*run.last().expect("deferred implies a close")].span.end;
                out.push(BoundaryMark::hard_end(pos, "paired-delimiters"));
                trace.push(TraceEvent {
                    pass: "paired-delimiters",
                    rule: "delimiters:deferred-boundary",
                    trigger: tokens[t].span,
                    decision: Decision::Boundary,
                    evidence: None,
                });
            } else {
                trace.push(TraceEvent {
                    pass: "paired-delimiters",
                    rule: "delimiters:deferred-continue",
                    trigger: tokens[t].span,
                    decision: Decision::NoBoundary,
                    evidence: None,
                });
            }
        }
    }

    // Deferred terminators whose run contains no paired region at all
    // (unpaired closes only).
    for &t in &deferred {
        if resolved.contains(&t) {
            continue;
        }
        let (run, after) = close_run(t);
        resolved.insert(t);
        let boundary = match after {
            None => true,
            Some(n) => match tokens[n].kind {
                TokenKind::OpenDelim | TokenKind::Dash | TokenKind::Number => true,
                TokenKind::Word => tokens[n].initial_capital,
                _ => false,
            },
        };
        if boundary {
            if let Some(&last) = run.last() {
                out.push(BoundaryMark::hard_end(tokens[last].span.end, "paired-delimiters"));
                trace.push(TraceEvent {
                    pass: "paired-delimiters",
                    rule: "delimiters:deferred-boundary",
                    trigger: tokens[t].span,
                    decision: Decision::Boundary,
                    evidence: None,
                });
            }
        } else {
            trace.push(TraceEvent {
                pass: "paired-delimiters",
                rule: "delimiters:deferred-continue",
                trigger: tokens[t].span,
                decision: Decision::NoBoundary,
                evidence: None,
            });
        }
    }

    (out, trace)
}

/// Initial-in-parens predicate: interior starts with a capitalized word and ends with a
/// single-capital initial plus its period, directly before the close.
fn interior_initial_name(
    tokens: &[Token],
    interior_first: Option<usize>,
    interior_last: Option<usize>,
    lexicon: &Lexicon,
) -> bool {
    let (Some(first), Some(last)) = (interior_first, interior_last) else {
        return false;
    };
    tokens[first].is_capitalized_word()
        && tokens[last].kind.is_terminator()
        && classify_terminator(tokens, last, lexicon)
            == TermClass::Suppressed("terminator:initial")
}
