//! Dash dialogue: a dash at start of text, after a sentence end or after a
//! line break opens a speaker turn (réplique). Consecutive turns group into
//! one enclosing sentence with the turns as included sentences.

use std::collections::BTreeSet;

use crate::token::{Token, TokenKind};
use crate::tree::{Decision, SentenceKind, TraceEvent};

use super::marks::{next_covered, prev_covered, BoundaryMark, MarkKind};
use super::CascadeConfig;

#[derive(Debug, Clone, Copy)]
struct Replique {
    dash: usize,
    /// Byte offset where the turn ends.
    end: usize,
}

pub fn pass_dashes(
    tokens: &[Token],
    config: &CascadeConfig,
    marks: &[BoundaryMark],
) -> (Vec<BoundaryMark>, Vec<TraceEvent>) {
    let mut trace = Vec::new();
    if !config.nest_dashes {
        return (marks.to_vec(), trace);
    }

    // Byte intervals of regions already nested by earlier passes; dialogue
    // detection only runs at the top level.
    let mut nested_intervals: Vec<(usize, usize)> = Vec::new();
    {
        let mut stack = Vec::new();
        let mut sorted = marks.to_vec();
        sorted.sort_by_key(|m| m.sort_key());
        for m in &sorted {
            match m.kind {
                MarkKind::NestedOpen { .. } => stack.push(m.pos),
                MarkKind::NestedClose => {
                    if let Some(open) = stack.pop() {
                        nested_intervals.push((open, m.pos));
                    }
                }
                MarkKind::HardEnd => {}
            }
        }
    }
    let in_nested = |pos: usize| nested_intervals.iter().any(|&(a, b)| pos >= a && pos < b);

    let hard_ends: BTreeSet<usize> = marks
        .iter()
        .filter(|m| m.kind == MarkKind::HardEnd)
        .map(|m| m.pos)
        .collect();
    let depth0_hard_ends: BTreeSet<usize> =
        hard_ends.iter().copied().filter(|&p| !in_nested(p)).collect();

    // A dash opens a turn at start of text, right after a hard end, or after
    // a line break.
    let dialogue_dashes: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| {
            if t.kind != TokenKind::Dash || in_nested(t.span.start) {
                return false;
            }
            match prev_covered(tokens, *i) {
                None => true,
                Some(p) => {
                    hard_ends.contains(&tokens[p].span.end)
                        || tokens[p + 1..*i]
                            .iter()
                            .any(|w| w.kind == TokenKind::Whitespace && w.surface.contains('\n'))
                }
            }
        })
        .map(|(i, _)| i)
        .collect();
    if dialogue_dashes.is_empty() {
        return (marks.to_vec(), trace);
    }

    // Extents: a turn runs to the next top-level hard end or to the material
    // just before the next dialogue dash, whichever comes first.
    let mut repliques: Vec<Replique> = Vec::new();
    for (k, &dash) in dialogue_dashes.iter().enumerate() {
        let dash_end = tokens[dash].span.end;
        let next_end = depth0_hard_ends.range(dash_end + 1..).next().copied();
        let cap = dialogue_dashes.get(k + 1).map(|&j| {
            tokens[..j]
                .iter()
                .filter(|t| t.kind.is_covered())
                .map(|t| t.span.end)
                .next_back()
                .unwrap_or(dash_end)
        });
        let last_covered =
            tokens.iter().rev().find(|t| t.kind.is_covered()).map(|t| t.span.end).unwrap_or(0);
        let end = [next_end, cap, Some(last_covered)].into_iter().flatten().min().unwrap();
        if end > dash_end {
            repliques.push(Replique { dash, end });
        }
    }

    // Group turns separated only by whitespace/markup.
    let mut groups: Vec<Vec<Replique>> = Vec::new();
    for r in repliques {
        let extend = groups.last().is_some_and(|g| {
            let prev_end = g.last().unwrap().end;
            let dash_start = tokens[r.dash].span.start;
            !tokens.iter().any(|t| {
                t.kind.is_covered() && t.span.start >= prev_end && t.span.end <= dash_start
            })
        });
        if extend {
            groups.last_mut().unwrap().push(r);
        } else {
            groups.push(vec![r]);
        }
    }

    let mut out = marks.to_vec();
    for group in &groups {
        if group.len() < 2 {
            trace.push(TraceEvent {
                pass: "dashes",
                rule: "dashes:lone-replique",
                trigger: tokens[group[0].dash].span,
                decision: Decision::NoBoundary,
                evidence: None,
            });
            continue;
        }
        let block_start = tokens[group[0].dash].span.start;
        let block_end = group.last().unwrap().end;

        // Turn boundaries move into the block: drop top-level hard ends
        // strictly inside it. Hard ends belonging to deeper nested regions
        // stay, they split those regions' sentences.
        out.retain(|m| {
            m.kind != MarkKind::HardEnd
                || m.pos <= block_start
                || m.pos >= block_end
                || in_nested(m.pos)
        });

        for r in group {
            let start = if config.include_dash_in_sentence {
                tokens[r.dash].span.start
            } else {
                match next_covered(tokens, r.dash) {
                    Some(n) if tokens[n].span.start < r.end => tokens[n].span.start,
                    _ => continue,
                }
            };
            out.push(BoundaryMark {
                pos: start,
                kind: MarkKind::NestedOpen { kind: SentenceKind::DashReplique },
                origin: "dashes",
            });
            out.push(BoundaryMark { pos: r.end, kind: MarkKind::NestedClose, origin: "dashes" });
            trace.push(TraceEvent {
                pass: "dashes",
                rule: "dashes:replique",
                trigger: tokens[r.dash].span,
                decision: Decision::OpenNested,
                evidence: None,
            });
        }
        out.push(BoundaryMark::hard_end(block_end, "dashes"));
    }

    (out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::pass_terminators;
    use crate::lexicon::Lexicon;
    use crate::tokenizer::{tokenize, TokenizerConfig};

    fn run(source: &str, config: &CascadeConfig) -> Vec<BoundaryMark> {
        let tokens = tokenize(source, &TokenizerConfig::default());
        let lexicon = Lexicon::builtin();
        let (marks, _) = pass_terminators(&tokens, &lexicon);
        let (marks, _) = pass_dashes(&tokens, config, &marks);
        marks
    }

    fn replique_opens(marks: &[BoundaryMark]) -> Vec<usize> {
        marks
            .iter()
            .filter(|m| {
                matches!(m.kind, MarkKind::NestedOpen { kind: SentenceKind::DashReplique })
            })
            .map(|m| m.pos)
            .collect()
    }

    #[test]
    fn two_turns_nest() {
        let src = "— Bonjour. — Salut.";
        let marks = run(src, &CascadeConfig::default());
        assert_eq!(replique_opens(&marks), vec![0, src.find("— Salut").unwrap()]);
    }

    #[test]
    fn mid_sentence_dash_is_not_dialogue() {
        let src = "mid-sentence — aside — continues";
        let marks = run(src, &CascadeConfig::default());
        assert!(replique_opens(&marks).is_empty());
    }

    #[test]
    fn dash_after_line_break_opens_turn() {
        let src = "— Bonjour\n— Salut.";
        let marks = run(src, &CascadeConfig::default());
        assert_eq!(replique_opens(&marks).len(), 2);
    }

    #[test]
    fn excluded_dash_shifts_turn_start() {
        let src = "— Bonjour. — Salut.";
        let config = CascadeConfig { include_dash_in_sentence: false, ..Default::default() };
        let marks = run(src, &config);
        assert_eq!(
            replique_opens(&marks),
            vec![src.find("Bonjour").unwrap(), src.find("Salut").unwrap()]
        );
    }

    #[test]
    fn lone_turn_stays_flat() {
        let src = "— Bonjour. Il partit.";
        let marks = run(src, &CascadeConfig::default());
        assert!(replique_opens(&marks).is_empty());
    }
}
