//! Converts the ordered boundary marks into a sentence tree.

use thiserror::Error;

use crate::span::Span;
use crate::token::Token;
use crate::tree::{SentenceKind, SentenceNode, SentenceTree};

use super::marks::{last_covered_end, next_covered_start_at, normalize_marks, BoundaryMark, MarkKind};

/// Unbalanced marks indicate a pass bug, never bad input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("nested close at {pos} without a matching open")]
    UnmatchedClose { pos: usize },
    #[error("{count} nested region(s) never closed")]
    UnclosedRegions { count: usize },
}

struct Frame {
    kind: SentenceKind,
    nodes: Vec<SentenceNode>,
    open: Option<OpenSentence>,
    resume: usize,
}

struct OpenSentence {
    start: usize,
    children: Vec<SentenceNode>,
}

impl Frame {
    fn new(kind: SentenceKind, resume: usize) -> Self {
        Frame { kind, nodes: Vec::new(), open: None, resume }
    }

    fn ensure_open(&mut self, tokens: &[Token]) {
        if self.open.is_none() {
            if let Some(start) = next_covered_start_at(tokens, self.resume) {
                self.open = Some(OpenSentence { start, children: Vec::new() });
            }
        }
    }

    fn close_open(&mut self, pos: usize) {
        if let Some(open) = self.open.take() {
            if open.start < pos {
                self.nodes.push(SentenceNode {
                    span: Span::new(open.start, pos),
                    kind: self.kind,
                    children: open.children,
                });
            } else {
                // Boundary before any content: keep accumulated children
                // alive by restoring the open sentence.
                self.open = Some(open);
                return;
            }
        }
        self.resume = pos;
    }
}

/// Builds the tree for tokens spanning `[0, source_len)`. Sentences start at
/// the first covered token after the previous boundary; trailing unterminated
/// material closes at the last covered token.
pub fn build_tree(
    tokens: &[Token],
    marks: &[BoundaryMark],
    source_len: usize,
) -> Result<SentenceTree, BuildError> {
    let marks = normalize_marks(marks.to_vec());
    let mut stack = vec![Frame::new(SentenceKind::Principal, 0)];

    for mark in &marks {
        match mark.kind {
            MarkKind::HardEnd => {
                let frame = stack.last_mut().expect("root frame");
                frame.ensure_open(tokens);
                if frame.open.as_ref().is_some_and(|o| o.start < mark.pos) {
                    frame.close_open(mark.pos);
                }
            }
            MarkKind::NestedOpen { kind } => {
                let parent = stack.last_mut().expect("root frame");
                parent.ensure_open(tokens);
                if parent.open.is_none() {
                    // No content anywhere after the resume point; degenerate.
                    continue;
                }
                stack.push(Frame::new(kind, mark.pos));
            }
            MarkKind::NestedClose => {
                if stack.len() < 2 {
                    return Err(BuildError::UnmatchedClose { pos: mark.pos });
                }
                let mut frame = stack.pop().expect("checked depth");
                frame.ensure_open(tokens);
                if frame.open.as_ref().is_some_and(|o| o.start < mark.pos) {
                    frame.close_open(mark.pos);
                }
                let parent = stack.last_mut().expect("root frame");
                let open = parent.open.as_mut().expect("parent opened at NestedOpen");
                open.children.extend(frame.nodes);
            }
        }
    }

    if stack.len() != 1 {
        return Err(BuildError::UnclosedRegions { count: stack.len() - 1 });
    }
    let mut root = stack.pop().expect("root frame");
    if let Some(end) = last_covered_end(tokens) {
        root.ensure_open(tokens);
        if root.open.as_ref().is_some_and(|o| o.start < end) {
            root.close_open(end);
        }
    }

    Ok(SentenceTree { roots: root.nodes, source_span: Span::new(0, source_len) })
}
