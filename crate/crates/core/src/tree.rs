//! Sentence trees: an ordered forest of principal sentences, each of which
//! may contain nested secondary sentences (quoted speech, parenthetical
//! incises, dash dialogue turns, colon complements).

use std::fmt;

use crate::span::Span;
use crate::tokenizer::{self, TokenizerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SentenceKind {
    /// Top-level sentence.
    Principal,
    /// Secondary sentence inside quotation marks.
    Quoted,
    /// Secondary sentence inside parentheses or brackets.
    Parenthetical,
    /// One speaker turn of dash-introduced dialogue.
    DashReplique,
    /// Secondary sentence attached after a colon.
    ColonComplement,
}

impl fmt::Display for SentenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SentenceKind::Principal => "principal",
            SentenceKind::Quoted => "quoted",
            SentenceKind::Parenthetical => "parenthetical",
            SentenceKind::DashReplique => "dash-replique",
            SentenceKind::ColonComplement => "colon-complement",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceNode {
    /// Full extent, including any opening/closing delimiters assigned to this
    /// sentence.
    pub span: Span,
    pub kind: SentenceKind,
    pub children: Vec<SentenceNode>,
}

impl SentenceNode {
    pub fn leaf(span: Span, kind: SentenceKind) -> Self {
        SentenceNode { span, kind, children: Vec::new() }
    }

    /// Same spans and same nesting; kinds are ignored (the annotated text
    /// format does not preserve them).
    pub fn structural_eq(&self, other: &SentenceNode) -> bool {
        self.span == other.span
            && self.children.len() == other.children.len()
            && self.children.iter().zip(&other.children).all(|(a, b)| a.structural_eq(b))
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a SentenceNode)) {
        f(self);
        for child in &self.children {
            child.walk(f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTree {
    pub roots: Vec<SentenceNode>,
    pub source_span: Span,
}

impl SentenceTree {
    pub fn structural_eq(&self, other: &SentenceTree) -> bool {
        self.roots.len() == other.roots.len()
            && self.roots.iter().zip(&other.roots).all(|(a, b)| a.structural_eq(b))
    }

    pub fn visit<'a>(&'a self, mut f: impl FnMut(&'a SentenceNode)) {
        for root in &self.roots {
            root.walk(&mut f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(|_| n += 1);
        n
    }

    pub fn has_nested(&self) -> bool {
        self.roots.iter().any(|r| !r.children.is_empty())
    }
}

/// All sentence-end boundaries (end offsets of every node at every depth),
/// sorted and deduplicated.
pub fn flatten(tree: &SentenceTree) -> Vec<usize> {
    let mut ends = Vec::with_capacity(tree.node_count());
    tree.visit(|node| ends.push(node.span.end));
    ends.sort_unstable();
    ends.dedup();
    ends
}

/// A broken invariant found by [`validate`]. Violations are data, not errors:
/// a tree built by hand may carry any number of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SpanOutOfBounds { span: Span },
    NotCharBoundary { span: Span },
    ChildOutsideParent { parent: Span, child: Span },
    SiblingsOverlap { left: Span, right: Span },
    SiblingsOutOfOrder { left: Span, right: Span },
    RootNotPrincipal { span: Span },
    NestedPrincipal { span: Span },
    UncoveredToken { span: Span },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SpanOutOfBounds { span } => write!(f, "span {span} out of bounds"),
            Violation::NotCharBoundary { span } => write!(f, "span {span} not on char boundaries"),
            Violation::ChildOutsideParent { parent, child } => {
                write!(f, "child {child} not strictly inside parent {parent}")
            }
            Violation::SiblingsOverlap { left, right } => {
                write!(f, "sibling spans {left} and {right} overlap")
            }
            Violation::SiblingsOutOfOrder { left, right } => {
                write!(f, "sibling spans {left} and {right} out of document order")
            }
            Violation::RootNotPrincipal { span } => write!(f, "root {span} is not principal"),
            Violation::NestedPrincipal { span } => write!(f, "nested node {span} is principal"),
            Violation::UncoveredToken { span } => {
                write!(f, "token {span} not covered by any sentence")
            }
        }
    }
}

/// Checks every tree invariant against `source`: span bounds and char
/// boundaries, strict containment of children, disjoint ordered siblings,
/// kind-versus-depth, and coverage of every non-whitespace, non-markup token
/// by some root.
pub fn validate(tree: &SentenceTree, source: &str) -> Vec<Violation> {
    let mut out = Vec::new();

    let check_span = |span: Span, out: &mut Vec<Violation>| {
        if span.start > span.end || span.end > source.len() {
            out.push(Violation::SpanOutOfBounds { span });
            return false;
        }
        if !source.is_char_boundary(span.start) || !source.is_char_boundary(span.end) {
            out.push(Violation::NotCharBoundary { span });
            return false;
        }
        true
    };

    fn check_node(
        node: &SentenceNode,
        depth: usize,
        source: &str,
        check_span: &impl Fn(Span, &mut Vec<Violation>) -> bool,
        out: &mut Vec<Violation>,
    ) {
        check_span(node.span, out);
        if depth == 0 && node.kind != SentenceKind::Principal {
            out.push(Violation::RootNotPrincipal { span: node.span });
        }
        if depth > 0 && node.kind == SentenceKind::Principal {
            out.push(Violation::NestedPrincipal { span: node.span });
        }
        for child in &node.children {
            // Strict containment: inside the parent and not the same span.
            if !node.span.contains(child.span) || child.span == node.span {
                out.push(Violation::ChildOutsideParent { parent: node.span, child: child.span });
            }
        }
        check_siblings(&node.children, out);
        for child in &node.children {
            check_node(child, depth + 1, source, check_span, out);
        }
    }

    fn check_siblings(nodes: &[SentenceNode], out: &mut Vec<Violation>) {
        for pair in nodes.windows(2) {
            let (left, right) = (pair[0].span, pair[1].span);
            if left.overlaps(right) {
                out.push(Violation::SiblingsOverlap { left, right });
            } else if right.start < left.end {
                out.push(Violation::SiblingsOutOfOrder { left, right });
            }
        }
    }

    for root in &tree.roots {
        if !tree.source_span.contains(root.span) {
            out.push(Violation::SpanOutOfBounds { span: root.span });
        }
        check_node(root, 0, source, &check_span, &mut out);
    }
    check_siblings(&tree.roots, &mut out);

    // Coverage: every non-whitespace, non-markup token lies inside a root.
    if tree.source_span.end <= source.len() {
        let text = tree.source_span.slice(source);
        for token in tokenizer::tokenize(text, &TokenizerConfig::default()) {
            if !token.kind.is_covered() {
                continue;
            }
            let span = Span::new(
                token.span.start + tree.source_span.start,
                token.span.end + tree.source_span.start,
            );
            if !tree.roots.iter().any(|r| r.span.contains(span)) {
                out.push(Violation::UncoveredToken { span });
            }
        }
    }

    out
}

/// Per-decision record emitted by the cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub pass: &'static str,
    pub rule: &'static str,
    pub trigger: Span,
    pub decision: Decision,
    /// E.g. the indicator that suppressed a colon boundary.
    pub evidence: Option<Span>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Boundary,
    NoBoundary,
    OpenNested,
    CloseNested,
    InlineDelimiter,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Decision::Boundary => "boundary",
            Decision::NoBoundary => "no-boundary",
            Decision::OpenNested => "open-nested",
            Decision::CloseNested => "close-nested",
            Decision::InlineDelimiter => "inline-delimiter",
        };
        f.write_str(name)
    }
}
