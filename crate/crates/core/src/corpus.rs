//! Corpus reading and the annotated text format: the source with `<s>`
//! elements inserted at sentence starts and ends, nested like the tree.
//! Removing every inserted tag reproduces the source byte-exactly, so the
//! format doubles as the gold-file format.

use std::fs;
use std::path::{Path, PathBuf};

use quick_xml::events::Event;
use quick_xml::Reader;
use thiserror::Error;

use crate::span::Span;
use crate::tree::{SentenceKind, SentenceNode, SentenceTree};

pub const DEFAULT_XML_UNIT: &str = "citation";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    PlainText,
    Xml,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    pub id: String,
    /// Unit content, original bytes untouched.
    pub source: String,
    pub format: CorpusFormat,
}

/// A corpus file, with enough structure kept to splice annotated units back
/// into the original container.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub docs: Vec<CorpusDocument>,
    pub format: CorpusFormat,
    raw: String,
    unit_ranges: Vec<Span>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid UTF-8 at byte {offset}")]
    Encoding { path: PathBuf, offset: usize },
    #[error("{path}: malformed XML near byte {pos}: {message}")]
    Xml { path: PathBuf, pos: usize, message: String },
    #[error("unbalanced <s> tag at byte {pos}")]
    UnbalancedTag { pos: usize },
}

/// Reads a corpus: one document per blank-line-separated block (plain text)
/// or per `<citation>` element (XML).
pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    read_corpus_with_unit(path, format, DEFAULT_XML_UNIT)
}

pub fn read_corpus_with_unit(
    path: &Path,
    format: CorpusFormat,
    xml_unit: &str,
) -> Result<Corpus, CorpusError> {
    let bytes =
        fs::read(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })?;
    let raw = String::from_utf8(bytes).map_err(|e| CorpusError::Encoding {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    corpus_from_str(raw, format, xml_unit, &stem, path)
}

fn corpus_from_str(
    raw: String,
    format: CorpusFormat,
    xml_unit: &str,
    stem: &str,
    path: &Path,
) -> Result<Corpus, CorpusError> {
    let unit_ranges = match format {
        CorpusFormat::PlainText => plain_blocks(&raw),
        CorpusFormat::Xml => xml_units(&raw, xml_unit, path)?,
    };
    let docs = unit_ranges
        .iter()
        .enumerate()
        .map(|(i, span)| CorpusDocument {
            id: format!("{stem}#{}", i + 1),
            source: span.slice(&raw).to_string(),
            format,
        })
        .collect();
    Ok(Corpus { docs, format, raw, unit_ranges })
}

fn plain_blocks(raw: &str) -> Vec<Span> {
    let mut blocks = Vec::new();
    let mut cursor = 0;
    let mut current: Option<(usize, usize)> = None;
    for line in raw.split_inclusive('\n') {
        let start = cursor;
        cursor += line.len();
        let content = line.trim_end_matches(['\n', '\r']);
        if content.trim().is_empty() {
            if let Some((s, e)) = current.take() {
                blocks.push(Span::new(s, e));
            }
        } else {
            let end = start + content.len();
            match &mut current {
                Some((_, e)) => *e = end,
                None => current = Some((start, end)),
            }
        }
    }
    if let Some((s, e)) = current {
        blocks.push(Span::new(s, e));
    }
    blocks
}

fn xml_units(raw: &str, unit: &str, path: &Path) -> Result<Vec<Span>, CorpusError> {
    let mut reader = Reader::from_str(raw);
    reader.config_mut().check_end_names = true;
    let mut ranges = Vec::new();
    loop {
        let pos = reader.buffer_position() as usize;
        match reader.read_event() {
            Ok(Event::Start(e)) if e.local_name().as_ref() == unit.as_bytes() => {
                let name = e.to_owned();
                let range =
                    reader.read_to_end(name.name()).map_err(|err| CorpusError::Xml {
                        path: path.to_path_buf(),
                        pos: reader.buffer_position() as usize,
                        message: err.to_string(),
                    })?;
                ranges.push(Span::new(range.start as usize, range.end as usize));
            }
            Ok(Event::Eof) => break,
            Ok(_) => {}
            Err(err) => {
                return Err(CorpusError::Xml {
                    path: path.to_path_buf(),
                    pos,
                    message: err.to_string(),
                })
            }
        }
    }
    Ok(ranges)
}

impl Corpus {
    /// Splices per-document annotated texts back into the original container:
    /// blank-line blocks for plain corpora, the untouched surrounding XML for
    /// XML corpora.
    pub fn reassemble(&self, annotated: &[String]) -> String {
        assert_eq!(annotated.len(), self.docs.len(), "one annotated text per document");
        match self.format {
            CorpusFormat::PlainText => {
                let mut out = annotated.join("\n\n");
                if !out.is_empty() {
                    out.push('\n');
                }
                out
            }
            CorpusFormat::Xml => {
                let mut out = String::with_capacity(self.raw.len());
                let mut cursor = 0;
                for (range, text) in self.unit_ranges.iter().zip(annotated) {
                    out.push_str(&self.raw[cursor..range.start]);
                    out.push_str(text);
                    cursor = range.end;
                }
                out.push_str(&self.raw[cursor..]);
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitWarning {
    /// Sentence whose `<s>` element had to be split.
    pub sentence: Span,
    /// The markup boundary it would have crossed.
    pub markup: Span,
}

/// Inserts `<s>`/`</s>` around every node of `tree`, tags tight against the
/// sentence span boundaries.
pub fn emit_annotated(doc: &CorpusDocument, tree: &SentenceTree) -> String {
    emit_annotated_with_warnings(doc, tree).0
}

pub fn emit_annotated_with_warnings(
    doc: &CorpusDocument,
    tree: &SentenceTree,
) -> (String, Vec<EmitWarning>) {
    let source = &doc.source;
    let markup = if doc.format == CorpusFormat::Xml { markup_spans(source) } else { Vec::new() };
    let mut out = String::with_capacity(source.len() + tree.node_count() * 7);
    let mut warnings = Vec::new();
    let mut cursor = 0;
    for root in &tree.roots {
        out.push_str(&source[cursor..root.span.start]);
        emit_node(source, root, &markup, &mut out, &mut warnings);
        cursor = root.span.end;
    }
    out.push_str(&source[cursor..]);
    (out, warnings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TagKind {
    Open,
    Close,
    Standalone,
}

fn markup_spans(source: &str) -> Vec<(Span, TagKind)> {
    let tokens = crate::tokenizer::tokenize(
        source,
        &crate::tokenizer::TokenizerConfig { treat_markup: true, ellipsis_as_terminator: true },
    );
    tokens
        .iter()
        .filter(|t| t.kind == crate::token::TokenKind::Markup)
        .map(|t| {
            let s = t.surface.as_str();
            let kind = if s.starts_with("</") {
                TagKind::Close
            } else if s.ends_with("/>") || s.starts_with("<!") || s.starts_with("<?") {
                TagKind::Standalone
            } else {
                TagKind::Open
            };
            (t.span, kind)
        })
        .collect()
}

/// Markup tags inside `span` that do not balance within it.
fn crossing_tags(span: Span, markup: &[(Span, TagKind)]) -> Vec<Span> {
    let mut crossing = Vec::new();
    let mut stack: Vec<Span> = Vec::new();
    for (tag, kind) in markup.iter().filter(|(t, _)| span.contains(*t)) {
        match kind {
            TagKind::Open => stack.push(*tag),
            TagKind::Close => {
                if stack.pop().is_none() {
                    crossing.push(*tag);
                }
            }
            TagKind::Standalone => {}
        }
    }
    crossing.extend(stack);
    crossing.sort();
    crossing
}

fn trim_span(source: &str, span: Span) -> Span {
    let text = span.slice(source);
    let start_off = text.len() - text.trim_start().len();
    let end_off = text.trim_end().len();
    if start_off >= end_off {
        return Span::new(span.start, span.start);
    }
    Span::new(span.start + start_off, span.start + end_off)
}

fn emit_node(
    source: &str,
    node: &SentenceNode,
    markup: &[(Span, TagKind)],
    out: &mut String,
    warnings: &mut Vec<EmitWarning>,
) {
    let crossing = crossing_tags(node.span, markup);
    if crossing.is_empty() {
        out.push_str("<s>");
        let mut cursor = node.span.start;
        for child in &node.children {
            out.push_str(&source[cursor..child.span.start]);
            emit_node(source, child, markup, out, warnings);
            cursor = child.span.end;
        }
        out.push_str(&source[cursor..node.span.end]);
        out.push_str("</s>");
        return;
    }

    // The sentence crosses pre-existing element boundaries: wrap each piece
    // between the crossing tags in its own <s>.
    for tag in &crossing {
        warnings.push(EmitWarning { sentence: node.span, markup: *tag });
    }
    let mut pieces = Vec::new();
    let mut start = node.span.start;
    for tag in &crossing {
        pieces.push(Span::new(start, tag.start));
        start = tag.end;
    }
    pieces.push(Span::new(start, node.span.end));

    let mut cursor = node.span.start;
    for piece in pieces {
        let content = trim_span(source, piece);
        out.push_str(&source[cursor..content.start]);
        if content.is_empty() {
            cursor = content.start;
            continue;
        }
        out.push_str("<s>");
        let mut inner = content.start;
        for child in &node.children {
            if child.span.start >= content.start && child.span.end <= content.end {
                out.push_str(&source[inner..child.span.start]);
                emit_node(source, child, markup, out, warnings);
                inner = child.span.end;
            }
        }
        out.push_str(&source[inner..content.end]);
        out.push_str("</s>");
        cursor = content.end;
    }
    out.push_str(&source[cursor..node.span.end]);
}

/// Parses annotated text back into `(source, tree)`: the inverse of
/// [`emit_annotated`]. Node kinds are inferred from the character context,
/// since the format does not record them.
pub fn parse_annotated(text: &str) -> Result<(String, SentenceTree), CorpusError> {
    let mut source = String::with_capacity(text.len());
    let mut stack: Vec<(usize, Vec<SentenceNode>)> = Vec::new();
    let mut roots = Vec::new();
    let mut rest = text;
    let mut consumed = 0;

    loop {
        let open = rest.find("<s>");
        let close = rest.find("</s>");
        let (at, is_open) = match (open, close) {
            (Some(o), Some(c)) if o < c => (o, true),
            (_, Some(c)) => (c, false),
            (Some(o), None) => (o, true),
            (None, None) => break,
        };
        source.push_str(&rest[..at]);
        if is_open {
            stack.push((source.len(), Vec::new()));
            consumed += at + 3;
            rest = &rest[at + 3..];
        } else {
            let Some((start, children)) = stack.pop() else {
                return Err(CorpusError::UnbalancedTag { pos: consumed + at });
            };
            let span = Span::new(start, source.len());
            let kind = if stack.is_empty() {
                SentenceKind::Principal
            } else {
                infer_kind(&source, span)
            };
            let node = SentenceNode { span, kind, children };
            match stack.last_mut() {
                Some((_, siblings)) => siblings.push(node),
                None => roots.push(node),
            }
            consumed += at + 4;
            rest = &rest[at + 4..];
        }
    }
    if let Some(&(start, _)) = stack.last() {
        return Err(CorpusError::UnbalancedTag { pos: start });
    }
    source.push_str(rest);

    let source_span = Span::new(0, source.len());
    Ok((source, SentenceTree { roots, source_span }))
}

fn infer_kind(source: &str, span: Span) -> SentenceKind {
    let first = span.slice(source).chars().next();
    if matches!(first, Some('-') | Some('\u{2013}') | Some('\u{2014}')) {
        return SentenceKind::DashReplique;
    }
    let before = source[..span.start].trim_end();
    match before.chars().next_back() {
        Some('(') | Some('[') => SentenceKind::Parenthetical,
        Some(':') => SentenceKind::ColonComplement,
        _ => SentenceKind::Quoted,
    }
}

/// Splits a plain annotated file into blank-line-separated annotated blocks.
pub fn split_annotated_blocks(text: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    for span in plain_blocks(text) {
        blocks.push(span.slice(text));
    }
    blocks
}
