//! The segmentation engine: an ordered sequence of deterministic passes over
//! the token stream (terminators, then colons, then paired delimiters, then
//! dashes), followed by tree construction. Each fired rule leaves a trace
//! event.

mod build;
mod colon;
mod dashes;
mod decompose;
mod delimiters;
mod marks;
mod terminators;

pub use build::{build_tree, BuildError};
pub use colon::pass_colon;
pub use dashes::pass_dashes;
pub use decompose::{decompose, DecompositionItem, DecompositionLabel};
pub use delimiters::pass_paired_delimiters;
pub use marks::{normalize_marks, BoundaryMark, MarkKind};
pub use terminators::pass_terminators;

use crate::lexicon::Lexicon;
use crate::token::Token;
use crate::tokenizer::{resolve_ambiguous_quotes, tokenize, TokenizerConfig};
use crate::tree::{SentenceTree, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DivergenceMode {
    /// Reproduce the published March 2024 behavior, including its known
    /// failures (colon before a digit, initials inside parentheses, colon
    /// echo nesting).
    Paper2024,
    /// Apply the corrected behavior those failures call for.
    #[default]
    Expected,
}

impl DivergenceMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper2024" => Some(DivergenceMode::Paper2024),
            "expected" => Some(DivergenceMode::Expected),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DivergenceMode::Paper2024 => "paper2024",
            DivergenceMode::Expected => "expected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CascadeConfig {
    pub colon_indicator_rule: bool,
    pub nest_quotes: bool,
    pub nest_parentheses: bool,
    pub nest_dashes: bool,
    pub include_dash_in_sentence: bool,
    pub known_divergences_mode: DivergenceMode,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig {
            colon_indicator_rule: true,
            nest_quotes: true,
            nest_parentheses: true,
            nest_dashes: true,
            include_dash_in_sentence: true,
            known_divergences_mode: DivergenceMode::Expected,
        }
    }
}

impl CascadeConfig {
    /// Applies one `key=value` override, as read from a config file or a
    /// command-line flag. Keys use the field names with `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let parse_bool = |v: &str| match v.to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" | "on" => Ok(true),
            "false" | "0" | "no" | "off" => Ok(false),
            _ => Err(format!("invalid boolean {v:?}")),
        };
        match key.replace('-', "_").as_str() {
            "colon_indicator_rule" => self.colon_indicator_rule = parse_bool(value)?,
            "nest_quotes" => self.nest_quotes = parse_bool(value)?,
            "nest_parentheses" => self.nest_parentheses = parse_bool(value)?,
            "nest_dashes" => self.nest_dashes = parse_bool(value)?,
            "include_dash_in_sentence" => self.include_dash_in_sentence = parse_bool(value)?,
            "known_divergences" | "known_divergences_mode" => {
                self.known_divergences_mode = DivergenceMode::parse(value)
                    .ok_or_else(|| format!("invalid mode {value:?}"))?
            }
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }
}

/// Runs the full cascade over a resolved token stream. Deterministic: the
/// output depends only on the arguments.
pub fn segment(
    tokens: &[Token],
    lexicon: &Lexicon,
    config: &CascadeConfig,
) -> (SentenceTree, Vec<TraceEvent>) {
    let source_len = tokens.last().map_or(0, |t| t.span.end);
    let mut trace = Vec::new();

    let (marks, t) = pass_terminators(tokens, lexicon);
    trace.extend(t);
    let (marks, t) = pass_colon(tokens, lexicon, config, &marks);
    trace.extend(t);
    let (marks, t) = pass_paired_delimiters(tokens, lexicon, config, &marks);
    trace.extend(t);
    let (marks, t) = pass_dashes(tokens, config, &marks);
    trace.extend(t);

    let tree = build_tree(tokens, &marks, source_len)
        .expect("cascade passes emit balanced marks");
    (tree, trace)
}

/// Tokenizes, resolves straight quotes and segments in one call.
pub fn segment_text(
    source: &str,
    lexicon: &Lexicon,
    config: &CascadeConfig,
) -> (SentenceTree, Vec<TraceEvent>) {
    let tokens = resolve_ambiguous_quotes(&tokenize(source, &TokenizerConfig::default()));
    segment(&tokens, lexicon, config)
}
