//! Rule-cascade sentence segmentation with included (nested) sentences.
//!
//! Flat segmenters cut quoted dialogue, parenthetical incises and
//! colon-introduced complements away from the sentence that carries them.
//! This crate instead produces a *tree* of sentences over the untouched
//! source bytes: principal sentences at the top level, secondary sentences
//! nested inside them. A deterministic cascade of passes (terminators,
//! colons, paired delimiters, dashes) drives the segmentation, every decision
//! leaves a trace, and an evaluation harness scores output against gold
//! trees and categorizes differences between two system versions.
//!
//! ```
//! use sentree::{segment_text, CascadeConfig, Lexicon};
//!
//! let source = "Elle répondit en criant : « Je sais. Tout va bien ! »";
//! let (tree, _trace) = segment_text(source, &Lexicon::builtin(), &CascadeConfig::default());
//! assert_eq!(tree.roots.len(), 1);
//! assert_eq!(tree.roots[0].children.len(), 2);
//! ```

pub mod cascade;
pub mod corpus;
pub mod eval;
pub mod lexicon;
pub mod span;
pub mod token;
pub mod tokenizer;
pub mod tree;

pub use cascade::{
    build_tree, decompose, segment, segment_text, BoundaryMark, CascadeConfig, DecompositionItem,
    DecompositionLabel, DivergenceMode, MarkKind,
};
pub use corpus::{
    emit_annotated, emit_annotated_with_warnings, parse_annotated, read_corpus,
    read_corpus_with_unit, split_annotated_blocks, Corpus, CorpusDocument, CorpusError,
    CorpusFormat,
};
pub use eval::{
    categorize, categorize_diff, rupture_worksheet, score_corpus, score_diff_corpus, DiffCategory,
    DiffItem, DiffReport, EvalCategory, EvalItem, EvalReport,
};
pub use lexicon::{IndicatorCategory, IndicatorEntry, Lexicon, LexiconError};
pub use span::Span;
pub use token::{Token, TokenKind};
pub use tokenizer::{resolve_ambiguous_quotes, tokenize, TokenizerConfig};
pub use tree::{flatten, validate, SentenceKind, SentenceNode, SentenceTree, TraceEvent};
