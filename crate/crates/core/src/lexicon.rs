//! The indicator lexicon driving the colon rule, plus the abbreviation list
//! feeding the period exceptions.
//!
//! Entries are inflected surface forms matched case-insensitively; there is
//! no morphology. The bundled seed data covers the common verbs of saying and
//! their conjugations; users extend it through the same file format.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::span::Span;
use crate::token::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndicatorCategory {
    Verb,
    Noun,
    Presentative,
    Adverb,
    Locution,
}

impl IndicatorCategory {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Verb" => IndicatorCategory::Verb,
            "Noun" => IndicatorCategory::Noun,
            "Presentative" => IndicatorCategory::Presentative,
            "Adverb" => IndicatorCategory::Adverb,
            "Locution" => IndicatorCategory::Locution,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IndicatorCategory::Verb => "Verb",
            IndicatorCategory::Noun => "Noun",
            IndicatorCategory::Presentative => "Presentative",
            IndicatorCategory::Adverb => "Adverb",
            IndicatorCategory::Locution => "Locution",
        }
    }
}

impl fmt::Display for IndicatorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorEntry {
    /// Inflected surface form; locutions may contain internal spaces.
    pub form: String,
    pub category: IndicatorCategory,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    /// Case-folded form → category. Multi-word forms are keyed by their
    /// space-joined folded words.
    indicators: HashMap<String, IndicatorCategory>,
    /// Case-folded abbreviations, trailing period included.
    abbreviations: HashSet<String>,
    /// Longest locution, in words.
    max_locution_len: usize,
}

/// A successful [`Lexicon::match_indicator`] result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatch {
    pub span: Span,
    pub kind: MatchKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchKind {
    Entry { form: String, category: IndicatorCategory },
    /// Capitalized word not at the window start and not following a
    /// terminator; used only when no lexicon entry matches.
    ProperNoun,
}

impl IndicatorMatch {
    pub fn suppresses_capital_boundary(&self) -> bool {
        // Presentatives announce what follows; before a capitalized
        // non-quote continuation they do not keep the sentence open.
        !matches!(
            self.kind,
            MatchKind::Entry { category: IndicatorCategory::Presentative, .. }
        )
    }
}

fn fold(s: &str) -> String {
    s.to_lowercase()
}

fn fold_words(s: &str) -> String {
    s.split_whitespace().map(fold).collect::<Vec<_>>().join(" ")
}

impl Lexicon {
    /// The seed lexicon bundled with the crate.
    pub fn builtin() -> Self {
        Lexicon::from_strs(
            include_str!("../data/indicators.tsv"),
            include_str!("../data/abbreviations.txt"),
            Path::new("<builtin indicators>"),
            Path::new("<builtin abbreviations>"),
        )
        .expect("bundled lexicon data parses")
    }

    pub fn load(indicator_file: &Path, abbreviation_file: &Path) -> Result<Self, LexiconError> {
        let read = |path: &Path| {
            fs::read_to_string(path)
                .map_err(|source| LexiconError::Io { path: path.to_path_buf(), source })
        };
        let indicators = read(indicator_file)?;
        let abbreviations = read(abbreviation_file)?;
        Lexicon::from_strs(&indicators, &abbreviations, indicator_file, abbreviation_file)
    }

    pub fn from_strs(
        indicators_src: &str,
        abbreviations_src: &str,
        indicator_path: &Path,
        abbreviation_path: &Path,
    ) -> Result<Self, LexiconError> {
        let mut lexicon = Lexicon::default();

        for (idx, raw) in indicators_src.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| LexiconError::Parse {
                path: indicator_path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let (form, category) = line
                .split_once('\t')
                .ok_or_else(|| err("expected form<TAB>category".to_string()))?;
            let form = form.trim();
            if form.is_empty() {
                return Err(err("empty form".to_string()));
            }
            let category = IndicatorCategory::parse(category.trim())
                .ok_or_else(|| err(format!("unknown category {:?}", category.trim())))?;
            let words = form.split_whitespace().count();
            if words > 1 && category != IndicatorCategory::Locution {
                return Err(err(format!("multi-word form {form:?} must be a Locution")));
            }
            if category == IndicatorCategory::Locution {
                lexicon.max_locution_len = lexicon.max_locution_len.max(words);
            }
            lexicon.indicators.insert(fold_words(form), category);
        }

        for (idx, raw) in abbreviations_src.lines().enumerate() {
            let line = raw.trim_end_matches('\r').trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !line.ends_with('.') {
                return Err(LexiconError::Parse {
                    path: abbreviation_path.to_path_buf(),
                    line: idx + 1,
                    message: format!("abbreviation {line:?} must include its trailing period"),
                });
            }
            lexicon.abbreviations.insert(fold(line));
        }

        lexicon.max_locution_len = lexicon.max_locution_len.max(1);
        Ok(lexicon)
    }

    /// Writes the lexicon back out in the load format, sorted for stable
    /// diffs. `load` of the written files reproduces this lexicon exactly.
    pub fn save(
        &self,
        indicator_file: &Path,
        abbreviation_file: &Path,
    ) -> Result<(), LexiconError> {
        let mut entries: Vec<(&String, &IndicatorCategory)> = self.indicators.iter().collect();
        entries.sort();
        let indicators: String =
            entries.iter().map(|(form, cat)| format!("{form}\t{}\n", cat.as_str())).collect();

        let mut abbrevs: Vec<&String> = self.abbreviations.iter().collect();
        abbrevs.sort();
        let abbreviations: String = abbrevs.iter().map(|a| format!("{a}\n")).collect();

        let write = |path: &Path, contents: &str| {
            fs::write(path, contents)
                .map_err(|source| LexiconError::Io { path: path.to_path_buf(), source })
        };
        write(indicator_file, &indicators)?;
        write(abbreviation_file, &abbreviations)
    }

    pub fn indicator_count(&self) -> usize {
        self.indicators.len()
    }

    pub fn abbreviation_count(&self) -> usize {
        self.abbreviations.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = IndicatorEntry> + '_ {
        let mut forms: Vec<(&String, &IndicatorCategory)> = self.indicators.iter().collect();
        forms.sort();
        forms
            .into_iter()
            .map(|(form, category)| IndicatorEntry { form: form.clone(), category: *category })
    }

    /// True iff `surface` (trailing period included) is a known abbreviation.
    pub fn is_abbreviation(&self, surface: &str) -> bool {
        self.abbreviations.contains(&fold(surface))
    }

    /// Longest lexicon match starting exactly at `tokens[idx]` and ending at
    /// or before `max_end`. Locutions join following words across whitespace
    /// only.
    pub(crate) fn match_entry_at(
        &self,
        tokens: &[Token],
        idx: usize,
        max_end: usize,
    ) -> Option<(Span, String, IndicatorCategory)> {
        let first = tokens.get(idx)?;
        if first.kind != TokenKind::Word || first.span.end > max_end {
            return None;
        }
        let mut folded = fold(&first.surface);
        let mut best = self
            .indicators
            .get(&folded)
            .map(|&c| (Span::new(first.span.start, first.span.end), folded.clone(), c));

        let mut words = 1;
        let mut j = idx + 1;
        'extend: while words < self.max_locution_len {
            // Advance across whitespace to the next word.
            while let Some(t) = tokens.get(j) {
                match t.kind {
                    TokenKind::Whitespace => j += 1,
                    TokenKind::Word => break,
                    _ => break 'extend,
                }
            }
            let Some(next) = tokens.get(j) else { break };
            if next.kind != TokenKind::Word || next.span.end > max_end {
                break;
            }
            folded.push(' ');
            folded.push_str(&fold(&next.surface));
            words += 1;
            if let Some(&category) = self.indicators.get(&folded) {
                best = Some((Span::new(first.span.start, next.span.end), folded.clone(), category));
            }
            j += 1;
        }
        best
    }

    /// Finds the rightmost, longest lexicon match among the word tokens lying
    /// inside `window`. When nothing matches, a capitalized word that is
    /// neither at the window start nor right after a terminator counts as a
    /// proper-noun match.
    pub fn match_indicator(&self, tokens: &[Token], window: Span) -> Option<IndicatorMatch> {
        // Word tokens inside the window, with their index in the full stream.
        let words: Vec<(usize, &Token)> = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.kind == TokenKind::Word && window.contains(t.span))
            .collect();
        if words.is_empty() {
            return None;
        }

        let mut best: Option<(Span, String, IndicatorCategory)> = None;
        for &(idx, _) in &words {
            if let Some((span, form, category)) = self.match_entry_at(tokens, idx, window.end) {
                let better = match &best {
                    None => true,
                    Some((b, ..)) => (span.end, span.len()) > (b.end, b.len()),
                };
                if better {
                    best = Some((span, form, category));
                }
            }
        }
        if let Some((span, form, category)) = best {
            return Some(IndicatorMatch { span, kind: MatchKind::Entry { form, category } });
        }

        // Proper-noun fallback, rightmost candidate.
        for (pos, &(idx, token)) in words.iter().enumerate().rev() {
            if pos == 0 || !token.initial_capital {
                continue;
            }
            let after_terminator = tokens[..idx]
                .iter()
                .rev()
                .find(|t| t.kind != TokenKind::Whitespace)
                .is_some_and(|t| t.kind.is_terminator());
            if !after_terminator {
                return Some(IndicatorMatch { span: token.span, kind: MatchKind::ProperNoun });
            }
        }
        None
    }
}
