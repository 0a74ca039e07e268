//! Scoring against gold trees and categorizing differences between two
//! system versions.

use crate::corpus::{emit_annotated, CorpusDocument, CorpusFormat};
use crate::tree::{flatten, SentenceTree};

/// Characters the cascade could have read as segment delimiters; their
/// presence moves a correct flat document out of the plain bucket.
const DELIMITER_CHARS: [char; 11] =
    [':', '«', '»', '"', '(', ')', '[', ']', '\u{2014}', '\u{2013}', '-'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvalCategory {
    CorrectPlain,
    CorrectWithInclusion,
    CorrectDelimitersNoInclusion,
    Error,
}

impl EvalCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalCategory::CorrectPlain => "correct-plain",
            EvalCategory::CorrectWithInclusion => "correct-with-inclusion",
            EvalCategory::CorrectDelimitersNoInclusion => "correct-delimiters-no-inclusion",
            EvalCategory::Error => "error",
        }
    }
}

/// Compares system output to gold. Correct means structurally equal trees
/// (same spans, same nesting).
pub fn categorize(gold: &SentenceTree, system: &SentenceTree, source: &str) -> EvalCategory {
    if !gold.structural_eq(system) {
        return EvalCategory::Error;
    }
    if gold.has_nested() {
        return EvalCategory::CorrectWithInclusion;
    }
    if source.contains(DELIMITER_CHARS) {
        EvalCategory::CorrectDelimitersNoInclusion
    } else {
        EvalCategory::CorrectPlain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffCategory {
    Unchanged,
    TotalImprovement,
    AlternativeNoGainNoLoss,
    PartialImprovement,
    PersistentProblem,
    NewProblem,
}

impl DiffCategory {
    pub const ALL: [DiffCategory; 6] = [
        DiffCategory::Unchanged,
        DiffCategory::TotalImprovement,
        DiffCategory::AlternativeNoGainNoLoss,
        DiffCategory::PartialImprovement,
        DiffCategory::PersistentProblem,
        DiffCategory::NewProblem,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DiffCategory::Unchanged => "unchanged",
            DiffCategory::TotalImprovement => "total-improvement",
            DiffCategory::AlternativeNoGainNoLoss => "alternative-no-gain-no-loss",
            DiffCategory::PartialImprovement => "partial-improvement",
            DiffCategory::PersistentProblem => "persistent-problem",
            DiffCategory::NewProblem => "new-problem",
        }
    }
}

fn boundary_f1(system: &[usize], gold: &[usize]) -> f64 {
    let tp = system.iter().filter(|b| gold.binary_search(b).is_ok()).count() as f64;
    if system.is_empty() && gold.is_empty() {
        return 1.0;
    }
    if tp == 0.0 {
        return 0.0;
    }
    let precision = tp / system.len() as f64;
    let recall = tp / gold.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Assigns one difference category to an (old, new, gold) triple.
///
/// Unchanged output that already matches gold is `Unchanged`; unchanged and
/// wrong is a `PersistentProblem`. The alternative category is a mechanical
/// proxy for a human judgment: same flat boundaries with different
/// nesting only, or equal boundary F1 with both sides boundary-correct.
pub fn categorize_diff(
    old: &SentenceTree,
    new: &SentenceTree,
    gold: &SentenceTree,
    _source: &str,
) -> DiffCategory {
    if old.structural_eq(new) {
        return if new.structural_eq(gold) {
            DiffCategory::Unchanged
        } else {
            DiffCategory::PersistentProblem
        };
    }
    if new.structural_eq(gold) {
        return DiffCategory::TotalImprovement;
    }
    if old.structural_eq(gold) {
        return DiffCategory::NewProblem;
    }
    let flat_old = flatten(old);
    let flat_new = flatten(new);
    let flat_gold = flatten(gold);
    let f1_old = boundary_f1(&flat_old, &flat_gold);
    let f1_new = boundary_f1(&flat_new, &flat_gold);
    if flat_old == flat_new
        || (f1_old == f1_new && flat_old == flat_gold && flat_new == flat_gold)
    {
        return DiffCategory::AlternativeNoGainNoLoss;
    }
    if f1_new > f1_old {
        return DiffCategory::PartialImprovement;
    }
    DiffCategory::PersistentProblem
}

/// One scored document.
#[derive(Debug, Clone)]
pub struct EvalItem {
    pub id: String,
    pub source: String,
    pub gold: SentenceTree,
    pub system: SentenceTree,
}

/// Rounds to the nearest half percentage point, the report's display
/// convention (51/3002 prints as 1.5%, not 1.7%).
pub fn half_point_percent(count: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    (count as f64 / total as f64 * 200.0).round() / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub total_docs: usize,
    pub errors: usize,
    pub correct_plain: usize,
    pub correct_with_inclusion: usize,
    pub correct_delimiters_no_inclusion: usize,
    /// Errors whose gold tree carries an inclusion; they count in both the
    /// error column and the inclusion column.
    pub errors_with_gold_inclusion: usize,
    /// Sum of the table rows, double counts included.
    pub row_total: usize,
    pub boundary_precision: f64,
    pub boundary_recall: f64,
    pub boundary_f1: f64,
    pub structure_exact_match: f64,
    /// Set on an empty corpus: every ratio is reported as 0.
    pub empty: bool,
}

impl EvalReport {
    /// Table convention: the sum of the three correct rows, so the
    /// double-counted error-plus-inclusion documents are in here too.
    pub fn total_correct(&self) -> usize {
        self.correct_plain + self.inclusion_row() + self.correct_delimiters_no_inclusion
    }

    /// The inclusion table row: correct inclusions plus the double-counted
    /// erroneous documents whose gold holds an inclusion.
    pub fn inclusion_row(&self) -> usize {
        self.correct_with_inclusion + self.errors_with_gold_inclusion
    }

    pub fn percent(&self, count: usize) -> f64 {
        half_point_percent(count, self.row_total)
    }

    /// Unrounded percentages of the four table rows; they sum to 100 exactly
    /// (up to float error) since the denominator is the row total.
    pub fn raw_percentages(&self) -> [f64; 4] {
        let total = self.row_total.max(1) as f64;
        [
            self.errors as f64 * 100.0 / total,
            self.correct_plain as f64 * 100.0 / total,
            self.inclusion_row() as f64 * 100.0 / total,
            self.correct_delimiters_no_inclusion as f64 * 100.0 / total,
        ]
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let row = |label: &str, count: usize, pct: f64| {
            format!("{label:<36} {count:>6}  {pct:>5.1}%\n")
        };
        out.push_str(&format!("documents{:>33}\n", self.total_docs));
        out.push_str(&row("errors", self.errors, self.percent(self.errors)));
        out.push_str(&row("correct-plain", self.correct_plain, self.percent(self.correct_plain)));
        out.push_str(&row(
            "correct-with-inclusion",
            self.inclusion_row(),
            self.percent(self.inclusion_row()),
        ));
        out.push_str(&row(
            "correct-delimiters-no-inclusion",
            self.correct_delimiters_no_inclusion,
            self.percent(self.correct_delimiters_no_inclusion),
        ));
        out.push_str(&row(
            "total-correct",
            self.total_correct(),
            self.percent(self.total_correct()),
        ));
        out.push_str(&format!("rows-total{:>32}\n", self.row_total));
        if self.empty {
            out.push_str("empty corpus: ratios reported as 0\n");
        }
        out.push_str(&format!(
            "boundary precision {:.4}  recall {:.4}  f1 {:.4}\n",
            self.boundary_precision, self.boundary_recall, self.boundary_f1
        ));
        out.push_str(&format!("structure exact-match {:.4}\n", self.structure_exact_match));
        out
    }

    /// Machine-readable rows: one line per category, tab-separated.
    pub fn render_delimited(&self) -> String {
        let mut out = String::new();
        let mut row = |label: &str, count: usize| {
            out.push_str(&format!("{label}\t{count}\t{:.1}\n", self.percent(count)));
        };
        row("errors", self.errors);
        row("correct-plain", self.correct_plain);
        row("correct-with-inclusion", self.inclusion_row());
        row("correct-delimiters-no-inclusion", self.correct_delimiters_no_inclusion);
        row("total-correct", self.total_correct());
        out.push_str(&format!("rows-total\t{}\t\n", self.row_total));
        out
    }
}

/// Scores aligned (gold, system) pairs, micro-averaging flat-boundary
/// precision/recall/F1 over the corpus.
pub fn score_corpus(items: &[EvalItem]) -> EvalReport {
    let mut report = EvalReport {
        total_docs: items.len(),
        errors: 0,
        correct_plain: 0,
        correct_with_inclusion: 0,
        correct_delimiters_no_inclusion: 0,
        errors_with_gold_inclusion: 0,
        row_total: 0,
        boundary_precision: 0.0,
        boundary_recall: 0.0,
        boundary_f1: 0.0,
        structure_exact_match: 0.0,
        empty: items.is_empty(),
    };

    let mut tp = 0usize;
    let mut system_total = 0usize;
    let mut gold_total = 0usize;
    let mut exact = 0usize;

    for item in items {
        match categorize(&item.gold, &item.system, &item.source) {
            EvalCategory::CorrectPlain => report.correct_plain += 1,
            EvalCategory::CorrectWithInclusion => report.correct_with_inclusion += 1,
            EvalCategory::CorrectDelimitersNoInclusion => {
                report.correct_delimiters_no_inclusion += 1
            }
            EvalCategory::Error => {
                report.errors += 1;
                if item.gold.has_nested() {
                    report.errors_with_gold_inclusion += 1;
                }
            }
        }
        if item.gold.structural_eq(&item.system) {
            exact += 1;
        }
        let gold_b = flatten(&item.gold);
        let sys_b = flatten(&item.system);
        tp += sys_b.iter().filter(|b| gold_b.binary_search(b).is_ok()).count();
        system_total += sys_b.len();
        gold_total += gold_b.len();
    }

    report.row_total = report.errors
        + report.correct_plain
        + report.inclusion_row()
        + report.correct_delimiters_no_inclusion;

    if !items.is_empty() {
        report.structure_exact_match = exact as f64 / items.len() as f64;
    }
    if system_total > 0 {
        report.boundary_precision = tp as f64 / system_total as f64;
    }
    if gold_total > 0 {
        report.boundary_recall = tp as f64 / gold_total as f64;
    }
    if report.boundary_precision + report.boundary_recall > 0.0 {
        report.boundary_f1 = 2.0 * report.boundary_precision * report.boundary_recall
            / (report.boundary_precision + report.boundary_recall);
    }
    report
}

/// One diffed document.
#[derive(Debug, Clone)]
pub struct DiffItem {
    pub id: String,
    pub source: String,
    pub old: SentenceTree,
    pub new: SentenceTree,
    pub gold: SentenceTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffReport {
    pub total: usize,
    pub counts: Vec<(DiffCategory, usize)>,
    pub per_doc: Vec<(String, DiffCategory)>,
}

impl DiffReport {
    pub fn count(&self, category: DiffCategory) -> usize {
        self.counts.iter().find(|(c, _)| *c == category).map_or(0, |(_, n)| *n)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("documents{:>33}\n", self.total));
        for (category, count) in &self.counts {
            let pct =
                if self.total == 0 { 0.0 } else { *count as f64 * 100.0 / self.total as f64 };
            out.push_str(&format!("{:<28} {count:>6}  {pct:>5.1}%\n", category.as_str()));
        }
        out
    }

    pub fn render_delimited(&self) -> String {
        let mut out = String::new();
        for (category, count) in &self.counts {
            let pct =
                if self.total == 0 { 0.0 } else { *count as f64 * 100.0 / self.total as f64 };
            out.push_str(&format!("{}\t{count}\t{pct:.1}\n", category.as_str()));
        }
        for (id, category) in &self.per_doc {
            out.push_str(&format!("doc\t{id}\t{}\n", category.as_str()));
        }
        out
    }
}

pub fn score_diff_corpus(items: &[DiffItem]) -> DiffReport {
    let mut per_doc = Vec::with_capacity(items.len());
    for item in items {
        let category = categorize_diff(&item.old, &item.new, &item.gold, &item.source);
        per_doc.push((item.id.clone(), category));
    }
    let counts = DiffCategory::ALL
        .iter()
        .map(|&c| (c, per_doc.iter().filter(|(_, got)| *got == c).count()))
        .collect();
    DiffReport { total: items.len(), counts, per_doc }
}

/// Rows for the manual syntactic-rupture annotation: every error and every
/// correct document with an inclusion, with both segmentations shown. The
/// rupture/link judgment columns are left empty; those judgments stay
/// human.
pub fn rupture_worksheet(items: &[EvalItem]) -> String {
    let mut out = String::from("id\tcategory\tsystem\tgold\trupture\tlien\n");
    for item in items {
        let category = categorize(&item.gold, &item.system, &item.source);
        if !matches!(category, EvalCategory::Error | EvalCategory::CorrectWithInclusion) {
            continue;
        }
        let doc = CorpusDocument {
            id: item.id.clone(),
            source: item.source.clone(),
            format: CorpusFormat::PlainText,
        };
        let system = emit_annotated(&doc, &item.system).replace('\t', " ").replace('\n', " ");
        let gold = emit_annotated(&doc, &item.gold).replace('\t', " ").replace('\n', " ");
        out.push_str(&format!("{}\t{}\t{system}\t{gold}\t\t\n", item.id, category.as_str()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Span;
    use crate::tree::{SentenceKind, SentenceNode};

    fn flat_tree(ends: &[usize], len: usize) -> SentenceTree {
        let mut roots = Vec::new();
        let mut start = 0;
        for &end in ends {
            roots.push(SentenceNode::leaf(Span::new(start, end), SentenceKind::Principal));
            start = end + 1;
        }
        SentenceTree { roots, source_span: Span::new(0, len) }
    }

    fn nested_tree(len: usize) -> SentenceTree {
        let mut root = SentenceNode::leaf(Span::new(0, len), SentenceKind::Principal);
        root.children.push(SentenceNode::leaf(Span::new(2, len - 2), SentenceKind::Quoted));
        SentenceTree { roots: vec![root], source_span: Span::new(0, len) }
    }

    #[test]
    fn identical_flat_without_delimiters_is_plain() {
        let source = "Bonjour tout le monde.";
        let t = flat_tree(&[source.len()], source.len());
        assert_eq!(categorize(&t, &t.clone(), source), EvalCategory::CorrectPlain);
    }

    #[test]
    fn identical_nested_is_inclusion() {
        let source = "« Oui. Non. »";
        let t = nested_tree(source.len());
        assert_eq!(categorize(&t, &t.clone(), source), EvalCategory::CorrectWithInclusion);
    }

    #[test]
    fn flat_with_delimiters_is_delimiter_bucket() {
        let source = "Un mot (net).";
        let t = flat_tree(&[source.len()], source.len());
        assert_eq!(
            categorize(&t, &t.clone(), source),
            EvalCategory::CorrectDelimitersNoInclusion
        );
    }

    #[test]
    fn structural_mismatch_is_error() {
        // Oracle: tree equality — system splits where gold does not.
        let source = "Un deux. Trois quatre.";
        let gold = flat_tree(&[source.len()], source.len());
        let system = flat_tree(&[8, source.len()], source.len());
        assert!(!gold.structural_eq(&system));
        assert_eq!(categorize(&gold, &system, source), EvalCategory::Error);
    }

    #[test]
    fn diff_unchanged_requires_correctness() {
        let source = "abc def.";
        let gold = flat_tree(&[source.len()], source.len());
        let wrong = flat_tree(&[3, source.len()], source.len());
        assert_eq!(
            categorize_diff(&gold, &gold, &gold, source),
            DiffCategory::Unchanged
        );
        assert_eq!(
            categorize_diff(&wrong, &wrong, &gold, source),
            DiffCategory::PersistentProblem
        );
    }

    #[test]
    fn diff_total_improvement() {
        let source = "abc def.";
        let gold = nested_tree(source.len());
        let old = flat_tree(&[3, source.len()], source.len());
        assert_eq!(categorize_diff(&old, &gold, &gold, source), DiffCategory::TotalImprovement);
    }

    #[test]
    fn diff_new_problem() {
        let source = "abc def.";
        let gold = flat_tree(&[source.len()], source.len());
        let bad = flat_tree(&[3, source.len()], source.len());
        assert_eq!(categorize_diff(&gold, &bad, &gold, source), DiffCategory::NewProblem);
    }

    #[test]
    fn diff_alternative_same_boundaries_grouped_in_block() {
        let source = "« Oui. Non. »";
        let len = source.len();
        // Old: two flat sentences. New: the same boundaries grouped under a
        // block whose end coincides with the second sentence's end.
        let old = flat_tree(&[6, len], len);
        let mut block = SentenceNode::leaf(Span::new(0, len), SentenceKind::Principal);
        block.children.push(SentenceNode::leaf(Span::new(0, 6), SentenceKind::Quoted));
        block.children.push(SentenceNode::leaf(Span::new(7, len), SentenceKind::Quoted));
        let new = SentenceTree { roots: vec![block], source_span: Span::new(0, len) };
        let gold = nested_tree(len);
        assert_eq!(flatten(&old), flatten(&new));
        assert_eq!(
            categorize_diff(&old, &new, &gold, source),
            DiffCategory::AlternativeNoGainNoLoss
        );
    }

    #[test]
    fn diff_partial_improvement() {
        let source = "ab. cd. ef.";
        let len = source.len();
        let gold = flat_tree(&[3, 7, len], len);
        let old = flat_tree(&[5, len], len); // one boundary right (end), one wrong
        let new = flat_tree(&[3, len], len); // two boundaries right
        assert_eq!(
            categorize_diff(&old, &new, &gold, source),
            DiffCategory::PartialImprovement
        );
    }

    #[test]
    fn table_arithmetic_with_double_counts() {
        // 51 errors (2 of them on gold inclusions), 2291 plain, 107 correct
        // inclusions, 551 delimiter-only: rows 51/2291/109/551 over 3002.
        let mut items = Vec::new();
        let plain_src = "Bonjour tout le monde.";
        let delim_src = "Un mot (net).";
        let nested_src = "« Oui. Non. »";
        let plain = flat_tree(&[plain_src.len()], plain_src.len());
        let delim = flat_tree(&[delim_src.len()], delim_src.len());
        let nested = nested_tree(nested_src.len());
        let wrong_plain = flat_tree(&[7, plain_src.len()], plain_src.len());
        let wrong_nested = flat_tree(&[6, nested_src.len()], nested_src.len());

        let mut push = |n: usize, source: &str, gold: &SentenceTree, system: &SentenceTree| {
            for _ in 0..n {
                items.push(EvalItem {
                    id: format!("d{}", items.len()),
                    source: source.to_string(),
                    gold: gold.clone(),
                    system: system.clone(),
                });
            }
        };
        push(49, plain_src, &plain, &wrong_plain);
        push(2, nested_src, &nested, &wrong_nested);
        push(2291, plain_src, &plain, &plain);
        push(107, nested_src, &nested, &nested);
        push(551, delim_src, &delim, &delim);

        let report = score_corpus(&items);
        assert_eq!(report.total_docs, 3000);
        assert_eq!(report.errors, 51);
        assert_eq!(report.correct_plain, 2291);
        assert_eq!(report.inclusion_row(), 109);
        assert_eq!(report.correct_delimiters_no_inclusion, 551);
        assert_eq!(report.row_total, 3002);
        assert_eq!(report.total_correct(), 2951);
        assert_eq!(report.percent(report.errors), 1.5);
        assert_eq!(report.percent(report.correct_plain), 76.5);
        assert_eq!(report.percent(report.inclusion_row()), 3.5);
        assert_eq!(report.percent(report.correct_delimiters_no_inclusion), 18.5);
        assert_eq!(report.percent(report.total_correct()), 98.5);
        let sum: f64 = report.raw_percentages().iter().sum();
        assert!((sum - 100.0).abs() < 0.2);
    }

    #[test]
    fn all_correct_small_corpus() {
        let source = "Bonjour tout le monde.";
        let t = flat_tree(&[source.len()], source.len());
        let items: Vec<EvalItem> = (0..10)
            .map(|i| EvalItem {
                id: format!("d{i}"),
                source: source.to_string(),
                gold: t.clone(),
                system: t.clone(),
            })
            .collect();
        let report = score_corpus(&items);
        assert_eq!(report.total_correct(), 10);
        assert_eq!(report.percent(report.total_correct()), 100.0);
        assert_eq!(report.boundary_f1, 1.0);
        assert_eq!(report.structure_exact_match, 1.0);
    }

    #[test]
    fn empty_corpus_flagged() {
        let report = score_corpus(&[]);
        assert!(report.empty);
        assert_eq!(report.boundary_f1, 0.0);
        assert_eq!(report.row_total, 0);
        assert_eq!(report.percent(0), 0.0);
    }

    #[test]
    fn worksheet_row_count() {
        let plain_src = "Bonjour tout le monde.";
        let nested_src = "« Oui. Non. »";
        let plain = flat_tree(&[plain_src.len()], plain_src.len());
        let wrong = flat_tree(&[7, plain_src.len()], plain_src.len());
        let nested = nested_tree(nested_src.len());
        let mut items = Vec::new();
        for i in 0..2 {
            items.push(EvalItem {
                id: format!("err{i}"),
                source: plain_src.into(),
                gold: plain.clone(),
                system: wrong.clone(),
            });
        }
        for i in 0..3 {
            items.push(EvalItem {
                id: format!("inc{i}"),
                source: nested_src.into(),
                gold: nested.clone(),
                system: nested.clone(),
            });
        }
        items.push(EvalItem {
            id: "plain".into(),
            source: plain_src.into(),
            gold: plain.clone(),
            system: plain.clone(),
        });
        let sheet = rupture_worksheet(&items);
        assert_eq!(sheet.lines().count(), 1 + 5);
    }

    #[test]
    fn empty_worksheet() {
        let source = "Bonjour tout le monde.";
        let t = flat_tree(&[source.len()], source.len());
        let items = vec![EvalItem {
            id: "d0".into(),
            source: source.into(),
            gold: t.clone(),
            system: t,
        }];
        let sheet = rupture_worksheet(&items);
        assert_eq!(sheet.lines().count(), 1);
    }
}
