//! Command-line front end: batch segmentation, evaluation, version diffing,
//! decision tracing and lexicon checks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sentree::{
    decompose, emit_annotated_with_warnings, parse_annotated, read_corpus_with_unit,
    resolve_ambiguous_quotes, rupture_worksheet, score_corpus, score_diff_corpus, segment,
    split_annotated_blocks, tokenize, CascadeConfig, Corpus, CorpusDocument, CorpusFormat,
    DiffItem, DivergenceMode, EvalItem, Lexicon, SentenceTree, TokenizerConfig,
};

#[derive(Parser)]
#[command(name = "sentree", version, about = "Sentence segmentation with included sentences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a corpus and write it back annotated with nested <s> elements.
    Segment(SegmentArgs),
    /// Score an annotated system file against an annotated gold file.
    Eval(EvalArgs),
    /// Categorize the differences between two system versions against gold.
    Diff(DiffArgs),
    /// Show the cascade's decision trace and sentence decompositions.
    Trace(SegmentArgs),
    /// Load lexicon files and report what they contain.
    LexiconCheck(LexiconArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Plain,
    Xml,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Expected,
    Paper2024,
}

#[derive(Args)]
struct SegmentArgs {
    /// Input corpus (plain text blocks or XML).
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Container element holding one citation in XML mode.
    #[arg(long, default_value = "citation")]
    xml_unit: String,
    /// Indicator lexicon file (bundled seed lexicon when omitted).
    #[arg(long)]
    indicators: Option<PathBuf>,
    /// Abbreviation list file (bundled list when omitted).
    #[arg(long)]
    abbreviations: Option<PathBuf>,
    /// Flat key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    colon_indicator_rule: Option<bool>,
    #[arg(long)]
    nest_quotes: Option<bool>,
    #[arg(long)]
    nest_parentheses: Option<bool>,
    #[arg(long)]
    nest_dashes: Option<bool>,
    #[arg(long)]
    include_dash_in_sentence: Option<bool>,
    #[arg(long, value_enum)]
    known_divergences: Option<ModeArg>,
    /// Worker threads for document processing; output order is input order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file (standard output when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Annotated system output.
    system: PathBuf,
    /// Annotated gold file.
    #[arg(long)]
    gold: PathBuf,
    /// Output file for the report.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the rupture worksheet (errors and inclusions, for manual
    /// annotation) to this path.
    #[arg(long)]
    worksheet: Option<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    /// Annotated output of the older version.
    #[arg(long)]
    old: PathBuf,
    /// Annotated output of the newer version.
    #[arg(long)]
    new: PathBuf,
    /// Annotated gold file.
    #[arg(long)]
    gold: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LexiconArgs {
    #[arg(long)]
    indicators: Option<PathBuf>,
    #[arg(long)]
    abbreviations: Option<PathBuf>,
}

/// Input problems exit with 2, alignment mismatches with 3.
enum CliError {
    Input(anyhow::Error),
    Alignment(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Segment(args) => cmd_segment(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Diff(args) => cmd_diff(args),
        Command::Trace(args) => cmd_trace(args),
        Command::LexiconCheck(args) => cmd_lexicon_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Alignment(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn load_lexicon(
    indicators: &Option<PathBuf>,
    abbreviations: &Option<PathBuf>,
) -> Result<Lexicon> {
    match (indicators, abbreviations) {
        (None, None) => Ok(Lexicon::builtin()),
        (Some(ind), Some(abbr)) => Ok(Lexicon::load(ind, abbr)?),
        (Some(ind), None) => {
            // Only the indicator file was given: pair it with the bundled
            // abbreviations.
            let src = fs::read_to_string(ind)
                .with_context(|| format!("cannot read {}", ind.display()))?;
            Ok(Lexicon::from_strs(
                &src,
                include_str!("../../core/data/abbreviations.txt"),
                ind,
                Path::new("<builtin abbreviations>"),
            )?)
        }
        (None, Some(abbr)) => {
            let src = fs::read_to_string(abbr)
                .with_context(|| format!("cannot read {}", abbr.display()))?;
            Ok(Lexicon::from_strs(
                include_str!("../../core/data/indicators.tsv"),
                &src,
                Path::new("<builtin indicators>"),
                abbr,
            )?)
        }
    }
}

fn build_config(args: &SegmentArgs) -> Result<CascadeConfig> {
    let mut config = CascadeConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), idx + 1))?;
            config
                .set(key.trim(), value.trim())
                .map_err(|e| anyhow!("{}:{}: {e}", path.display(), idx + 1))?;
        }
    }
    if let Some(v) = args.colon_indicator_rule {
        config.colon_indicator_rule = v;
    }
    if let Some(v) = args.nest_quotes {
        config.nest_quotes = v;
    }
    if let Some(v) = args.nest_parentheses {
        config.nest_parentheses = v;
    }
    if let Some(v) = args.nest_dashes {
        config.nest_dashes = v;
    }
    if let Some(v) = args.include_dash_in_sentence {
        config.include_dash_in_sentence = v;
    }
    if let Some(mode) = args.known_divergences {
        config.known_divergences_mode = match mode {
            ModeArg::Expected => DivergenceMode::Expected,
            ModeArg::Paper2024 => DivergenceMode::Paper2024,
        };
    }
    Ok(config)
}

fn read_input(args: &SegmentArgs) -> Result<Corpus> {
    let format = match args.format {
        Some(FormatArg::Plain) => CorpusFormat::PlainText,
        Some(FormatArg::Xml) => CorpusFormat::Xml,
        None => match args.input.extension().and_then(|e| e.to_str()) {
            Some("xml") => CorpusFormat::Xml,
            _ => CorpusFormat::PlainText,
        },
    };
    Ok(read_corpus_with_unit(&args.input, format, &args.xml_unit)?)
}

fn write_output(path: &Option<PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, contents)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .context("cannot write to standard output")?,
    }
    Ok(())
}

fn segment_documents(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &CascadeConfig,
    jobs: usize,
) -> Vec<(String, SentenceTree, Vec<sentree::TraceEvent>)> {
    let run = |doc: &CorpusDocument| {
        let tokens =
            resolve_ambiguous_quotes(&tokenize(&doc.source, &TokenizerConfig::default()));
        let (tree, trace) = segment(&tokens, lexicon, config);
        let (annotated, warnings) = emit_annotated_with_warnings(doc, &tree);
        for w in warnings {
            eprintln!(
                "warning: {}: sentence {} split at markup boundary {}",
                doc.id, w.sentence, w.markup
            );
        }
        (annotated, tree, trace)
    };
    if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| corpus.docs.par_iter().map(run).collect())
    } else {
        corpus.docs.iter().map(run).collect()
    }
}

fn cmd_segment(args: SegmentArgs) -> Result<(), CliError> {
    let lexicon = load_lexicon(&args.indicators, &args.abbreviations)?;
    let config = build_config(&args)?;
    let corpus = read_input(&args)?;
    let annotated: Vec<String> = segment_documents(&corpus, &lexicon, &config, args.jobs)
        .into_iter()
        .map(|(text, _, _)| text)
        .collect();
    write_output(&args.output, &corpus.reassemble(&annotated))?;
    Ok(())
}

fn cmd_trace(args: SegmentArgs) -> Result<(), CliError> {
    let lexicon = load_lexicon(&args.indicators, &args.abbreviations)?;
    let config = build_config(&args)?;
    let corpus = read_input(&args)?;

    let mut out = String::new();
    for doc in &corpus.docs {
        let tokens =
            resolve_ambiguous_quotes(&tokenize(&doc.source, &TokenizerConfig::default()));
        let (tree, trace) = segment(&tokens, &lexicon, &config);
        out.push_str(&format!("== {}\n", doc.id));
        for event in &trace {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:?}",
                event.pass,
                event.rule,
                event.decision,
                event.trigger.slice(&doc.source),
            ));
            if let Some(evidence) = event.evidence {
                out.push_str(&format!("\tevidence={:?}", evidence.slice(&doc.source)));
            }
            out.push('\n');
        }
        for root in &tree.roots {
            let items = decompose(&tokens, root, &lexicon);
            let line: Vec<String> =
                items.iter().map(|i| i.brace_notation(&doc.source)).collect();
            out.push_str(&format!("sentence: {}\n", line.join(" ")));
        }
        out.push('\n');
    }
    write_output(&args.output, &out)?;
    Ok(())
}

/// Reads an annotated file into per-document (source, tree) pairs.
fn read_annotated(path: &Path) -> Result<Vec<(String, SentenceTree)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut docs = Vec::new();
    for (idx, block) in split_annotated_blocks(&text).iter().enumerate() {
        let parsed = parse_annotated(block)
            .with_context(|| format!("{} document {}", path.display(), idx + 1))?;
        docs.push(parsed);
    }
    Ok(docs)
}

fn align<'a>(
    gold: &'a [(String, SentenceTree)],
    system: &'a [(String, SentenceTree)],
    gold_name: &Path,
    system_name: &Path,
) -> Result<(), CliError> {
    if gold.len() != system.len() {
        return Err(CliError::Alignment(anyhow!(
            "{} has {} documents but {} has {}",
            gold_name.display(),
            gold.len(),
            system_name.display(),
            system.len()
        )));
    }
    for (idx, ((gold_src, _), (sys_src, _))) in gold.iter().zip(system).enumerate() {
        if gold_src != sys_src {
            return Err(CliError::Alignment(anyhow!(
                "document {} differs between {} and {} after tag removal",
                idx + 1,
                gold_name.display(),
                system_name.display()
            )));
        }
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let gold = read_annotated(&args.gold)?;
    let system = read_annotated(&args.system)?;
    align(&gold, &system, &args.gold, &args.system)?;

    let items: Vec<EvalItem> = gold
        .into_iter()
        .zip(system)
        .enumerate()
        .map(|(idx, ((source, gold_tree), (_, system_tree)))| EvalItem {
            id: format!("doc{}", idx + 1),
            source,
            gold: gold_tree,
            system: system_tree,
        })
        .collect();

    let report = score_corpus(&items);
    let mut out = report.render_text();
    out.push('\n');
    out.push_str(&report.render_delimited());
    for item in &items {
        let category = sentree::categorize(&item.gold, &item.system, &item.source);
        out.push_str(&format!(
            "doc\t{}\t{}\t{}\n",
            item.id,
            category.as_str(),
            if item.gold.has_nested() { "inclusion" } else { "-" }
        ));
    }
    write_output(&args.output, &out)?;

    if let Some(path) = &args.worksheet {
        fs::write(path, rupture_worksheet(&items))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn cmd_diff(args: DiffArgs) -> Result<(), CliError> {
    let old = read_annotated(&args.old)?;
    let new = read_annotated(&args.new)?;
    let gold = read_annotated(&args.gold)?;
    align(&gold, &old, &args.gold, &args.old)?;
    align(&gold, &new, &args.gold, &args.new)?;

    let items: Vec<DiffItem> = gold
        .into_iter()
        .zip(old)
        .zip(new)
        .enumerate()
        .map(|(idx, (((source, gold_tree), (_, old_tree)), (_, new_tree)))| DiffItem {
            id: format!("doc{}", idx + 1),
            source,
            old: old_tree,
            new: new_tree,
            gold: gold_tree,
        })
        .collect();

    let report = score_diff_corpus(&items);
    let mut out = report.render_text();
    out.push('\n');
    out.push_str(&report.render_delimited());
    write_output(&args.output, &out)?;
    Ok(())
}

fn cmd_lexicon_check(args: LexiconArgs) -> Result<(), CliError> {
    if args.indicators.is_none() && args.abbreviations.is_none() {
        return Err(anyhow!("lexicon-check needs --indicators and/or --abbreviations").into());
    }
    let lexicon = load_lexicon(&args.indicators, &args.abbreviations)?;
    let mut by_category: std::collections::BTreeMap<&'static str, usize> =
        std::collections::BTreeMap::new();
    for entry in lexicon.entries() {
        *by_category.entry(entry.category.as_str()).or_default() += 1;
    }
    println!("indicators: {}", lexicon.indicator_count());
    for (category, count) in by_category {
        println!("  {category}: {count}");
    }
    println!("abbreviations: {}", lexicon.abbreviation_count());
    Ok(())
}
