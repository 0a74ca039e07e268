use std::fs;
use std::path::{Path, PathBuf};

use assert_cmd::Command;

fn repo_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn sentree() -> Command {
    Command::cargo_bin("sentree").expect("binary builds")
}

#[test]
fn segment_reproduces_golden_paper2024_file() {
    let expected = fs::read_to_string(repo_path("corpus/citations.paper2024.seg")).unwrap();
    let assert = sentree()
        .args(["segment", "--known-divergences", "paper2024"])
        .arg(repo_path("corpus/citations.txt"))
        .assert()
        .success();
    assert_eq!(String::from_utf8_lossy(&assert.get_output().stdout), expected);
}

#[test]
fn segment_reproduces_golden_expected_file() {
    let expected = fs::read_to_string(repo_path("corpus/citations.expected.seg")).unwrap();
    let assert = sentree()
        .args(["segment"])
        .arg(repo_path("corpus/citations.txt"))
        .assert()
        .success();
    assert_eq!(String::from_utf8_lossy(&assert.get_output().stdout), expected);
}

#[test]
fn segment_is_reproducible_bit_exact() {
    let run = || {
        let assert = sentree()
            .args(["segment", "--jobs", "4"])
            .arg(repo_path("corpus/citations.txt"))
            .assert()
            .success();
        assert.get_output().stdout.clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn segment_empty_input_empty_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "").unwrap();
    sentree().arg("segment").arg(&input).assert().success().stdout("");
}

#[test]
fn segment_missing_lexicon_exits_2() {
    let assert = sentree()
        .args(["segment", "--indicators", "/nonexistent/indicators.tsv"])
        .arg(repo_path("corpus/citations.txt"))
        .assert()
        .failure()
        .code(2);
    let stderr = String::from_utf8_lossy(&assert.get_output().stderr);
    assert!(stderr.contains("/nonexistent/indicators.tsv"), "stderr: {stderr}");
}

#[test]
fn segment_missing_input_exits_2() {
    sentree().args(["segment", "/nonexistent/corpus.txt"]).assert().failure().code(2);
}

#[test]
fn eval_reports_categories() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    fs::write(&gold, "<s>Va bien.</s>\n\n<s>Oui.</s> <s>Non.</s>\n").unwrap();
    fs::write(&system, "<s>Va bien.</s>\n\n<s>Oui. Non.</s>\n").unwrap();

    let assert = sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("errors\t1"), "{stdout}");
    assert!(stdout.contains("correct-plain\t1"), "{stdout}");
    assert!(stdout.contains("doc\tdoc2\terror"), "{stdout}");
}

#[test]
fn eval_alignment_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    fs::write(&gold, "<s>Un.</s>\n\n<s>Deux.</s>\n").unwrap();
    fs::write(&system, "<s>Un.</s>\n").unwrap();
    sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .failure()
        .code(3);
}

#[test]
fn eval_source_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    fs::write(&gold, "<s>Un.</s>\n").unwrap();
    fs::write(&system, "<s>Deux.</s>\n").unwrap();
    sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .failure()
        .code(3);
}

#[test]
fn eval_writes_worksheet() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    let sheet = dir.path().join("worksheet.tsv");
    // One error, one inclusion: two worksheet rows plus the header.
    fs::write(&gold, "<s>Oui.</s> <s>Non.</s>\n\n<s>Il dit : « <s>Va.</s> »</s>\n").unwrap();
    fs::write(&system, "<s>Oui. Non.</s>\n\n<s>Il dit : « <s>Va.</s> »</s>\n").unwrap();
    sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .arg("--worksheet")
        .arg(&sheet)
        .assert()
        .success();
    let sheet = fs::read_to_string(&sheet).unwrap();
    assert_eq!(sheet.lines().count(), 3, "{sheet}");
}

#[test]
fn diff_categorizes_documents() {
    let dir = tempfile::tempdir().unwrap();
    let old = dir.path().join("old.seg");
    let new = dir.path().join("new.seg");
    let gold = dir.path().join("gold.seg");
    // doc1: unchanged and correct. doc2: the new version breaks it.
    fs::write(&gold, "<s>Un. Deux.</s>\n\n<s>Trois. Quatre.</s>\n").unwrap();
    fs::write(&old, "<s>Un. Deux.</s>\n\n<s>Trois. Quatre.</s>\n").unwrap();
    fs::write(&new, "<s>Un. Deux.</s>\n\n<s>Trois.</s> <s>Quatre.</s>\n").unwrap();

    let assert = sentree()
        .arg("diff")
        .arg("--old")
        .arg(&old)
        .arg("--new")
        .arg(&new)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("unchanged\t1"), "{stdout}");
    assert!(stdout.contains("new-problem\t1"), "{stdout}");
    assert!(stdout.contains("doc\tdoc2\tnew-problem"), "{stdout}");
}

#[test]
fn trace_shows_colon_rule_and_decomposition() {
    let citations = fs::read_to_string(repo_path("corpus/citations.txt")).unwrap();
    let shout = citations.split("\n\n").nth(1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("doc.txt");
    fs::write(&input, shout).unwrap();

    let assert = sentree().arg("trace").arg(&input).assert().success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("colon:2-indicator"), "{stdout}");
    assert!(stdout.contains("evidence=\"criant\""), "{stdout}");
    assert!(stdout.contains("colon:1-open-quote"), "{stdout}");
    assert!(stdout.contains("{criant,.Indicateur}"), "{stdout}");
    assert!(stdout.contains(
        "{Quand à Vincennes une poignée de femmes a levé l'étendard de la révolte,.Segment}"
    ));
}

#[test]
fn trace_single_terminator_event() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("doc.txt");
    fs::write(&input, "Bonjour.").unwrap();
    let assert = sentree().arg("trace").arg(&input).assert().success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    let terminator_events =
        stdout.lines().filter(|l| l.starts_with("terminators\t")).count();
    assert_eq!(terminator_events, 1, "{stdout}");
}

#[test]
fn trace_truncated_incise_is_inline() {
    let citations = fs::read_to_string(repo_path("corpus/citations.txt")).unwrap();
    let truncated = citations.split("\n\n").nth(4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("doc.txt");
    fs::write(&input, truncated).unwrap();

    let assert = sentree().arg("trace").arg(&input).assert().success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("inline-delimiter"), "{stdout}");
}

#[test]
fn segment_xml_corpus_preserves_container() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.xml");
    fs::write(
        &input,
        "<corpus>\n<citation>Oui. Non.</citation>\n<citation>Très bien.</citation>\n</corpus>\n",
    )
    .unwrap();
    let assert = sentree().arg("segment").arg(&input).assert().success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert_eq!(
        stdout,
        "<corpus>\n<citation><s>Oui.</s> <s>Non.</s></citation>\n<citation><s>Très bien.</s></citation>\n</corpus>\n"
    );
}

#[test]
fn config_file_sets_mode_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sentree.conf");
    fs::write(&config, "known_divergences=paper2024\nnest_quotes=true\n").unwrap();

    let expected = fs::read_to_string(repo_path("corpus/citations.paper2024.seg")).unwrap();
    let assert = sentree()
        .arg("segment")
        .arg("--config")
        .arg(&config)
        .arg(repo_path("corpus/citations.txt"))
        .assert()
        .success();
    assert_eq!(String::from_utf8_lossy(&assert.get_output().stdout), expected);

    // A flag overrides the file.
    let golden_expected =
        fs::read_to_string(repo_path("corpus/citations.expected.seg")).unwrap();
    let assert = sentree()
        .arg("segment")
        .arg("--config")
        .arg(&config)
        .args(["--known-divergences", "expected"])
        .arg(repo_path("corpus/citations.txt"))
        .assert()
        .success();
    assert_eq!(String::from_utf8_lossy(&assert.get_output().stdout), golden_expected);
}

#[test]
fn lexicon_check_reports_counts() {
    let assert = sentree()
        .arg("lexicon-check")
        .arg("--indicators")
        .arg(repo_path("crates/core/data/indicators.tsv"))
        .arg("--abbreviations")
        .arg(repo_path("crates/core/data/abbreviations.txt"))
        .assert()
        .success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("indicators:"), "{stdout}");
    assert!(stdout.contains("Presentative: 3"), "{stdout}");
}

#[test]
fn lexicon_check_bad_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, "pasdetab\n").unwrap();
    sentree()
        .arg("lexicon-check")
        .arg("--indicators")
        .arg(&bad)
        .assert()
        .failure()
        .code(2);
}

#[test]
fn eval_all_correct_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    let annotated = "<s>Va bien.</s>\n\n<s>Oui.</s> <s>Non.</s>\n";
    fs::write(&gold, annotated).unwrap();
    fs::write(&system, annotated).unwrap();
    let assert = sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("total-correct\t2\t100.0"), "{stdout}");
    assert!(stdout.contains("f1 1.0000"), "{stdout}");
}

#[test]
fn eval_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.seg");
    let system = dir.path().join("system.seg");
    fs::write(&gold, "").unwrap();
    fs::write(&system, "").unwrap();
    let assert = sentree()
        .arg("eval")
        .arg(&system)
        .arg("--gold")
        .arg(&gold)
        .assert()
        .success();
    let stdout = String::from_utf8_lossy(&assert.get_output().stdout);
    assert!(stdout.contains("empty corpus"), "{stdout}");
}
