use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ambistl_core::corpus::{self, compare, Expectation, Sentence};
use ambistl_core::pipeline::{analyze, CandidateSummary, Summary};
use ambistl_core::trajectory::{load_regions, load_trajectory, RobustnessRow, RowError};
use ambistl_core::{default_lexicon, evaluate_candidates, load_lexicon, translate, CandidateSet, Lexicon};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::{Cli, Command, Config, Format};

/// Standard output so far, and the failure that ended the command.
pub type Failure = (String, CliError);

pub fn run(cli: &Cli) -> Result<String, Failure> {
    let bare = |e: CliError| (String::new(), e);
    let config = &cli.config;
    let lexicon = lexicon(config).map_err(bare)?;
    match &cli.command {
        Command::Translate { sentence } => cmd_translate(sentence, &lexicon, config).map_err(bare),
        Command::Corpus { corpus, expect } => cmd_corpus(corpus.as_deref(), expect.as_deref(), &lexicon, config),
        Command::Eval { sentence, trajectory, regions } => {
            cmd_eval(sentence, trajectory, regions, &lexicon, config).map_err(bare)
        }
        Command::Explain { sentence } => cmd_explain(sentence, &lexicon, config).map_err(bare),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn lexicon(config: &Config) -> Result<Lexicon, CliError> {
    let lexicon = match &config.lexicon {
        Some(path) => load_lexicon(&read(path)?).map_err(|e| CliError::from((path.clone(), e)))?,
        None => default_lexicon(),
    };
    if config.verbose > 0 {
        for w in lexicon.warnings() {
            eprintln!("lexicon: {w}");
        }
    }
    Ok(lexicon)
}

fn checked_sentence(sentence: &str) -> Result<&str, CliError> {
    if sentence.trim().is_empty() {
        return Err(CliError::Usage("SENTENCE must not be empty".into()));
    }
    Ok(sentence)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

fn report_counts(set: &CandidateSet, config: &Config) {
    if config.verbose > 0 {
        eprintln!(
            "{} derivations, {} ill-formed, {} candidates",
            set.n_derivations,
            set.discarded_count,
            set.candidates.len()
        );
    }
}

fn cmd_translate(sentence: &str, lexicon: &Lexicon, config: &Config) -> Result<String, CliError> {
    let set = translate(checked_sentence(sentence)?, lexicon, config.n_best)?;
    report_counts(&set, config);
    Ok(match config.format {
        Format::Json => json(&set.summary()),
        Format::Text => {
            let mut out = String::new();
            for (k, c) in set.candidates.iter().enumerate() {
                let _ = writeln!(out, "{}  {:.6}  {}", k + 1, c.probability, c.formula);
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CorpusEntry {
    id: String,
    #[serde(flatten)]
    summary: Option<Summary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_corpus(
    corpus_path: Option<&Path>,
    expect_path: Option<&Path>,
    lexicon: &Lexicon,
    config: &Config,
) -> Result<String, Failure> {
    let bare = |e: CliError| (String::new(), e);
    let sentences: Vec<Sentence> = match corpus_path {
        Some(p) => corpus::load_corpus(&read(p).map_err(bare)?).map_err(|e| bare((p.to_path_buf(), e).into()))?,
        None => corpus::bundled_corpus(),
    };
    let expectations: Option<Vec<Expectation>> = match (expect_path, corpus_path) {
        (Some(p), _) => Some(
            corpus::load_expectations(&read(p).map_err(bare)?).map_err(|e| bare((p.to_path_buf(), e).into()))?,
        ),
        (None, None) => Some(corpus::bundled_expectations()),
        (None, Some(_)) => None,
    };

    let outcomes: Vec<_> = sentences.par_iter().map(|s| translate(&s.text, lexicon, config.n_best)).collect();

    let mut out = String::new();
    match config.format {
        Format::Json => {
            let entries: Vec<CorpusEntry> = sentences
                .iter()
                .zip(&outcomes)
                .map(|(s, o)| CorpusEntry {
                    id: s.id.clone(),
                    summary: o.as_ref().ok().map(CandidateSet::summary),
                    error: o.as_ref().err().map(ToString::to_string),
                })
                .collect();
            out = json(&entries);
        }
        Format::Text => {
            let width = sentences.iter().map(|s| s.id.len()).max().unwrap_or(0);
            for (s, o) in sentences.iter().zip(&outcomes) {
                let _ = match o {
                    Ok(set) => writeln!(
                        out,
                        "{:width$}  {}  {}",
                        s.id,
                        set.candidates.len(),
                        set.candidates[0].formula
                    ),
                    Err(e) => writeln!(out, "{:width$}  -  error: {e}", s.id),
                };
            }
        }
    }

    let Some(expectations) = expectations else {
        return Ok(out);
    };
    let mut offending = Vec::new();
    for (s, o) in sentences.iter().zip(&outcomes) {
        let problems = match expectations.iter().find(|e| e.id == s.id) {
            Some(e) => compare(e, o).into_iter().map(|m| m.to_string()).collect(),
            None => vec!["no expectation for this id".to_string()],
        };
        for p in &problems {
            eprintln!("{}: {p}", s.id);
        }
        if !problems.is_empty() {
            offending.push(s.id.clone());
        }
    }
    for e in &expectations {
        if !sentences.iter().any(|s| s.id == e.id) {
            eprintln!("{}: expected but missing from the corpus", e.id);
            offending.push(e.id.clone());
        }
    }
    if offending.is_empty() {
        if config.verbose > 0 {
            eprintln!("all {} sentences match their expectations", sentences.len());
        }
        Ok(out)
    } else {
        Err((out, CliError::Mismatch { ids: offending }))
    }
}

#[derive(Serialize)]
struct EvalCandidate {
    #[serde(flatten)]
    candidate: CandidateSummary,
    robustness: Option<f64>,
    satisfied: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<RowError>,
}

#[derive(Serialize)]
struct EvalReport {
    sentence: String,
    n_derivations: usize,
    n_discarded: usize,
    candidates: Vec<EvalCandidate>,
}

fn row_status(row: &RobustnessRow) -> String {
    match (&row.satisfied, &row.error) {
        (Some(true), _) => "satisfied".into(),
        (Some(false), _) => "violated".into(),
        (None, Some(e)) => e.to_string(),
        (None, None) => "-".into(),
    }
}

fn cmd_eval(
    sentence: &str,
    trajectory: &Path,
    regions: &Path,
    lexicon: &Lexicon,
    config: &Config,
) -> Result<String, CliError> {
    let sentence = checked_sentence(sentence)?;
    let x = load_trajectory(&read(trajectory)?).map_err(|e| CliError::from((trajectory.to_path_buf(), e)))?;
    let regions_map = load_regions(&read(regions)?).map_err(|e| CliError::from((regions.to_path_buf(), e)))?;
    let set = translate(sentence, lexicon, config.n_best)?;
    report_counts(&set, config);
    let report = evaluate_candidates(&set, &x, &regions_map);
    if let Some(atom) = report.unknown_atoms().first() {
        return Err(CliError::UnknownAtom(atom.to_string()));
    }
    Ok(match config.format {
        Format::Json => {
            let summary = set.summary();
            json(&EvalReport {
                sentence: summary.sentence,
                n_derivations: summary.n_derivations,
                n_discarded: summary.n_discarded,
                candidates: summary
                    .candidates
                    .into_iter()
                    .zip(report.rows)
                    .map(|(candidate, row)| EvalCandidate {
                        candidate,
                        robustness: row.robustness,
                        satisfied: row.satisfied,
                        error: row.error,
                    })
                    .collect(),
            })
        }
        Format::Text => {
            let mut out = String::new();
            for (k, row) in report.rows.iter().enumerate() {
                let value = row.robustness.map_or_else(|| "-".to_string(), |r| format!("{r:+.6}"));
                let _ = writeln!(
                    out,
                    "{}  {:.6}  {:>10}  {}  {}",
                    k + 1,
                    row.probability,
                    value,
                    row_status(row),
                    row.formula
                );
            }
            out
        }
    })
}

#[derive(Serialize)]
struct ExplainDerivation {
    rank: usize,
    score: f64,
    tree: String,
    meaning: String,
    formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct ExplainGroup {
    formula: Option<String>,
    probability: Option<f64>,
    derivations: Vec<ExplainDerivation>,
}

fn cmd_explain(sentence: &str, lexicon: &Lexicon, config: &Config) -> Result<String, CliError> {
    let analysis = analyze(checked_sentence(sentence)?, lexicon, config.n_best)?;
    let set = analysis.candidate_set()?;
    report_counts(&set, config);
    let describe = |k: usize| {
        let a = &analysis.derivations[k];
        ExplainDerivation {
            rank: k + 1,
            score: a.derivation.score,
            tree: a.derivation.tree.pretty(),
            meaning: match &a.meaning {
                Ok(m) => m.to_string(),
                Err(e) => e.to_string(),
            },
            formula: a.formula.as_ref().ok().map(ToString::to_string),
            reason: a.formula.as_ref().err().map(ToString::to_string),
        }
    };
    let mut groups: Vec<ExplainGroup> = set
        .candidates
        .iter()
        .map(|c| ExplainGroup {
            formula: Some(c.formula.to_string()),
            probability: Some(c.probability),
            derivations: c.derivation_ids.iter().map(|&k| describe(k)).collect(),
        })
        .collect();
    let ill_formed: Vec<usize> = (0..analysis.derivations.len())
        .filter(|&k| analysis.derivations[k].formula.is_err())
        .collect();
    let show_ill_formed = config.verbose > 0 || config.format == Format::Json;
    if show_ill_formed && !ill_formed.is_empty() {
        groups.push(ExplainGroup {
            formula: None,
            probability: None,
            derivations: ill_formed.iter().map(|&k| describe(k)).collect(),
        });
    }
    if config.format == Format::Json {
        return Ok(json(&groups));
    }

    let mut out = String::new();
    for (g, group) in groups.iter().enumerate() {
        if g > 0 {
            out.push('\n');
        }
        match (&group.formula, group.probability) {
            (Some(f), Some(p)) => {
                let _ = writeln!(out, "candidate {}  p={p:.6}  {f}", g + 1);
            }
            _ => {
                let _ = writeln!(out, "ill-formed");
            }
        }
        for d in &group.derivations {
            let _ = writeln!(out, "  derivation #{}  score {:.4}", d.rank, d.score);
            for line in d.tree.lines() {
                let _ = writeln!(out, "    {line}");
            }
            let _ = writeln!(out, "    meaning: {}", d.meaning);
            let _ = match (&d.formula, &d.reason) {
                (Some(f), _) => writeln!(out, "    formula: {f}"),
                (None, Some(r)) => writeln!(out, "    formula: ill-formed ({r})"),
                (None, None) => writeln!(out, "    formula: ill-formed"),
            };
        }
    }
    if !show_ill_formed && !ill_formed.is_empty() {
        let _ = writeln!(out, "\n({} ill-formed derivations hidden; use -v to show)", ill_formed.len());
    }
    Ok(out)
}
