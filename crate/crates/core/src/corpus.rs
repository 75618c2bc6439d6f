//! Sentence corpora and candidate-set expectations for regression checks.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::pipeline::CandidateSet;
use crate::stl::{canonicalize, parse_formula, FormulaParseError};

const BUNDLED_CORPUS: &str = include_str!("../data/corpus.tsv");
const BUNDLED_EXPECTATIONS: &str = include_str!("../data/expectations.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub text: String,
}

/// Expected candidate count and canonical formula set for one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub id: String,
    pub count: usize,
    pub formulas: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: expected `id<TAB>sentence`")]
    Malformed { line: usize },
    #[error("line {line}: duplicate id `{id}`")]
    Duplicate { line: usize, id: String },
    #[error("line {line}: expected `id<TAB>count<TAB>formula;formula;...`")]
    MalformedExpectation { line: usize },
    #[error("line {line}: bad formula `{text}`: {source}")]
    Formula { line: usize, text: String, source: FormulaParseError },
}

fn content_lines(source: &str) -> impl Iterator<Item = (usize, &str)> {
    source
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub fn load_corpus(source: &str) -> Result<Vec<Sentence>, CorpusError> {
    let mut out: Vec<Sentence> = Vec::new();
    for (line, text) in content_lines(source) {
        let (id, sentence) = text.split_once('\t').ok_or(CorpusError::Malformed { line })?;
        let id = id.trim();
        if id.is_empty() || sentence.trim().is_empty() {
            return Err(CorpusError::Malformed { line });
        }
        if out.iter().any(|s| s.id == id) {
            return Err(CorpusError::Duplicate { line, id: id.to_string() });
        }
        out.push(Sentence { id: id.to_string(), text: sentence.to_string() });
    }
    Ok(out)
}

/// Formulas are re-canonicalized on load, so hand-written files need not
/// use canonical operand order.
pub fn load_expectations(source: &str) -> Result<Vec<Expectation>, CorpusError> {
    let mut out: Vec<Expectation> = Vec::new();
    for (line, text) in content_lines(source) {
        let fields: Vec<&str> = text.split('\t').collect();
        let [id, count, formulas] = fields[..] else {
            return Err(CorpusError::MalformedExpectation { line });
        };
        let count = count.trim().parse().map_err(|_| CorpusError::MalformedExpectation { line })?;
        let formulas = formulas
            .split(';')
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .map(|f| {
                parse_formula(f)
                    .map(|parsed| canonicalize(&parsed).to_string())
                    .map_err(|source| CorpusError::Formula { line, text: f.to_string(), source })
            })
            .collect::<Result<_, _>>()?;
        let id = id.trim().to_string();
        if out.iter().any(|e| e.id == id) {
            return Err(CorpusError::Duplicate { line, id });
        }
        out.push(Expectation { id, count, formulas });
    }
    Ok(out)
}

/// The twelve representative sentences S1-S12.
pub fn bundled_corpus() -> Vec<Sentence> {
    load_corpus(BUNDLED_CORPUS).expect("bundled corpus is well-formed")
}

pub fn bundled_expectations() -> Vec<Expectation> {
    load_expectations(BUNDLED_EXPECTATIONS).expect("bundled expectations are well-formed")
}

/// How an outcome differs from its expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    Count { expected: usize, found: usize },
    Missing(String),
    Unexpected(String),
    Failed(String),
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::Count { expected, found } => write!(f, "expected {expected} candidates, found {found}"),
            Mismatch::Missing(formula) => write!(f, "missing {formula}"),
            Mismatch::Unexpected(formula) => write!(f, "unexpected {formula}"),
            Mismatch::Failed(message) => write!(f, "translation failed: {message}"),
        }
    }
}

/// Compares a translation outcome with an expectation. An empty formula list
/// in the expectation checks the count only.
pub fn compare<E: fmt::Display>(expected: &Expectation, outcome: &Result<CandidateSet, E>) -> Vec<Mismatch> {
    let set = match outcome {
        Ok(set) => set,
        Err(e) => return vec![Mismatch::Failed(e.to_string())],
    };
    let mut out = Vec::new();
    if set.candidates.len() != expected.count {
        out.push(Mismatch::Count { expected: expected.count, found: set.candidates.len() });
    }
    if !expected.formulas.is_empty() {
        let found: BTreeSet<String> = set.formulas().into_iter().collect();
        out.extend(expected.formulas.difference(&found).cloned().map(Mismatch::Missing));
        out.extend(found.difference(&expected.formulas).cloned().map(Mismatch::Unexpected));
    }
    out
}
