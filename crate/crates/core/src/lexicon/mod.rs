//! CCG categories, lexical entries with weights and semantic templates, and
//! the line-based lexicon file format.
//!
//! ```text
//! # comment
//! @rule <fa|ba|coord|attach> <weight>
//! @modifier <surface tokens>
//! <surface tokens> | <category> | <weight> | <template>
//! ```
//!
//! `@modifier` marks heads whose backward attachments are post-modifiers
//! (`while ...`, trailing `within ...`); the parser charges those a locality
//! penalty. Rules without a `@rule` line weigh 0.

mod category;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use category::{Basic, Category, CategoryParseError, Direction};

use crate::semantics::{parse_term, Term};

/// Combinatory rule names that may carry a weight.
pub const RULE_NAMES: [&str; 4] = ["fa", "ba", "coord", "attach"];

const DEFAULT_SOURCE: &str = include_str!("../../data/default.lex");

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    /// Lowercase tokens, 1 to 3 of them.
    pub surface: Vec<String>,
    pub category: Category,
    /// Log-score contribution.
    pub weight: f64,
    /// Closed lambda term.
    pub template: Term,
}

impl LexEntry {
    pub fn surface_text(&self) -> String {
        self.surface.join(" ")
    }
}

impl fmt::Display for LexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {:?} | {}", self.surface_text(), self.category, self.weight, self.template)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexiconError {
    #[error("empty lexicon")]
    Empty,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Category {
        line: usize,
        #[source]
        source: CategoryParseError,
    },
    #[error("line {line}: {source}")]
    Template {
        line: usize,
        #[source]
        source: crate::semantics::TemplateParseError,
    },
    #[error("line {line}: template has free variables: {vars}")]
    OpenTemplate { line: usize, vars: String },
}

/// An immutable lexicon. Several entries may share a surface form; that is
/// where lexical ambiguity comes from.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<Arc<LexEntry>>,
    by_surface: HashMap<Vec<String>, Vec<usize>>,
    rule_weights: BTreeMap<String, f64>,
    modifiers: BTreeSet<Vec<String>>,
    max_span: usize,
    warnings: Vec<String>,
}

/// Compares content only; load warnings are ignored.
impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
            && self.rule_weights == other.rule_weights
            && self.modifiers == other.modifiers
    }
}

/// A lexicon match at some token position.
#[derive(Debug, Clone)]
pub struct LexMatch {
    pub span: usize,
    /// Position in the lexicon, or `None` for a synthesized numeral.
    pub id: Option<usize>,
    pub entry: Arc<LexEntry>,
}

impl Lexicon {
    pub fn entries(&self) -> &[Arc<LexEntry>] {
        &self.entries
    }

    pub fn rule_weights(&self) -> &BTreeMap<String, f64> {
        &self.rule_weights
    }

    /// Weight of a rule; undeclared rules weigh 0.
    pub fn rule_weight(&self, rule: &str) -> f64 {
        self.rule_weights.get(rule).copied().unwrap_or(0.0)
    }

    pub fn is_modifier(&self, surface: &[String]) -> bool {
        self.modifiers.contains(surface)
    }

    pub fn modifiers(&self) -> impl Iterator<Item = String> + '_ {
        self.modifiers.iter().map(|s| s.join(" "))
    }

    /// Non-fatal findings from loading, such as skipped duplicate entries.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// All entries whose surface starts at `position`, longest spans first.
    /// A token made only of digits also yields a `NUM` leaf carrying its
    /// value.
    pub fn lookup<T: AsRef<str>>(&self, tokens: &[T], position: usize) -> Vec<LexMatch> {
        let mut out = Vec::new();
        let longest = self.max_span.min(tokens.len().saturating_sub(position));
        for span in (1..=longest).rev() {
            let key: Vec<String> =
                tokens[position..position + span].iter().map(|t| t.as_ref().to_string()).collect();
            if let Some(ids) = self.by_surface.get(&key) {
                out.extend(ids.iter().map(|&id| LexMatch {
                    span,
                    id: Some(id),
                    entry: Arc::clone(&self.entries[id]),
                }));
            }
        }
        if let Some(tok) = tokens.get(position) {
            let tok = tok.as_ref();
            if !tok.is_empty() && tok.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(value) = tok.parse::<u32>() {
                    out.push(LexMatch {
                        span: 1,
                        id: None,
                        entry: Arc::new(LexEntry {
                            surface: vec![tok.to_string()],
                            category: Category::NUM,
                            weight: 0.0,
                            template: Term::Int(value),
                        }),
                    });
                }
            }
        }
        out
    }

    fn push(&mut self, entry: LexEntry) -> bool {
        if self.entries.iter().any(|e| **e == entry) {
            return false;
        }
        self.max_span = self.max_span.max(entry.surface.len());
        self.by_surface.entry(entry.surface.clone()).or_default().push(self.entries.len());
        self.entries.push(Arc::new(entry));
        true
    }
}

/// The bundled lexicon covering the navigation corpus vocabulary.
pub fn default_lexicon() -> Lexicon {
    load_lexicon(DEFAULT_SOURCE).expect("bundled lexicon is valid")
}

/// Source text of the bundled lexicon.
pub fn default_lexicon_source() -> &'static str {
    DEFAULT_SOURCE
}

pub fn load_lexicon(source: &str) -> Result<Lexicon, LexiconError> {
    let mut lex = Lexicon {
        entries: Vec::new(),
        by_surface: HashMap::new(),
        rule_weights: BTreeMap::new(),
        modifiers: BTreeSet::new(),
        max_span: 0,
        warnings: Vec::new(),
    };
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let syntax = |message: String| LexiconError::Syntax { line, message };
        if let Some(directive) = text.strip_prefix('@') {
            let mut words = directive.split_whitespace();
            match words.next() {
                Some("rule") => {
                    let (Some(name), Some(weight), None) = (words.next(), words.next(), words.next())
                    else {
                        return Err(syntax("expected `@rule <name> <weight>`".into()));
                    };
                    if !RULE_NAMES.contains(&name) {
                        return Err(syntax(format!("unknown rule `{name}`")));
                    }
                    let weight: f64 =
                        weight.parse().map_err(|_| syntax(format!("bad weight `{weight}`")))?;
                    if lex.rule_weights.insert(name.to_string(), weight).is_some() {
                        lex.warnings.push(format!("line {line}: rule `{name}` weighted twice; last wins"));
                    }
                }
                Some("modifier") => {
                    let surface: Vec<String> = words.map(str::to_lowercase).collect();
                    if surface.is_empty() {
                        return Err(syntax("expected `@modifier <surface>`".into()));
                    }
                    lex.modifiers.insert(surface);
                }
                other => return Err(syntax(format!("unknown directive `@{}`", other.unwrap_or("")))),
            }
            continue;
        }
        let fields: Vec<&str> = text.split('|').map(str::trim).collect();
        let [surface, category, weight, template] = fields[..] else {
            return Err(syntax(format!(
                "expected 4 `|`-separated fields (surface | category | weight | template), found {}",
                fields.len()
            )));
        };
        let surface: Vec<String> = surface.split_whitespace().map(str::to_lowercase).collect();
        if surface.is_empty() || surface.len() > 3 {
            return Err(syntax(format!("surface must have 1 to 3 tokens, found {}", surface.len())));
        }
        let category: Category =
            category.parse().map_err(|source| LexiconError::Category { line, source })?;
        let weight: f64 = weight.parse().map_err(|_| syntax(format!("bad weight `{weight}`")))?;
        if !weight.is_finite() {
            return Err(syntax(format!("weight must be finite, found `{weight}`")));
        }
        let template = parse_term(template).map_err(|source| LexiconError::Template { line, source })?;
        let free = template.free_vars();
        if !free.is_empty() {
            let vars = free.into_iter().collect::<Vec<_>>().join(", ");
            return Err(LexiconError::OpenTemplate { line, vars });
        }
        let entry = LexEntry { surface, category, weight, template };
        let shown = entry.to_string();
        if !lex.push(entry) {
            lex.warnings.push(format!("line {line}: duplicate entry `{shown}` skipped"));
        }
    }
    if lex.entries.is_empty() {
        return Err(LexiconError::Empty);
    }
    Ok(lex)
}

/// Writes a lexicon in the format [`load_lexicon`] reads.
pub fn write_lexicon(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    for (name, weight) in &lexicon.rule_weights {
        out.push_str(&format!("@rule {name} {weight:?}\n"));
    }
    for m in lexicon.modifiers() {
        out.push_str(&format!("@modifier {m}\n"));
    }
    for e in &lexicon.entries {
        out.push_str(&format!("{e}\n"));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// No entry can supply one of this entry's arguments.
    DeadEntry { surface: String, category: Category, missing: Category },
    DefaultedRuleWeight { rule: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DeadEntry { surface, category, missing } => write!(
                f,
                "dead entry `{surface}` ({category}): nothing produces its {missing} argument"
            ),
            Diagnostic::DefaultedRuleWeight { rule } => {
                write!(f, "rule weight for `{rule}` absent; defaulted to 0.0")
            }
        }
    }
}

/// Reports entries that can never combine and rules with no declared weight.
pub fn validate_lexicon(lexicon: &Lexicon) -> Vec<Diagnostic> {
    let mut producible: BTreeSet<&Category> = BTreeSet::new();
    producible.insert(&Category::NUM);
    for e in &lexicon.entries {
        producible.extend(e.category.spine());
    }
    let mut out = Vec::new();
    for e in &lexicon.entries {
        if let Some(missing) = e.category.arguments().into_iter().find(|a| !producible.contains(a)) {
            out.push(Diagnostic::DeadEntry {
                surface: e.surface_text(),
                category: e.category.clone(),
                missing: missing.clone(),
            });
        }
    }
    for rule in RULE_NAMES {
        if !lexicon.rule_weights.contains_key(rule) {
            out.push(Diagnostic::DefaultedRuleWeight { rule: rule.to_string() });
        }
    }
    out
}
