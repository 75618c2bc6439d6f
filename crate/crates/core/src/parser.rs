//! Tokenization and exhaustive CKY parsing with n-best derivation extraction.
//!
//! Only forward and backward application are used; coordination is lexical
//! via `(X\X)/X` categories. Every complete derivation is enumerated, scored,
//! and the top `n` are kept, so attachment ambiguity reaches semantics
//! intact. Spurious ambiguity is not pruned here; the pipeline merges
//! derivations with identical formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lexicon::{Category, LexEntry, Lexicon};

/// Penalty per extra task constituent inside a post-modifier's attachment
/// site.
pub const LOCALITY_PENALTY: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: usize,
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty sentence")]
    EmptySentence,
    #[error("no lexical entry covers token `{token}` at position {position}")]
    Coverage { token: String, position: usize },
    #[error("no complete parse: the chart has no S over all {tokens} tokens")]
    NoParse { tokens: usize },
    #[error("n-best size must be at least 1")]
    ZeroN,
}

/// Lowercases, drops commas and a terminal period, and splits on whitespace.
pub fn tokenize(sentence: &str) -> Result<Vec<Token>, ParseError> {
    let lowered = sentence.trim().to_lowercase();
    let body = lowered.strip_suffix('.').unwrap_or(&lowered).replace(',', " ");
    let tokens: Vec<Token> = body
        .split_whitespace()
        .enumerate()
        .map(|(position, text)| Token { text: text.to_string(), position })
        .collect();
    if tokens.is_empty() {
        return Err(ParseError::EmptySentence);
    }
    Ok(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// Forward application `X/Y  Y => X`.
    Forward,
    /// Backward application `Y  X\Y => X` with no special head.
    Backward,
    /// Backward application whose functor is headed by a coordinator.
    Coordination,
    /// Backward application whose functor is headed by a post-modifier.
    Attachment,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Forward => "fa",
            Rule::Backward => "ba",
            Rule::Coordination => "coord",
            Rule::Attachment => "attach",
        }
    }

    pub fn is_forward(&self) -> bool {
        matches!(self, Rule::Forward)
    }
}

/// A binary-branching CCG parse tree over lexical leaves. Spans are
/// half-open token ranges.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseTree {
    Leaf {
        entry: Arc<LexEntry>,
        /// Lexicon position; `None` for numerals.
        id: Option<usize>,
        start: usize,
        end: usize,
    },
    Node {
        rule: Rule,
        category: Category,
        left: Arc<ParseTree>,
        right: Arc<ParseTree>,
        start: usize,
        end: usize,
    },
}

impl ParseTree {
    pub fn category(&self) -> &Category {
        match self {
            ParseTree::Leaf { entry, .. } => &entry.category,
            ParseTree::Node { category, .. } => category,
        }
    }

    pub fn span(&self) -> (usize, usize) {
        match self {
            ParseTree::Leaf { start, end, .. } | ParseTree::Node { start, end, .. } => (*start, *end),
        }
    }

    /// The lexical head: the leaf at the end of the functor path.
    pub fn head(&self) -> &Arc<LexEntry> {
        match self {
            ParseTree::Leaf { entry, .. } => entry,
            ParseTree::Node { rule, left, right, .. } => {
                if rule.is_forward() {
                    left.head()
                } else {
                    right.head()
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<&Arc<LexEntry>> {
        match self {
            ParseTree::Leaf { entry, .. } => vec![entry],
            ParseTree::Node { left, right, .. } => {
                let mut out = left.leaves();
                out.extend(right.leaves());
                out
            }
        }
    }

    /// Number of task predicates (`S/NP` leaves) inside this subtree.
    pub fn task_count(&self) -> usize {
        let task = Category::forward(Category::S, Category::NP);
        self.leaves().iter().filter(|e| e.category == task).count()
    }

    /// Indented rendering with category labels, one node per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.pretty_into(0, &mut out);
        out
    }

    fn pretty_into(&self, depth: usize, out: &mut String) {
        let indent = "  ".repeat(depth);
        match self {
            ParseTree::Leaf { entry, .. } => {
                out.push_str(&format!("{indent}{}  \"{}\"\n", entry.category, entry.surface_text()));
            }
            ParseTree::Node { rule, category, left, right, .. } => {
                out.push_str(&format!("{indent}{category}  <{}>\n", rule.name()));
                left.pretty_into(depth + 1, out);
                right.pretty_into(depth + 1, out);
            }
        }
    }
}

/// Bracketed one-line rendering, used as the deterministic tie-breaker.
impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseTree::Leaf { entry, id, .. } => match id {
                Some(id) => write!(f, "{}#{id}", entry.surface.join("_")),
                None => write!(f, "{}", entry.surface_text()),
            },
            ParseTree::Node { rule, category, left, right, .. } => {
                write!(f, "({}:{category} {left} {right})", rule.name())
            }
        }
    }
}

/// A scored parse of a whole sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation {
    pub tree: Arc<ParseTree>,
    pub score: f64,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tree.fmt(f)
    }
}

/// Log-score of a tree: leaf weights, plus the weight of each rule used,
/// minus [`LOCALITY_PENALTY`] for every task constituent a post-modifier's
/// attachment site holds beyond the nearest one.
pub fn score(tree: &ParseTree, lexicon: &Lexicon) -> f64 {
    match tree {
        ParseTree::Leaf { entry, .. } => entry.weight,
        ParseTree::Node { rule, left, right, .. } => {
            let mut s = score(left, lexicon) + score(right, lexicon) + lexicon.rule_weight(rule.name());
            if *rule == Rule::Attachment {
                let skipped = left.task_count().saturating_sub(1);
                s -= LOCALITY_PENALTY * skipped as f64;
            }
            s
        }
    }
}

#[derive(Debug, Clone)]
enum Back {
    Lex { entry: Arc<LexEntry>, id: Option<usize> },
    /// Left part `[start, split)` with category `left`, right part with `right`.
    Bin { split: usize, left: Category, right: Category, forward: bool },
}

type Cell = BTreeMap<Category, Vec<Back>>;

struct Chart {
    /// `cells[start][len - 1]` covers `start..start + len`.
    cells: Vec<Vec<Cell>>,
}

impl Chart {
    fn cell(&self, start: usize, end: usize) -> &Cell {
        &self.cells[start][end - start - 1]
    }

    fn cell_mut(&mut self, start: usize, end: usize) -> &mut Cell {
        &mut self.cells[start][end - start - 1]
    }
}

fn build_chart(tokens: &[Token], lexicon: &Lexicon) -> Result<Chart, ParseError> {
    let n = tokens.len();
    let mut chart = Chart { cells: (0..n).map(|s| vec![Cell::new(); n - s]).collect() };
    let mut covered = vec![false; n];
    for start in 0..n {
        for m in lexicon.lookup(tokens, start) {
            covered[start..start + m.span].iter_mut().for_each(|c| *c = true);
            chart
                .cell_mut(start, start + m.span)
                .entry(m.entry.category.clone())
                .or_default()
                .push(Back::Lex { entry: m.entry, id: m.id });
        }
    }
    if let Some(position) = covered.iter().position(|c| !c) {
        return Err(ParseError::Coverage { token: tokens[position].text.clone(), position });
    }
    for len in 2..=n {
        for start in 0..=n - len {
            let end = start + len;
            let mut found: Vec<(Category, Back)> = Vec::new();
            for split in start + 1..end {
                for lcat in chart.cell(start, split).keys() {
                    for rcat in chart.cell(split, end).keys() {
                        let bin = |forward| Back::Bin {
                            split,
                            left: lcat.clone(),
                            right: rcat.clone(),
                            forward,
                        };
                        if let Some(c) = lcat.apply_forward(rcat) {
                            found.push((c, bin(true)));
                        }
                        if let Some(c) = rcat.apply_backward(lcat) {
                            found.push((c, bin(false)));
                        }
                    }
                }
            }
            let cell = chart.cell_mut(start, end);
            for (cat, back) in found {
                cell.entry(cat).or_default().push(back);
            }
        }
    }
    Ok(chart)
}

/// Every tree for one chart cell and category.
type Trees = Arc<Vec<Arc<ParseTree>>>;

struct Enumerator<'a> {
    chart: &'a Chart,
    lexicon: &'a Lexicon,
    memo: HashMap<(usize, usize, Category), Trees>,
}

impl Enumerator<'_> {
    fn trees(&mut self, start: usize, end: usize, cat: &Category) -> Trees {
        let key = (start, end, cat.clone());
        if let Some(done) = self.memo.get(&key) {
            return Arc::clone(done);
        }
        let backs = self.chart.cell(start, end).get(cat).cloned().unwrap_or_default();
        let mut out = Vec::new();
        for back in backs {
            match back {
                Back::Lex { entry, id } => out.push(Arc::new(ParseTree::Leaf { entry, id, start, end })),
                Back::Bin { split, left, right, forward } => {
                    let lefts = self.trees(start, split, &left);
                    let rights = self.trees(split, end, &right);
                    for l in lefts.iter() {
                        for r in rights.iter() {
                            let rule = if forward { Rule::Forward } else { self.backward_rule(r) };
                            out.push(Arc::new(ParseTree::Node {
                                rule,
                                category: cat.clone(),
                                left: Arc::clone(l),
                                right: Arc::clone(r),
                                start,
                                end,
                            }));
                        }
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.memo.insert(key, Arc::clone(&out));
        out
    }

    fn backward_rule(&self, functor: &ParseTree) -> Rule {
        let head = functor.head();
        if self.lexicon.is_modifier(&head.surface) {
            Rule::Attachment
        } else if head.category.is_coordinator() {
            Rule::Coordination
        } else {
            Rule::Backward
        }
    }
}

/// Every complete derivation, best first, truncated to `n`.
///
/// Ties in score are broken by the bracketed rendering, so the order is
/// fully deterministic.
pub fn parse_nbest(tokens: &[Token], lexicon: &Lexicon, n: usize) -> Result<Vec<Derivation>, ParseError> {
    let mut all = parse_all(tokens, lexicon)?;
    if n == 0 {
        return Err(ParseError::ZeroN);
    }
    all.truncate(n);
    Ok(all)
}

/// Every complete derivation, best first.
pub fn parse_all(tokens: &[Token], lexicon: &Lexicon) -> Result<Vec<Derivation>, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::EmptySentence);
    }
    let chart = build_chart(tokens, lexicon)?;
    let mut en = Enumerator { chart: &chart, lexicon, memo: HashMap::new() };
    let roots = en.trees(0, tokens.len(), &Category::S);
    if roots.is_empty() {
        return Err(ParseError::NoParse { tokens: tokens.len() });
    }
    let mut scored: Vec<(f64, String, Arc<ParseTree>)> = roots
        .iter()
        .map(|t| (score(t, lexicon), t.to_string(), Arc::clone(t)))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    Ok(scored.into_iter().map(|(score, _, tree)| Derivation { tree, score }).collect())
}
