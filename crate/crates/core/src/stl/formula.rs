use std::fmt;

use thiserror::Error;

/// A closed discrete-time interval `[lo, hi]` of time steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: u32,
    hi: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("interval lower bound {lo} exceeds upper bound {hi}")]
pub struct IntervalError {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn new(lo: u32, hi: u32) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// `[0, hi]`, the shape every "within N seconds" phrase produces.
    pub fn upto(hi: u32) -> Self {
        Interval { lo: 0, hi }
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// An STL formula.
///
/// `And` and `Or` are n-ary. The smart constructors ([`Formula::and`],
/// [`Formula::or`]) never build a connective with fewer than two children;
/// [`canonicalize`](super::canonicalize) restores that invariant for trees
/// built by hand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    Atom(String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Self {
        Formula::Not(Box::new(inner))
    }

    pub fn and(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::True,
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    pub fn or(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::not(Formula::True),
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn eventually(interval: Interval, inner: Formula) -> Self {
        Formula::Eventually(interval, Box::new(inner))
    }

    pub fn always(interval: Interval, inner: Formula) -> Self {
        Formula::Always(interval, Box::new(inner))
    }

    pub fn until(interval: Interval, left: Formula, right: Formula) -> Self {
        Formula::Until(interval, Box::new(left), Box::new(right))
    }

    /// Direct children in left-to-right order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::Atom(_) => vec![],
            Formula::Not(c) | Formula::Eventually(_, c) | Formula::Always(_, c) => vec![c],
            Formula::And(cs) | Formula::Or(cs) => cs.iter().collect(),
            Formula::Until(_, l, r) => vec![l, r],
        }
    }

    /// Names of every atom mentioned, in first-occurrence order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Formula::Atom(name) = self {
            if !out.contains(&name.as_str()) {
                out.push(name);
            }
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

/// Temporal horizon: how many steps past the evaluation time the formula
/// can look.
pub fn extent(formula: &Formula) -> u32 {
    match formula {
        Formula::True | Formula::Atom(_) => 0,
        Formula::Not(c) => extent(c),
        Formula::And(cs) | Formula::Or(cs) => cs.iter().map(extent).max().unwrap_or(0),
        Formula::Eventually(i, c) | Formula::Always(i, c) => i.hi().saturating_add(extent(c)),
        Formula::Until(i, l, r) => i.hi().saturating_add(extent(l).max(extent(r))),
    }
}

fn write_prefixed(f: &mut fmt::Formatter<'_>, head: &str, child: &Formula) -> fmt::Result {
    let body = child.to_string();
    if body.starts_with('(') {
        write!(f, "{head}{body}")
    } else {
        write!(f, "{head} {body}")
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, children: &[Formula], sep: &str) -> fmt::Result {
    f.write_str("(")?;
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

/// The canonical text rendering. It is bit-exact: candidates are ordered and
/// deduplicated by this string.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Atom(name) => write!(f, "phi_{name}"),
            Formula::Not(c) => write!(f, "!{c}"),
            Formula::And(cs) => write_joined(f, cs, " & "),
            Formula::Or(cs) => write_joined(f, cs, " | "),
            Formula::Eventually(i, c) => write_prefixed(f, &format!("F{i}"), c),
            Formula::Always(i, c) => write_prefixed(f, &format!("G{i}"), c),
            Formula::Until(i, l, r) => write!(f, "U{i}({l}, {r})"),
        }
    }
}
