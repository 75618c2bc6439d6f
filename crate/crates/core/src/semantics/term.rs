use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Lambda terms over STL-oriented constructors.
///
/// Intervals are built with `Interval(lo, hi)` over integer terms so a
/// template can bind the bound of a numeral (`lam n. ... I(0, n)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Atom(String),
    Int(u32),
    Interval(Box<Term>, Box<Term>),
    Eventually(Box<Term>, Box<Term>),
    Always(Box<Term>, Box<Term>),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    /// Sequential composition, resolved during STL conversion.
    Seq(Box<Term>, Box<Term>),
    /// Guard whose interval is `[0, extent(anchor)]`, resolved during STL
    /// conversion: `ExtG(guard, anchor)`.
    ExtG(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lam(name.to_string(), Box::new(body))
    }

    pub fn app(f: Term, arg: Term) -> Term {
        Term::App(Box::new(f), Box::new(arg))
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(name.to_string())
    }

    pub fn interval(lo: u32, hi: u32) -> Term {
        Term::Interval(Box::new(Term::Int(lo)), Box::new(Term::Int(hi)))
    }

    /// Constructor name and arguments, for the nodes that have them.
    pub(crate) fn constructor(&self) -> Option<(&'static str, Vec<&Term>)> {
        Some(match self {
            Term::Interval(a, b) => ("I", vec![a, b]),
            Term::Eventually(a, b) => ("F", vec![a, b]),
            Term::Always(a, b) => ("G", vec![a, b]),
            Term::Not(a) => ("NOT", vec![a]),
            Term::And(a, b) => ("AND", vec![a, b]),
            Term::Or(a, b) => ("OR", vec![a, b]),
            Term::Seq(a, b) => ("SEQ", vec![a, b]),
            Term::ExtG(a, b) => ("EXTG", vec![a, b]),
            _ => return None,
        })
    }

    /// Rebuilds a constructor node from its name and arguments.
    pub(crate) fn build(name: &str, mut args: Vec<Term>) -> Option<Term> {
        let arity = match name {
            "NOT" => 1,
            "I" | "F" | "G" | "AND" | "OR" | "SEQ" | "EXTG" => 2,
            _ => return None,
        };
        if args.len() != arity {
            return None;
        }
        let b = args.pop().map(Box::new);
        if arity == 1 {
            return Some(Term::Not(b.unwrap()));
        }
        let a = Box::new(args.pop().unwrap());
        let b = b.unwrap();
        Some(match name {
            "I" => Term::Interval(a, b),
            "F" => Term::Eventually(a, b),
            "G" => Term::Always(a, b),
            "AND" => Term::And(a, b),
            "OR" => Term::Or(a, b),
            "SEQ" => Term::Seq(a, b),
            "EXTG" => Term::ExtG(a, b),
            _ => unreachable!(),
        })
    }

    pub(crate) fn map_children(&self, mut f: impl FnMut(&Term) -> Term) -> Term {
        match self {
            Term::Var(_) | Term::Atom(_) | Term::Int(_) => self.clone(),
            Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(f(b))),
            Term::App(a, b) => Term::App(Box::new(f(a)), Box::new(f(b))),
            _ => {
                let (name, args) = self.constructor().unwrap();
                let args = args.into_iter().map(f).collect();
                Term::build(name, args).unwrap()
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Atom(_) | Term::Int(_) => {}
            _ => {
                for c in self.constructor().unwrap().1 {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True if any `Var`, `Lam` or `App` remains.
    pub fn has_lambda_residue(&self) -> bool {
        match self {
            Term::Var(_) | Term::Lam(..) | Term::App(..) => true,
            Term::Atom(_) | Term::Int(_) => false,
            _ => self.constructor().unwrap().1.iter().any(|c| c.has_lambda_residue()),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

fn alpha_eq<'a>(a: &'a Term, b: &'a Term, env_a: &mut Vec<&'a str>, env_b: &mut Vec<&'a str>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = env_a.iter().rposition(|v| *v == x);
            let iy = env_b.iter().rposition(|v| *v == y);
            match (ix, iy) {
                (None, None) => x == y,
                (Some(i), Some(j)) => env_a.len() - i == env_b.len() - j,
                _ => false,
            }
        }
        (Term::Lam(x, ba), Term::Lam(y, bb)) => {
            env_a.push(x);
            env_b.push(y);
            let eq = alpha_eq(ba, bb, env_a, env_b);
            env_a.pop();
            env_b.pop();
            eq
        }
        (Term::App(fa, xa), Term::App(fb, xb)) => {
            alpha_eq(fa, fb, env_a, env_b) && alpha_eq(xa, xb, env_a, env_b)
        }
        (Term::Atom(x), Term::Atom(y)) => x == y,
        (Term::Int(x), Term::Int(y)) => x == y,
        _ => match (a.constructor(), b.constructor()) {
            (Some((na, ca)), Some((nb, cb))) if na == nb => {
                ca.iter().zip(cb.iter()).all(|(x, y)| alpha_eq(x, y, env_a, env_b))
            }
            _ => false,
        },
    }
}

/// Renders in the template mini-language; [`parse_term`] reads it back.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Atom(x) => write!(f, "phi_{x}"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Lam(x, b) => write!(f, "lam {x}. {b}"),
            Term::App(..) => {
                let mut args = Vec::new();
                let mut head = self;
                while let Term::App(g, a) = head {
                    args.push(a.as_ref());
                    head = g;
                }
                args.reverse();
                if matches!(head, Term::Lam(..)) {
                    write!(f, "({head})")?;
                } else {
                    write!(f, "{head}")?;
                }
                write_args(f, &args)
            }
            _ => {
                let (name, args) = self.constructor().unwrap();
                f.write_str(name)?;
                write_args(f, &args)
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[&Term]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("template syntax error at byte {position}: {message}")]
pub struct TemplateParseError {
    pub position: usize,
    pub message: String,
}

/// Parses the template language:
///
/// ```text
/// t ::= lam v. t | head(t, ...)* 
/// head ::= v | phi_<name> | <int> | (t) | CTOR(t, ...)
/// CTOR ::= F | G | NOT | AND | OR | SEQ | I | EXTG
/// ```
///
/// `f(a, b)` is curried application `((f a) b)`.
pub fn parse_term(text: &str) -> Result<Term, TemplateParseError> {
    let mut p = TermReader { src: text, pos: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

struct TermReader<'a> {
    src: &'a str,
    pos: usize,
}

impl TermReader<'_> {
    fn error(&self, message: impl Into<String>) -> TemplateParseError {
        TemplateParseError { position: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), TemplateParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn term(&mut self) -> Result<Term, TemplateParseError> {
        let save = self.pos;
        if self.word() == "lam" {
            let var = self.word().to_string();
            if !is_var_name(&var) {
                return Err(self.error(format!("bad bound variable `{var}`")));
            }
            self.expect('.')?;
            let body = self.term()?;
            return Ok(Term::Lam(var, Box::new(body)));
        }
        self.pos = save;
        let mut head = self.head()?;
        while self.peek() == Some('(') {
            for arg in self.args()? {
                head = Term::app(head, arg);
            }
        }
        Ok(head)
    }

    fn args(&mut self) -> Result<Vec<Term>, TemplateParseError> {
        self.expect('(')?;
        let mut out = vec![self.term()?];
        while self.eat(',') {
            out.push(self.term()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn head(&mut self) -> Result<Term, TemplateParseError> {
        match self.peek() {
            None => return Err(self.error("unexpected end of template")),
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(')')?;
                return Ok(t);
            }
            _ => {}
        }
        let start = self.pos;
        let word = self.word().to_string();
        if word.is_empty() {
            return Err(self.error("expected a term"));
        }
        if let Some(name) = word.strip_prefix("phi_") {
            if name.is_empty() {
                return Err(TemplateParseError { position: start, message: "empty atom name".into() });
            }
            return Ok(Term::Atom(name.to_string()));
        }
        if word.chars().all(|c| c.is_ascii_digit()) {
            return word
                .parse()
                .map(Term::Int)
                .map_err(|_| TemplateParseError { position: start, message: "integer too large".into() });
        }
        if matches!(word.as_str(), "F" | "G" | "NOT" | "AND" | "OR" | "SEQ" | "I" | "EXTG") {
            let args = self.args()?;
            let n = args.len();
            return Term::build(&word, args).ok_or(TemplateParseError {
                position: start,
                message: format!("`{word}` does not take {n} argument(s)"),
            });
        }
        if is_var_name(&word) {
            return Ok(Term::Var(word));
        }
        Err(TemplateParseError { position: start, message: format!("unknown name `{word}`") })
    }
}

fn is_var_name(s: &str) -> bool {
    s != "lam"
        && !s.starts_with("phi_")
        && s.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reach_template() {
        let t = parse_term("lam x. lam i. F(i, x)").unwrap();
        let expected = Term::lam(
            "x",
            Term::lam("i", Term::Eventually(Box::new(Term::var("i")), Box::new(Term::var("x")))),
        );
        assert_eq!(t, expected);
        assert!(t.is_closed());
    }

    #[test]
    fn application_is_curried() {
        let t = parse_term("f(a, b)(c)").unwrap();
        let expected =
            Term::app(Term::app(Term::app(Term::var("f"), Term::var("a")), Term::var("b")), Term::var("c"));
        assert_eq!(t, expected);
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "lam q. lam p. SEQ(p, q)",
            "lam n. lam u. lam p. p(I(0, n))",
            "lam q. lam p. AND(p, EXTG(q, p))",
            "(lam x. x)(phi_A)",
            "lam x. lam i. G(i, NOT(x))",
            "lam q. lam p. lam i. OR(p(i), q(i))",
        ] {
            let t = parse_term(src).unwrap();
            assert_eq!(t.to_string(), src);
            assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn constructor_arity_is_checked() {
        assert!(parse_term("F(i)").is_err());
        assert!(parse_term("NOT(a, b)").is_err());
        assert!(parse_term("Foo(a)").is_err());
        assert!(parse_term("lam 1. x").is_err());
        assert!(parse_term("").is_err());
    }

    #[test]
    fn free_variables() {
        let t = parse_term("lam x. AND(x, y)").unwrap();
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        assert!(!t.is_closed());
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_term("lam x. lam y. AND(x, y)").unwrap();
        let b = parse_term("lam p. lam q. AND(p, q)").unwrap();
        let c = parse_term("lam p. lam q. AND(q, p)").unwrap();
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        assert!(!parse_term("x").unwrap().alpha_eq(&parse_term("y").unwrap()));
    }
}
