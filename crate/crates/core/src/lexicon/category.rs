use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basic {
    S,
    NP,
    NUM,
    UNIT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// `X/Y`: takes `Y` on the right.
    Forward,
    /// `X\Y`: takes `Y` on the left.
    Backward,
}

/// A CCG category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Basic(Basic),
    Slash { dir: Direction, result: Box<Category>, arg: Box<Category> },
}

impl Category {
    pub const S: Category = Category::Basic(Basic::S);
    pub const NP: Category = Category::Basic(Basic::NP);
    pub const NUM: Category = Category::Basic(Basic::NUM);
    pub const UNIT: Category = Category::Basic(Basic::UNIT);

    pub fn forward(result: Category, arg: Category) -> Category {
        Category::Slash { dir: Direction::Forward, result: Box::new(result), arg: Box::new(arg) }
    }

    pub fn backward(result: Category, arg: Category) -> Category {
        Category::Slash { dir: Direction::Backward, result: Box::new(result), arg: Box::new(arg) }
    }

    /// Result of forward application `self other`, if it applies.
    pub fn apply_forward(&self, other: &Category) -> Option<Category> {
        match self {
            Category::Slash { dir: Direction::Forward, result, arg } if **arg == *other => {
                Some((**result).clone())
            }
            _ => None,
        }
    }

    /// Result of backward application `other self`, if it applies.
    pub fn apply_backward(&self, other: &Category) -> Option<Category> {
        match self {
            Category::Slash { dir: Direction::Backward, result, arg } if **arg == *other => {
                Some((**result).clone())
            }
            _ => None,
        }
    }

    /// This category followed by each successive result, outermost first:
    /// `(S\S)/S` gives `[(S\S)/S, S\S, S]`.
    pub fn spine(&self) -> Vec<&Category> {
        let mut out = vec![self];
        let mut cur = self;
        while let Category::Slash { result, .. } = cur {
            out.push(result);
            cur = result;
        }
        out
    }

    /// Arguments in the order they are consumed.
    pub fn arguments(&self) -> Vec<&Category> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Category::Slash { result, arg, .. } = cur {
            out.push(arg.as_ref());
            cur = result;
        }
        out
    }

    /// `(X\X)/X`: the shape of a lexical coordinator.
    pub fn is_coordinator(&self) -> bool {
        match self {
            Category::Slash { dir: Direction::Forward, result, arg } => matches!(
                result.as_ref(),
                Category::Slash { dir: Direction::Backward, result: r, arg: a }
                    if r == arg && a == arg
            ),
            _ => false,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn part(f: &mut fmt::Formatter<'_>, c: &Category) -> fmt::Result {
            match c {
                Category::Basic(_) => write!(f, "{c}"),
                Category::Slash { .. } => write!(f, "({c})"),
            }
        }
        match self {
            Category::Basic(b) => write!(f, "{b:?}"),
            Category::Slash { dir, result, arg } => {
                part(f, result)?;
                f.write_str(match dir {
                    Direction::Forward => "/",
                    Direction::Backward => "\\",
                })?;
                part(f, arg)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed category `{text}`: {message}")]
pub struct CategoryParseError {
    pub text: String,
    pub message: String,
}

/// Slashes associate to the left: `S\S/S` is `(S\S)/S`.
impl FromStr for Category {
    type Err = CategoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let err = |message: &str| CategoryParseError { text: s.to_string(), message: message.into() };
        let cat = parse_seq(&chars, &mut pos).map_err(|m| err(&m))?;
        if pos != chars.len() {
            return Err(err("trailing input"));
        }
        Ok(cat)
    }
}

fn parse_seq(chars: &[char], pos: &mut usize) -> Result<Category, String> {
    let mut cat = parse_atom(chars, pos)?;
    while let Some(&c) = chars.get(*pos) {
        let dir = match c {
            '/' => Direction::Forward,
            '\\' => Direction::Backward,
            _ => break,
        };
        *pos += 1;
        let arg = parse_atom(chars, pos)?;
        cat = Category::Slash { dir, result: Box::new(cat), arg: Box::new(arg) };
    }
    Ok(cat)
}

fn parse_atom(chars: &[char], pos: &mut usize) -> Result<Category, String> {
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        let inner = parse_seq(chars, pos)?;
        if chars.get(*pos) != Some(&')') {
            return Err("unbalanced parenthesis".into());
        }
        *pos += 1;
        return Ok(inner);
    }
    let start = *pos;
    while chars.get(*pos).is_some_and(|c| c.is_ascii_alphabetic()) {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    match name.as_str() {
        "S" => Ok(Category::S),
        "NP" => Ok(Category::NP),
        "NUM" => Ok(Category::NUM),
        "UNIT" => Ok(Category::UNIT),
        "" => Err("expected a category".into()),
        other => Err(format!("unknown basic category `{other}`")),
    }
}
