//! Reader for the canonical text rendering.
//!
//! ```text
//! f ::= true | phi_<name> | !f | (f & f & ...) | (f | f | ...)
//!     | F[a,b] f | G[a,b] f | U[a,b](f, f) | (f)
//! ```

use thiserror::Error;

use super::{Formula, Interval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula syntax error at byte {position}: {message}")]
pub struct FormulaParseError {
    pub position: usize,
    pub message: String,
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaParseError> {
    let mut reader = Reader { src: text.as_bytes(), pos: 0 };
    let f = reader.formula()?;
    reader.skip_ws();
    if reader.pos != reader.src.len() {
        return Err(reader.error("trailing input"));
    }
    Ok(f)
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, message: impl Into<String>) -> FormulaParseError {
        FormulaParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FormulaParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32, FormulaParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| FormulaParseError { position: start, message: "expected integer".into() })
    }

    fn interval(&mut self) -> Result<Interval, FormulaParseError> {
        self.expect(b'[')?;
        let lo = self.number()?;
        self.expect(b',')?;
        let hi = self.number()?;
        self.expect(b']')?;
        Interval::new(lo, hi).map_err(|e| self.error(e.to_string()))
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                self.group()
            }
            Some(b'F') => {
                self.pos += 1;
                let i = self.interval()?;
                Ok(Formula::eventually(i, self.formula()?))
            }
            Some(b'G') => {
                self.pos += 1;
                let i = self.interval()?;
                Ok(Formula::always(i, self.formula()?))
            }
            Some(b'U') => {
                self.pos += 1;
                let i = self.interval()?;
                self.expect(b'(')?;
                let l = self.formula()?;
                self.expect(b',')?;
                let r = self.formula()?;
                self.expect(b')')?;
                Ok(Formula::until(i, l, r))
            }
            Some(_) if self.eat_keyword("true") => Ok(Formula::True),
            Some(_) if self.eat_keyword("phi_") => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("empty proposition name"));
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Formula::atom(name))
            }
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }

    /// Body of a parenthesized group, after the opening `(`.
    fn group(&mut self) -> Result<Formula, FormulaParseError> {
        let first = self.formula()?;
        let sep = match self.peek() {
            Some(b')') => {
                self.pos += 1;
                return Ok(first);
            }
            Some(c @ (b'&' | b'|')) => c,
            _ => return Err(self.error("expected `&`, `|` or `)`")),
        };
        let mut children = vec![first];
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) if c == sep => {
                    self.pos += 1;
                    children.push(self.formula()?);
                }
                Some(b'&' | b'|') => return Err(self.error("mixed `&` and `|` in one group")),
                _ => return Err(self.error("expected connective or `)`")),
            }
        }
        Ok(if sep == b'&' { Formula::And(children) } else { Formula::Or(children) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stl::arbitrary::arb_formula;
    use proptest::prelude::*;

    #[test]
    fn reads_nested_rendering() {
        let f = parse_formula("F[0,10](phi_B & F[0,15] phi_C)").unwrap();
        assert_eq!(
            f,
            Formula::eventually(
                Interval::upto(10),
                Formula::And(vec![
                    Formula::atom("B"),
                    Formula::eventually(Interval::upto(15), Formula::atom("C"))
                ])
            )
        );
    }

    #[test]
    fn reads_until_and_negation() {
        let f = parse_formula("U[1,3](true, !phi_A)").unwrap();
        assert_eq!(
            f,
            Formula::until(
                Interval::new(1, 3).unwrap(),
                Formula::True,
                Formula::not(Formula::atom("A"))
            )
        );
    }

    #[test]
    fn rejects_mixed_connectives() {
        let err = parse_formula("(phi_A & phi_B | phi_C)").unwrap_err();
        assert!(err.message.contains("mixed"), "{err}");
    }

    #[test]
    fn rejects_inverted_interval_and_trailing_input() {
        assert!(parse_formula("F[5,2] phi_A").is_err());
        assert!(parse_formula("phi_A phi_B").is_err());
        assert!(parse_formula("").is_err());
    }

    proptest! {
        #[test]
        fn rendering_round_trips(f in arb_formula(4)) {
            prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }
}
