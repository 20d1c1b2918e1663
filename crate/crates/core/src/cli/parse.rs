//! Type literals: comma-separated fractions such as `1/7, 2/7, 4/7`.
//!
//! Whitespace is ignored, the list may be wrapped in `()` or `{}`, and a bare
//! integer stands for `k/1`. Columns in errors are 1-based character offsets.

use crate::error::{Error, Result};
use crate::qz::FracQZ;
use crate::types::{validate_type, AutType};

struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().enumerate().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.chars.len(), |&(i, _)| i)
            + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.column(),
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self, signed: bool) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let mut text = String::new();
        if signed && matches!(self.peek(), Some('-' | '+')) {
            text.push(self.peek().unwrap());
            self.pos += 1;
            self.skip_ws();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.pos += 1;
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            self.pos = start;
            return Err(match self.peek() {
                Some(c) => self.err(format!("expected an integer, found {c:?}")),
                None => self.err("expected an integer, found end of input"),
            });
        }
        text.parse().map_err(|_| Error::Parse {
            pos: self.chars.get(start).map_or(0, |&(i, _)| i) + 1,
            msg: format!("integer {text} out of range"),
        })
    }

    fn fraction(&mut self) -> Result<FracQZ> {
        let num = self.integer(true)?;
        if !self.eat('/') {
            return Ok(FracQZ::new(num, 1).expect("unit denominator"));
        }
        self.skip_ws();
        let den_col = self.column();
        let den = self.integer(false)?;
        if den == 0 {
            return Err(Error::Parse {
                pos: den_col,
                msg: "zero denominator".into(),
            });
        }
        FracQZ::new(num, den)
    }
}

/// Parse a list of fractions without checking stability.
pub fn parse_fractions(src: &str) -> Result<Vec<FracQZ>> {
    let mut cur = Cursor::new(src);
    let close = if cur.eat('(') {
        Some(')')
    } else if cur.eat('{') {
        Some('}')
    } else {
        None
    };

    let mut out = Vec::new();
    cur.skip_ws();
    let empty = match close {
        Some(c) => cur.peek() == Some(c),
        None => cur.peek().is_none(),
    };
    if !empty {
        loop {
            out.push(cur.fraction()?);
            if !cur.eat(',') {
                break;
            }
        }
    }
    if let Some(c) = close {
        if !cur.eat(c) {
            return Err(cur.err(format!("expected {c:?}")));
        }
    }
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.err(format!("unexpected {c:?}")));
    }
    Ok(out)
}

/// Parse, canonicalize and validate a type literal.
pub fn parse_type(src: &str) -> Result<AutType> {
    validate_type(parse_fractions(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(
            parse_type("1/7, 2/7, 4/7").unwrap().to_string(),
            "1/7, 2/7, 4/7"
        );
        assert_eq!(
            parse_type("4/12,2/12,1/12,5/12").unwrap().to_string(),
            "1/12, 1/6, 1/3, 5/12"
        );
        assert_eq!(parse_type("(1/3 , 2/3)").unwrap().to_string(), "1/3, 2/3");
        assert_eq!(parse_type("{ 0, 1/2 }").unwrap().to_string(), "0, 1/2");
        assert!(parse_type("").unwrap().is_empty());
        assert!(parse_type("  ").unwrap().is_empty());
        assert!(parse_type("()").unwrap().is_empty());
        assert_eq!(parse_type("-1/2, 1/2").unwrap().to_string(), "1/2, 1/2");
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            parse_type("1/0"),
            Err(Error::Parse {
                pos: 3,
                msg: "zero denominator".into()
            })
        );
    }

    #[test]
    fn syntax_errors_carry_columns() {
        match parse_type("1/3, x/3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        match parse_type("1/3 2/3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_type("(1/3, 2/3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_type("1/3,"), Err(Error::Parse { .. })));
        assert!(matches!(parse_type("1/-3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn instability_is_forwarded() {
        assert!(matches!(
            parse_type("1/5"),
            Err(Error::Unstable { order: 5, .. })
        ));
    }
}
