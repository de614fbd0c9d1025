//! Text form of polynomials: `16 x^4 + 16 y^4 - 25 x^2 + 39 x^2 y^2 + 9`.
//!
//! Coefficients are integers, fractions `p/q` or finite decimals (read
//! exactly). Monomials are `x^i y^j` with `^1` and unit coefficients
//! omitted; factors may be separated by spaces or `*`. Whitespace is
//! insignificant.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use super::{Monomial, Poly2, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParsePolyError {
    /// 1-based character column in the input.
    pub column: usize,
    pub message: String,
}

/// Parses `7`, `-3/4` or `0.125` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, ParsePolyError> {
    let chars: Vec<(usize, char)> = s
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let mut cur = Cursor {
        chars: &chars,
        pos: 0,
    };
    let neg = match cur.peek() {
        Some('-') => {
            cur.bump();
            true
        }
        Some('+') => {
            cur.bump();
            false
        }
        _ => false,
    };
    let r = cur
        .number()?
        .ok_or_else(|| cur.error("expected a number"))?;
    if let Some(c) = cur.peek() {
        return Err(cur.error(&format!("unexpected '{c}'")));
    }
    Ok(if neg { -r } else { r })
}

struct Cursor<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| i + 1)
            .unwrap_or_else(|| self.chars.last().map(|(i, _)| i + 2).unwrap_or(1))
    }

    fn error(&self, message: &str) -> ParsePolyError {
        ParsePolyError {
            column: self.column(),
            message: message.to_string(),
        }
    }

    fn digits(&mut self) -> Option<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        (!s.is_empty()).then_some(s)
    }

    fn uint(&mut self) -> Result<u32, ParsePolyError> {
        let start = self.column();
        let d = self
            .digits()
            .ok_or_else(|| self.error("expected an exponent"))?;
        d.parse().map_err(|_| ParsePolyError {
            column: start,
            message: format!("exponent {d} out of range"),
        })
    }

    /// Unsigned integer, fraction or decimal; `None` if no digit follows.
    fn number(&mut self) -> Result<Option<Rat>, ParsePolyError> {
        let int_part = match self.digits() {
            Some(d) => d,
            None if self.peek() == Some('.') => String::from("0"),
            None => return Ok(None),
        };
        let mut value = Rat::from_integer(int_part.parse::<BigInt>().expect("digits"));
        if self.peek() == Some('.') {
            self.bump();
            let frac = self.digits().unwrap_or_default();
            if !frac.is_empty() {
                let num: BigInt = frac.parse().expect("digits");
                let den = num::pow(BigInt::from(10), frac.len());
                value += Rat::new(num, den);
            }
        }
        if self.peek() == Some('/') {
            self.bump();
            let col = self.column();
            let d = self
                .digits()
                .ok_or_else(|| self.error("expected a denominator"))?;
            let den: BigInt = d.parse().expect("digits");
            if den.is_zero() {
                return Err(ParsePolyError {
                    column: col,
                    message: "zero denominator".into(),
                });
            }
            value /= Rat::from_integer(den);
        }
        Ok(Some(value))
    }

    fn term(&mut self) -> Result<(Rat, Monomial), ParsePolyError> {
        let mut coeff = Rat::one();
        let mut seen = false;
        if let Some(c) = self.number()? {
            coeff = c;
            seen = true;
        }
        let mut m = Monomial::ONE;
        loop {
            let save = self.pos;
            if self.peek() == Some('*') {
                self.bump();
            }
            match self.peek() {
                Some(v @ ('x' | 'X' | 'y' | 'Y')) => {
                    self.bump();
                    let e = if self.peek() == Some('^') {
                        self.bump();
                        self.uint()?
                    } else {
                        1
                    };
                    if v.eq_ignore_ascii_case(&'x') {
                        m.x += e;
                    } else {
                        m.y += e;
                    }
                    seen = true;
                }
                Some(c) if c.is_ascii_digit() || c == '.' => {
                    // Trailing numeric factor as in `x/2` is not supported,
                    // but `x * 3` is.
                    let n = self.number()?.expect("digit present");
                    coeff *= n;
                    seen = true;
                }
                Some('/') if seen => {
                    self.bump();
                    let col = self.column();
                    let d = self
                        .number()?
                        .ok_or_else(|| self.error("expected a divisor"))?;
                    if d.is_zero() {
                        return Err(ParsePolyError {
                            column: col,
                            message: "division by zero".into(),
                        });
                    }
                    coeff /= d;
                }
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        if !seen {
            return Err(self.error("expected a term"));
        }
        Ok((coeff, m))
    }
}

impl FromStr for Poly2 {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut cur = Cursor {
            chars: &chars,
            pos: 0,
        };
        if cur.peek().is_none() {
            return Err(cur.error("empty polynomial"));
        }
        let mut out = Poly2::zero();
        let mut first = true;
        while cur.peek().is_some() {
            let neg = match cur.peek() {
                Some('+') => {
                    cur.bump();
                    false
                }
                Some('-') => {
                    cur.bump();
                    true
                }
                Some(c) if !first => {
                    return Err(cur.error(&format!("expected '+' or '-', found '{c}'")))
                }
                _ => false,
            };
            let (c, m) = cur.term()?;
            out.add_term(m, if neg { -c } else { c });
            first = false;
        }
        Ok(out)
    }
}

fn fmt_monomial(m: Monomial) -> String {
    let mut parts = Vec::new();
    match m.x {
        0 => {}
        1 => parts.push("x".to_string()),
        e => parts.push(format!("x^{e}")),
    }
    match m.y {
        0 => {}
        1 => parts.push("y".to_string()),
        e => parts.push(format!("y^{e}")),
    }
    parts.join(" ")
}

/// Terms are printed from the leading term down (graded-lex, `x > y`).
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mono = fmt_monomial(*m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs} {mono}")?;
            }
        }
        Ok(())
    }
}
