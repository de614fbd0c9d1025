use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::poly::{ParsePolyError, Poly2, Rat};

/// How a system was built from a curve: `f = h f0 − ε xy h_y`,
/// `g = h g0 + ε xy h_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub h: Poly2,
    pub f0: Poly2,
    pub g0: Poly2,
    pub eps: Rat,
}

/// `dx/dt = f(x, y)`, `dy/dt = g(x, y)`.
///
/// Equality ignores [`PlanarSystem::meta`].
#[derive(Debug, Clone)]
pub struct PlanarSystem {
    pub f: Poly2,
    pub g: Poly2,
    pub meta: Option<Construction>,
}

impl PartialEq for PlanarSystem {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.g == other.g
    }
}

impl Eq for PlanarSystem {}

impl PlanarSystem {
    pub fn new(f: Poly2, g: Poly2) -> Self {
        PlanarSystem { f, g, meta: None }
    }

    pub fn degree(&self) -> i64 {
        self.f.degree().max(self.g.degree())
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// Same `(f, g)` with every exponent pair translated by `(p, q)` and
    /// every coefficient scaled by `c`.
    pub fn mul_monomial(&self, c: &Rat, p: u32, q: u32) -> PlanarSystem {
        PlanarSystem::new(self.f.mul_monomial(c, p, q), self.g.mul_monomial(c, p, q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseSystemError {
    #[error("line {line}: {source}")]
    Poly {
        line: usize,
        #[source]
        source: ParsePolyError,
    },
    #[error("line {line}: expected `{expected} = <polynomial>`")]
    Layout { line: usize, expected: char },
    #[error("missing definition of {0}")]
    Missing(char),
    #[error("line {0}: unexpected content after f and g")]
    Trailing(usize),
}

/// Two lines, `f = ...` then `g = ...`. Blank lines and `#` comments are
/// skipped.
impl FromStr for PlanarSystem {
    type Err = ParseSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts: Vec<Poly2> = Vec::with_capacity(2);
        for (k, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let expected = match parts.len() {
                0 => 'f',
                1 => 'g',
                _ => return Err(ParseSystemError::Trailing(k + 1)),
            };
            let rest = line
                .strip_prefix(expected)
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .ok_or(ParseSystemError::Layout {
                    line: k + 1,
                    expected,
                })?;
            let p = rest.parse().map_err(|source| ParseSystemError::Poly {
                line: k + 1,
                source,
            })?;
            parts.push(p);
        }
        let mut it = parts.into_iter();
        let f = it.next().ok_or(ParseSystemError::Missing('f'))?;
        let g = it.next().ok_or(ParseSystemError::Missing('g'))?;
        Ok(PlanarSystem::new(f, g))
    }
}

impl fmt::Display for PlanarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "f = {}", self.f)?;
        writeln!(f, "g = {}", self.g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let sys: PlanarSystem = "# linear\nf = 1 - x\n\ng = x - y\n".parse().unwrap();
        assert_eq!(sys.to_string(), "f = -x + 1\ng = x - y\n");
        let again: PlanarSystem = sys.to_string().parse().unwrap();
        assert_eq!(again, sys);
    }

    #[test]
    fn layout_errors() {
        assert_eq!(
            "g = x\nf = y".parse::<PlanarSystem>(),
            Err(ParseSystemError::Layout {
                line: 1,
                expected: 'f'
            })
        );
        assert_eq!(
            "f = x".parse::<PlanarSystem>(),
            Err(ParseSystemError::Missing('g'))
        );
        assert!(matches!(
            "f = x\ng = y +".parse::<PlanarSystem>(),
            Err(ParseSystemError::Poly { line: 2, .. })
        ));
    }
}
