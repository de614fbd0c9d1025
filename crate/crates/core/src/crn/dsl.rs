//! Line-oriented network text: `aX + bY -> cX + dY @ k`.
//!
//! `0` or `∅` is the empty complex, `#` starts a comment, blank lines are
//! ignored. Rates are positive integers, fractions `p/q` or decimals.

use super::{Complex, Network, NetworkError, Reaction};
use crate::poly::parse_rat;

fn syntax(line: usize, column: usize, message: impl Into<String>) -> NetworkError {
    NetworkError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses one complex; `offset` is the 0-based char column of `s` in its line.
fn parse_complex(s: &str, line: usize, offset: usize) -> Result<Complex, NetworkError> {
    let trimmed = s.trim();
    let lead = s.chars().take_while(|c| c.is_whitespace()).count();
    if trimmed.is_empty() {
        return Err(syntax(line, offset + 1, "missing complex"));
    }
    if trimmed == "0" || trimmed == "∅" {
        return Ok(Complex::EMPTY);
    }
    let mut c = Complex::EMPTY;
    let mut col = offset + lead;
    for term in trimmed.split('+') {
        let tlead = term.chars().take_while(|c| c.is_whitespace()).count();
        let t = term.trim();
        let here = col + tlead + 1;
        let (digits, species) =
            t.split_at(t.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(t.len()));
        let count: u32 = if digits.is_empty() {
            1
        } else {
            digits
                .parse()
                .map_err(|_| syntax(line, here, format!("bad coefficient '{digits}'")))?
        };
        match species.trim() {
            "X" => c.x += count,
            "Y" => c.y += count,
            "" => return Err(syntax(line, here, "expected species X or Y")),
            other => {
                return Err(syntax(
                    line,
                    here + digits.chars().count(),
                    format!("unknown species '{other}'"),
                ))
            }
        }
        col += term.chars().count() + 1;
    }
    Ok(c)
}

fn parse_line(raw: &str, line: usize) -> Result<Option<Reaction>, NetworkError> {
    let body = raw.split('#').next().unwrap_or("");
    if body.trim().is_empty() {
        return Ok(None);
    }
    let chars_before = |byte: usize| body[..byte].chars().count();
    let arrow = body
        .find("->")
        .ok_or_else(|| syntax(line, 1, "expected '->'"))?;
    let at = body[arrow..]
        .find('@')
        .map(|i| i + arrow)
        .ok_or_else(|| syntax(line, chars_before(body.len()) + 1, "expected '@ rate'"))?;
    let source = parse_complex(&body[..arrow], line, 0)?;
    let target = parse_complex(&body[arrow + 2..at], line, chars_before(arrow + 2))?;
    let rate_text = &body[at + 1..];
    let base = chars_before(at + 1);
    let rate = parse_rat(rate_text).map_err(|e| syntax(line, base + e.column, e.message))?;
    Reaction::new(source, target, rate).map(Some)
}

pub fn parse_network(text: &str) -> Result<Network, NetworkError> {
    let mut reactions = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        if let Some(r) = parse_line(raw, k + 1)? {
            reactions.push(r);
        }
    }
    Network::new(reactions)
}

/// One reaction per line in normalized order.
pub fn print_network(net: &Network) -> String {
    let mut out = String::new();
    for r in net.normalized().reactions() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    const LV: &str = "X -> 2X @ 1\nX + Y -> 2Y @ 1\nY -> 0 @ 1";

    #[test]
    fn lotka_volterra_text() {
        let net = parse_network(LV).unwrap();
        assert_eq!(net.len(), 3);
        assert_eq!(net.reactions()[1].stoichiometry(), (1, 1, 0, 2));
        assert_eq!(net.reactions()[2].target, Complex::EMPTY);
    }

    #[test]
    fn printing_is_normalized() {
        let net = parse_network(LV).unwrap();
        assert_eq!(
            print_network(&net),
            "Y -> 0 @ 1\nX -> 2X @ 1\nX + Y -> 2Y @ 1\n"
        );
        let again = parse_network(&print_network(&net)).unwrap();
        assert_eq!(again, net.normalized());
    }

    #[test]
    fn comments_fractions_and_empty_symbol() {
        let net = parse_network("# inflow\n∅ -> X @ 3/2  # feed\n\n2X+Y -> 3X + Y @ 0.25\nX->Y@1")
            .unwrap();
        assert_eq!(net.reactions()[0].rate, rat(3, 2));
        assert_eq!(net.reactions()[1].rate, rat(1, 4));
        assert_eq!(net.reactions()[1].source, Complex::new(2, 1));
        assert_eq!(net.reactions()[2].rate, int(1));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_network(""), Err(NetworkError::EmptyNetwork));
        assert_eq!(
            parse_network("# nothing\n"),
            Err(NetworkError::EmptyNetwork)
        );
        assert!(matches!(
            parse_network("X -> X @ 1"),
            Err(NetworkError::TrivialReaction(_))
        ));
        assert!(matches!(
            parse_network("X -> Y @ 0"),
            Err(NetworkError::NonpositiveRate(_))
        ));
        assert!(matches!(
            parse_network("X -> Y @ -1/2"),
            Err(NetworkError::NonpositiveRate(_))
        ));
        assert!(matches!(
            parse_network("X -> Y @ 1\nX -> Y @ 2"),
            Err(NetworkError::DuplicateReaction(_))
        ));
        assert_eq!(
            parse_network("X -> Y @ 1\nX + Z -> Y @ 1"),
            Err(NetworkError::Syntax {
                line: 2,
                column: 5,
                message: "unknown species 'Z'".into()
            })
        );
        assert!(matches!(
            parse_network("X => Y @ 1"),
            Err(NetworkError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_network("X -> Y"),
            Err(NetworkError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_network("X -> Y @ abc"),
            Err(NetworkError::Syntax {
                line: 1,
                column: 10,
                ..
            })
        ));
    }
}
