//! Text form of a polynomial:
//!
//! ```text
//! poly p=3 k=1: (1.0,0.0) * x1 x2' + (0.5,0.0) * 1
//! poly p=2 k=2: [(1.0,0.0),(0.0,0.0);(0.0,0.0),(-1.0,0.0)] * x1
//! poly p=2 k=1: 0
//! ```
//!
//! A trailing `'` marks a starred letter and `1` is the unit word. On input
//! the coefficient may be omitted (it defaults to the identity) and the
//! header may be omitted (p is then the largest letter index and k = 1).
//! Printing uses shortest round-trip float formatting, so print → parse is
//! exact.

use faer::c64;

use super::{Coefficient, NcPolynomial, StarLetter, StarMonomial};
use crate::error::{Error, Result};

pub(super) fn format_polynomial(p: &NcPolynomial) -> String {
    let mut out = format!("poly p={} k={}: ", p.alphabet_size(), p.coefficient_dimension());
    if p.is_zero() {
        out.push('0');
        return out;
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(w, c)| format!("{} * {}", format_coefficient(c), format_word(w)))
        .collect();
    out.push_str(&terms.join(" + "));
    out
}

fn format_complex(z: c64) -> String {
    format!("({:?},{:?})", z.re, z.im)
}

fn format_coefficient(c: &Coefficient) -> String {
    if let Some(z) = c.as_scalar() {
        return format_complex(z);
    }
    let k = c.dim();
    let rows: Vec<String> = (0..k)
        .map(|r| (0..k).map(|s| format_complex(c.get(r, s))).collect::<Vec<_>>().join(","))
        .collect();
    format!("[{}]", rows.join(";"))
}

pub fn format_word(w: &StarMonomial) -> String {
    if w.is_unit() {
        return "1".into();
    }
    w.letters()
        .iter()
        .map(|l| format!("x{}{}", l.index, if l.starred { "'" } else { "" }))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
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

    fn expect(&mut self, ch: u8) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", ch as char))
        }
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && matches!(self.src[self.pos], b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E' | b'a'..=b'z' | b'A'..=b'Z') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().or_else(|_| {
            self.pos = start;
            self.err(format!("bad number {text:?}"))
        })
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<usize>().or_else(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn complex(&mut self) -> Result<c64> {
        self.expect(b'(')?;
        let re = self.number()?;
        self.expect(b',')?;
        let im = self.number()?;
        self.expect(b')')?;
        Ok(c64::new(re, im))
    }

    /// `(re,im)` or `[row;row;...]`; returns (k, row-major entries).
    fn coefficient(&mut self) -> Result<(usize, Vec<c64>)> {
        if self.peek() == Some(b'(') {
            return Ok((1, vec![self.complex()?]));
        }
        self.expect(b'[')?;
        let mut rows: Vec<Vec<c64>> = vec![Vec::new()];
        loop {
            rows.last_mut().unwrap().push(self.complex()?);
            if self.eat(b',') {
                continue;
            }
            if self.eat(b';') {
                rows.push(Vec::new());
                continue;
            }
            self.expect(b']')?;
            break;
        }
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return self.err("coefficient matrix must be square");
        }
        Ok((k, rows.into_iter().flatten().collect()))
    }

    fn word(&mut self) -> Result<StarMonomial> {
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(StarMonomial::unit());
        }
        let mut letters = Vec::new();
        while self.peek() == Some(b'x') {
            self.pos += 1;
            let index = self.integer()?;
            let starred = self.src.get(self.pos) == Some(&b'\'');
            if starred {
                self.pos += 1;
            }
            letters.push(StarLetter { index, starred });
        }
        if letters.is_empty() {
            return self.err("expected a word");
        }
        Ok(StarMonomial::new(letters))
    }
}

/// Parse the text form; see the module docs.
pub fn parse_polynomial(text: &str) -> Result<NcPolynomial> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut header: Option<(usize, usize)> = None;
    cur.skip_ws();
    if cur.src[cur.pos..].starts_with(b"poly") {
        cur.pos += 4;
        let mut p = None;
        let mut k = None;
        while cur.peek() != Some(b':') {
            match cur.peek() {
                Some(b'p') => {
                    cur.pos += 1;
                    cur.expect(b'=')?;
                    p = Some(cur.integer()?);
                }
                Some(b'k') => {
                    cur.pos += 1;
                    cur.expect(b'=')?;
                    k = Some(cur.integer()?);
                }
                _ => return cur.err("expected p=, k= or ':' in header"),
            }
        }
        cur.pos += 1;
        header = Some((p.ok_or(Error::EmptyAlphabet)?, k.unwrap_or(1)));
    }

    let mut raw: Vec<(Option<(usize, Vec<c64>)>, StarMonomial, usize)> = Vec::new();
    let zero_literal = cur.peek() == Some(b'0') && {
        let rest = &cur.src[cur.pos + 1..];
        rest.iter().all(|b| b.is_ascii_whitespace())
    };
    if !zero_literal {
        loop {
            let at = cur.pos;
            let coeff = match cur.peek() {
                Some(b'(') | Some(b'[') => {
                    let c = cur.coefficient()?;
                    cur.expect(b'*')?;
                    Some(c)
                }
                _ => None,
            };
            let w = cur.word()?;
            raw.push((coeff, w, at));
            if cur.peek().is_none() {
                break;
            }
            cur.expect(b'+')?;
        }
    }

    let (p, k) = match header {
        Some(h) => h,
        None => {
            let p = raw.iter().map(|(_, w, _)| w.max_index()).max().unwrap_or(0).max(1);
            let k = raw.iter().find_map(|(c, _, _)| c.as_ref().map(|c| c.0)).unwrap_or(1);
            (p, k)
        }
    };
    let mut poly = NcPolynomial::zero(p, k)?;
    for (coeff, w, at) in raw {
        let coeff = match coeff {
            Some((ck, entries)) => Coefficient::new(ck, entries)?,
            None => Coefficient::scaled_identity(k, c64::new(1.0, 0.0)),
        };
        poly.add_term(coeff, w).map_err(|e| Error::Parse {
            position: at,
            message: e.to_string(),
        })?;
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn print_parse_round_trip() {
        let src = "poly p=3 k=1: (1.0,0.0) * x1 + (0.1,-2.5e-7) * x2' x3 + (1.0,0.0) * 1";
        let p = parse_polynomial(src).unwrap();
        assert_eq!(p.term_count(), 3);
        let again = parse_polynomial(&p.to_string()).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_string(), p.to_string());
    }

    #[test]
    fn matrix_coefficients_and_defaults() {
        let p = parse_polynomial("poly p=2 k=2: [(0,0),(1,0);(1,0),(0,0)] * x1 + x2").unwrap();
        assert_eq!(p.coefficient_dimension(), 2);
        let id = p.coefficient(&StarMonomial::letter(StarLetter::plain(2))).unwrap();
        assert_eq!(id, &Coefficient::scaled_identity(2, c64::new(1.0, 0.0)));
        assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
        let bare = parse_polynomial("x1 + x2 + x3").unwrap();
        assert_eq!((bare.alphabet_size(), bare.coefficient_dimension(), bare.term_count()), (3, 1, 3));
    }

    #[test]
    fn zero_and_errors() {
        let z = parse_polynomial("poly p=2 k=1: 0").unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "poly p=2 k=1: 0");
        assert!(matches!(parse_polynomial("poly p=1 k=1: x2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("(1,0) * "), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("[(1,0),(0,0)] * x1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x1 x2 +"), Err(Error::Parse { .. })));
    }
}
