//! Recursive-descent parser for the prefix region syntax, e.g.
//! `(union (disc 0 0 1) (complement (halfplane 1 0 0)))`.

use std::str::FromStr;

use num_complex::Complex64;

use super::region::{BivariatePoly, Region};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    Str(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn next(&mut self) -> Result<Option<(usize, Tok<'a>)>> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.pos += 1;
                Tok::Open
            }
            ')' => {
                self.pos += 1;
                Tok::Close
            }
            '"' => {
                let Some(end) = rest[1..].find('"') else {
                    return Err(parse_err(start, "unterminated string"));
                };
                self.pos += end + 2;
                Tok::Str(&rest[1..=end])
            }
            _ => {
                let len = rest
                    .find(|ch: char| ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"')
                    .unwrap_or(rest.len());
                self.pos += len;
                Tok::Atom(&rest[..len])
            }
        };
        Ok(Some((start, tok)))
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(usize, Tok<'a>)>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(usize, Tok<'a>)>> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn bump(&mut self) -> Result<(usize, Tok<'a>)> {
        self.peek()?;
        self.peeked
            .take()
            .ok_or_else(|| parse_err(self.lex.src.len(), "unexpected end of input"))
    }

    fn number(&mut self) -> Result<f64> {
        match self.bump()? {
            (pos, Tok::Atom(s)) => {
                let v = f64::from_str(s).map_err(|_| parse_err(pos, format!("expected a number, found '{s}'")))?;
                if !v.is_finite() {
                    return Err(parse_err(pos, "numbers must be finite"));
                }
                Ok(v)
            }
            (pos, t) => Err(parse_err(pos, format!("expected a number, found {}", describe(&t)))),
        }
    }

    fn close(&mut self) -> Result<()> {
        match self.bump()? {
            (_, Tok::Close) => Ok(()),
            (pos, t) => Err(parse_err(pos, format!("expected ')', found {}", describe(&t)))),
        }
    }

    fn expr(&mut self) -> Result<Region> {
        match self.bump()? {
            (_, Tok::Atom("all")) => Ok(Region::All),
            (_, Tok::Atom("empty")) => Ok(Region::Empty),
            (_, Tok::Open) => self.form(),
            (pos, t) => Err(parse_err(pos, format!("expected a region, found {}", describe(&t)))),
        }
    }

    fn form(&mut self) -> Result<Region> {
        let (pos, head) = match self.bump()? {
            (pos, Tok::Atom(h)) => (pos, h),
            (pos, t) => return Err(parse_err(pos, format!("expected an operator, found {}", describe(&t)))),
        };
        let region = match head {
            "disc" => Region::Disc { cx: self.number()?, cy: self.number()?, r: self.number()? },
            "rect" => Region::Rect {
                x0: self.number()?,
                y0: self.number()?,
                x1: self.number()?,
                y1: self.number()?,
            },
            "halfplane" => Region::HalfPlane { a: self.number()?, b: self.number()?, c: self.number()? },
            "strips" => Region::Strips { width: self.number()?, period: self.number()? },
            "hstrips" => Region::HStrips { width: self.number()?, period: self.number()? },
            "levelset" => {
                let poly = match self.bump()? {
                    (p, Tok::Str(s)) => parse_coefficients(s, p + 1)?,
                    (p, t) => {
                        return Err(parse_err(p, format!("expected quoted coefficients, found {}", describe(&t))))
                    }
                };
                Region::LevelSet { poly, eps: self.number()? }
            }
            "complement" => Region::complement(self.expr()?),
            "union" | "intersect" => {
                let mut parts = Vec::new();
                while !matches!(self.peek()?, Some((_, Tok::Close)) | None) {
                    parts.push(self.expr()?);
                }
                if parts.is_empty() {
                    return Err(parse_err(pos, format!("'{head}' needs at least one operand")));
                }
                if head == "union" {
                    Region::union(parts)
                } else {
                    Region::intersect(parts)
                }
            }
            other => return Err(parse_err(pos, format!("unknown operator '{other}'"))),
        };
        self.close()?;
        region.validate().map_err(|e| match e {
            Error::Domain(msg) => parse_err(pos, msg),
            other => other,
        })?;
        Ok(region)
    }
}

fn describe(t: &Tok<'_>) -> String {
    match t {
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::Atom(s) => format!("'{s}'"),
        Tok::Str(s) => format!("\"{s}\""),
    }
}

/// Whitespace-separated coefficients; each is `re` or `re,im`.
fn parse_coefficients(s: &str, offset: usize) -> Result<BivariatePoly> {
    let mut coeffs = Vec::new();
    let mut cursor = 0;
    for word in s.split_whitespace() {
        let at = offset + cursor + s[cursor..].find(word).unwrap_or(0);
        cursor = at - offset + word.len();
        let bad = || parse_err(at, format!("bad coefficient '{word}'"));
        let c = match word.split_once(',') {
            Some((re, im)) => Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?),
            None => Complex64::new(word.parse().map_err(|_| bad())?, 0.0),
        };
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(bad());
        }
        coeffs.push(c);
    }
    if coeffs.is_empty() {
        return Err(parse_err(offset, "empty coefficient list"));
    }
    BivariatePoly::new(coeffs)
}

/// Parses a region expression. Errors carry the byte offset of the
/// offending token.
pub fn parse_region(src: &str) -> Result<Region> {
    let mut p = Parser { lex: Lexer { src, pos: 0 }, peeked: None };
    let region = p.expr()?;
    if let Some((pos, t)) = p.peek()? {
        let msg = format!("trailing input starting with {}", describe(t));
        return Err(parse_err(*pos, msg));
    }
    Ok(region)
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_region(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expression() {
        let r = parse_region("(union (disc 0 0 1) (complement (halfplane 1 0 0)))").unwrap();
        assert!(r.contains(0.5, 0.0));
        assert!(r.contains(-3.0, 0.0));
        assert!(!r.contains(3.0, 0.0));
    }

    #[test]
    fn parses_levelset() {
        let r = parse_region("(levelset \"0 0 0 0 1\" 0.25)").unwrap();
        assert!(!r.contains(0.1, 0.1));
        assert!(r.contains(1.0, 0.0));
        let c = parse_region("(levelset \"1,0.5 0 -2\" 1)").unwrap();
        let Region::LevelSet { poly, .. } = &c else { panic!() };
        assert_eq!(poly.coefficients()[0], Complex64::new(1.0, 0.5));
    }

    #[test]
    fn error_positions() {
        let e = parse_region("(union (disc 0 0 x))").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 17, .. }), "{e}");
        let e = parse_region("(blob 1)").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 1, .. }));
        let e = parse_region("(disc 0 0 1").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 11, .. }));
        let e = parse_region("all all").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 4, .. }));
        let e = parse_region("(strips 2 1)").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 1, .. }));
        let e = parse_region("(levelset \"1 q\" 1)").unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 13, .. }), "{e}");
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "all",
            "(intersect (strips 0.5 1) (hstrips 0.25 2))",
            "(complement (rect -1 -2 3 4.5))",
            "(levelset \"1 0,1 0 0 -1\" 0.3)",
        ] {
            let r = parse_region(src).unwrap();
            assert_eq!(parse_region(&r.to_string()).unwrap(), r);
        }
    }
}
