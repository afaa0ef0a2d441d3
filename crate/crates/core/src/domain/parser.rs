use std::f64::consts::PI;

use super::{DomainExpr, NamedDomain};
use crate::error::{Error, ParseError, Result};

const NAMED: [&str; 7] = ["Sphere", "T", "HalfSphere", "Arc", "RegularT", "Cap", "Sector"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Number(v) => format!("number {v}"),
            Tok::Star => "\"*\"".into(),
            Tok::Slash => "\"/\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Comma => "\",\"".into(),
            Tok::Eq => "\"=\"".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let simple = match c {
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((start, tok));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+' {
            i += 1;
            while i < bytes.len() {
                let d = bytes[i];
                let exponent_sign =
                    (d == b'-' || d == b'+') && matches!(bytes[i - 1], b'e' | b'E');
                if d.is_ascii_digit() || d == b'.' || d == b'e' || d == b'E' || exponent_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            let literal = &text[start..i];
            let value = literal.parse::<f64>().map_err(|_| ParseError {
                offset: start,
                expected: vec!["number".into()],
                found: format!("{literal:?}"),
            })?;
            out.push((start, Tok::Number(value)));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: start,
                expected: vec!["S0".into(), "T0".into(), "identifier".into(), "number".into()],
                found: format!("{ch:?}"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

struct Arg {
    offset: usize,
    key: Option<String>,
    value: f64,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T> {
        Err(ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
        .into())
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[name])
        }
    }

    fn expr(&mut self) -> Result<DomainExpr> {
        let mut acc = self.term()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = acc.join(self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<DomainExpr> {
        const TERM_START: [&str; 10] = [
            "S0", "T0", "Sphere", "T", "HalfSphere", "Arc", "RegularT", "Cap", "Sector", "(",
        ];
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(inner)
            }
            Tok::Ident(name) if name == "S0" => {
                self.bump();
                Ok(DomainExpr::S0)
            }
            Tok::Ident(name) if name == "T0" => {
                self.bump();
                Ok(DomainExpr::T0)
            }
            Tok::Ident(name) if NAMED.contains(&name.as_str()) => {
                self.bump();
                self.named(&name)
            }
            _ => self.error(&TERM_START),
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.peek().clone() {
            Tok::Number(v) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    self.pi()?;
                    return Ok(v * PI * self.divisor()?);
                }
                Ok(v)
            }
            Tok::Ident(s) if s == "pi" => {
                self.bump();
                Ok(PI * self.divisor()?)
            }
            _ => self.error(&["number", "pi"]),
        }
    }

    fn pi(&mut self) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == "pi" => {
                self.bump();
                Ok(())
            }
            _ => self.error(&["pi"]),
        }
    }

    /// Optional "/ float" after pi; returns the reciprocal factor.
    fn divisor(&mut self) -> Result<f64> {
        if *self.peek() != Tok::Slash {
            return Ok(1.0);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Number(d) if d != 0.0 => {
                self.bump();
                Ok(1.0 / d)
            }
            _ => self.error(&["nonzero number"]),
        }
    }

    fn arglist(&mut self) -> Result<Vec<Arg>> {
        self.expect(Tok::LParen, "\"(\"")?;
        let mut args = Vec::new();
        loop {
            let offset = self.offset();
            let key = match (self.peek().clone(), self.toks.get(self.pos + 1).map(|t| &t.1)) {
                (Tok::Ident(k), Some(Tok::Eq)) if k != "pi" => {
                    self.bump();
                    self.bump();
                    Some(k)
                }
                _ => None,
            };
            let value = self.number()?;
            args.push(Arg { offset, key, value });
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.error(&["\",\"", "\")\""]),
            }
        }
    }

    fn named(&mut self, name: &str) -> Result<DomainExpr> {
        let args = self.arglist()?;
        let params: &[&str] = match name {
            "Sphere" | "T" | "HalfSphere" => &["n"],
            "Arc" => &["angle"],
            "RegularT" => &["n", "rho"],
            // a lone positional argument is the radius on S²
            "Cap" if args.len() == 1 && args[0].key.is_none() => &["theta"],
            "Cap" => &["n", "theta"],
            "Sector" => &["theta", "phi"],
            _ => unreachable!("checked by the caller"),
        };
        let vals = bind(params, &args)?;
        let get = |key: &str| -> Option<f64> {
            params.iter().position(|p| *p == key).and_then(|i| vals[i])
        };
        let optional = |p: &str| name == "Cap" && p == "n";
        let missing: Vec<String> = params
            .iter()
            .zip(&vals)
            .filter(|(p, v)| v.is_none() && !optional(p))
            .map(|(p, _)| format!("{p}="))
            .collect();
        if !missing.is_empty() {
            return Err(ParseError {
                offset: self.toks[self.pos - 1].0,
                expected: missing,
                found: "\")\"".into(),
            }
            .into());
        }
        let n_of = |domain: &'static str| -> Result<u32> {
            let v = get("n").unwrap_or(3.0);
            if v.fract() != 0.0 || v > u32::MAX as f64 {
                return Err(Error::InvalidParameter {
                    name: "n",
                    value: v,
                    reason: "must be an integer",
                });
            }
            if v < 1.0 {
                return Err(Error::Dimension {
                    domain,
                    n: v as i64,
                    min: 1,
                });
            }
            Ok(v as u32)
        };
        let named = match name {
            "Sphere" => NamedDomain::Sphere { n: n_of("Sphere")? },
            "T" => NamedDomain::T { n: n_of("T")? },
            "HalfSphere" => NamedDomain::HalfSphere { n: n_of("HalfSphere")? },
            "Arc" => NamedDomain::Arc {
                angle: get("angle").expect("bound"),
            },
            "RegularT" => NamedDomain::RegularT {
                n: n_of("RegularT")?,
                rho: get("rho").expect("bound"),
            },
            "Cap" => NamedDomain::Cap {
                n: n_of("Cap")?,
                theta: get("theta").expect("bound"),
            },
            "Sector" => NamedDomain::Sector {
                theta: get("theta").expect("bound"),
                phi: get("phi").expect("bound"),
            },
            _ => unreachable!(),
        };
        Ok(DomainExpr::Named(named.validated()?))
    }
}

/// Assigns positional arguments in order, then keyed ones by name.
fn bind(params: &[&str], args: &[Arg]) -> Result<Vec<Option<f64>>> {
    let mut vals = vec![None; params.len()];
    let mut next = 0;
    for arg in args {
        let slot = match &arg.key {
            None => {
                if next >= params.len() {
                    return Err(ParseError {
                        offset: arg.offset,
                        expected: vec!["\")\"".into()],
                        found: "extra argument".into(),
                    }
                    .into());
                }
                next += 1;
                next - 1
            }
            Some(k) => params.iter().position(|p| p == k).ok_or_else(|| ParseError {
                offset: arg.offset,
                expected: params.iter().map(|p| format!("{p}=")).collect(),
                found: format!("{k:?}"),
            })?,
        };
        if vals[slot].is_some() {
            return Err(ParseError {
                offset: arg.offset,
                expected: params.iter().map(|p| format!("{p}=")).collect(),
                found: format!("repeated {}", params[slot]),
            }
            .into());
        }
        vals[slot] = Some(arg.value);
    }
    Ok(vals)
}

/// Parses a domain expression such as `Arc(angle=pi/3) * T0` or
/// `RegularT(3, rho=0.5)`.
pub fn parse_domain(text: &str) -> Result<DomainExpr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let expr = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(&["\"*\"", "end of input"]);
    }
    Ok(expr)
}
