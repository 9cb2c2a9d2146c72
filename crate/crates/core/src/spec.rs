//! Text form of target functions.
//!
//! ```text
//! exp | exp:c               e^(c z), c = 1 by default
//! affine:c                  1 + c z
//! geometric:c               1 / (1 - c z)
//! taylor:a0,a1,...          a0 + a1 z + ...      (the prefix is optional)
//! rational:n0,n1,.../d0,... numerator / denominator
//! ```
//!
//! Complex numbers are written `1.5`, `-2i`, `i`, `0.3-0.4i`, `1e-3+2e-2i`.
//! The Unicode minus sign is accepted in place of `-`. Error positions are
//! counted in characters from the start of the input.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::target::{Affine, AnalyticFunction, Exp, Geometric, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Exp(Complex64),
    Affine(Complex64),
    Geometric(Complex64),
    Taylor(Vec<Complex64>),
    Rational {
        num: Vec<Complex64>,
        den: Vec<Complex64>,
    },
}

impl FunctionSpec {
    pub fn to_function(&self) -> Box<dyn AnalyticFunction + Send> {
        match self {
            Self::Exp(c) => Box::new(Exp(*c)),
            Self::Affine(c) => Box::new(Affine(*c)),
            Self::Geometric(c) => Box::new(Geometric(*c)),
            Self::Taylor(a) => Box::new(Polynomial(a.clone())),
            Self::Rational { num, den } => Box::new(Rational {
                num: num.clone(),
                den: den.clone(),
            }),
        }
    }
}

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    /// Offset of `chars[0]` within the original input.
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(chars: &'a [char], base: usize) -> Self {
        Self {
            chars,
            pos: 0,
            base,
        }
    }

    fn at(&self) -> usize {
        self.base + self.pos
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn sign(&mut self) -> Option<f64> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(1.0)
            }
            Some('-' | '\u{2212}') => {
                self.pos += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Unsigned decimal literal, or `None` if no digits start here.
    fn magnitude(&mut self) -> std::result::Result<Option<f64>, ParseError> {
        let start = self.pos;
        let mut n = self.digits();
        if self.peek() == Some('.') {
            self.pos += 1;
            n += self.digits();
        }
        if n == 0 {
            self.pos = start;
            return Ok(None);
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let e_at = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-' | '\u{2212}')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                return err(self.base + e_at, "exponent has no digits");
            }
        }
        let text: String = self.chars[start..self.pos]
            .iter()
            .map(|&c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => err(self.base + start, format!("number out of range: {text}")),
        }
    }

    fn imag_unit(&mut self) -> bool {
        if matches!(self.peek(), Some('i' | 'j')) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// One complex literal; leading and trailing whitespace is skipped.
    fn complex(&mut self) -> std::result::Result<Complex64, ParseError> {
        self.skip_ws();
        let start = self.at();
        let s1 = self.sign().unwrap_or(1.0);
        let m1 = self.magnitude()?;
        if self.imag_unit() {
            self.skip_ws();
            return Ok(Complex64::new(0.0, s1 * m1.unwrap_or(1.0)));
        }
        let Some(re) = m1 else {
            return err(start, "expected a number");
        };
        let re = s1 * re;
        let Some(s2) = self.sign() else {
            self.skip_ws();
            return Ok(Complex64::new(re, 0.0));
        };
        let m2 = self.magnitude()?.unwrap_or(1.0);
        if !self.imag_unit() {
            return err(self.at(), "expected 'i' after the imaginary part");
        }
        self.skip_ws();
        Ok(Complex64::new(re, s2 * m2))
    }

    fn done(&self) -> bool {
        self.pos == self.chars.len()
    }
}

/// Parses one complex literal such as `0.3-0.4i`.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut cur = Cursor::new(&chars, 0);
    let z = cur.complex()?;
    if !cur.done() {
        return err(cur.at(), "unexpected trailing input");
    }
    Ok(z)
}

fn parse_list_at(chars: &[char], base: usize) -> std::result::Result<Vec<Complex64>, ParseError> {
    let mut out = Vec::new();
    let mut start = 0;
    for (k, &c) in chars.iter().chain(std::iter::once(&',')).enumerate() {
        if c != ',' {
            continue;
        }
        let piece = &chars[start..k.min(chars.len())];
        if piece.iter().all(|c| c.is_whitespace()) {
            return err(base + start, "empty coefficient");
        }
        let mut cur = Cursor::new(piece, base + start);
        let z = cur.complex()?;
        if !cur.done() {
            return err(cur.at(), "unexpected character in coefficient");
        }
        out.push(z);
        start = k + 1;
    }
    Ok(out)
}

/// Comma-separated complex literals.
pub fn parse_complex_list(text: &str) -> std::result::Result<Vec<Complex64>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    parse_list_at(&chars, 0)
}

fn nonzero_constant(
    list: &[Complex64],
    at: usize,
    what: &str,
) -> std::result::Result<(), ParseError> {
    if list[0] == Complex64::new(0.0, 0.0) {
        return err(
            at,
            format!("{what} has zero constant term; the target must not vanish at 0"),
        );
    }
    Ok(())
}

pub fn parse_function_spec(text: &str) -> std::result::Result<FunctionSpec, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let lead = chars.iter().take_while(|c| c.is_whitespace()).count();
    let end = chars.len() - chars.iter().rev().take_while(|c| c.is_whitespace()).count();
    if lead >= end {
        return err(0, "empty function spec");
    }
    let body = &chars[lead..end];
    let (name, rest_at) = match body.iter().position(|&c| c == ':') {
        Some(k) => (body[..k].iter().collect::<String>(), Some(k + 1)),
        None => (body.iter().collect::<String>(), None),
    };
    let rest = rest_at.map(|k| (&body[k..], lead + k));
    let single = |what: &str| -> std::result::Result<Complex64, ParseError> {
        match rest {
            Some((r, at)) => {
                let mut cur = Cursor::new(r, at);
                let z = cur.complex()?;
                if !cur.done() {
                    return err(
                        cur.at(),
                        format!("unexpected trailing input after {what} parameter"),
                    );
                }
                Ok(z)
            }
            None => err(
                lead + body.len(),
                format!("{what} needs a parameter, as in {what}:0.5"),
            ),
        }
    };
    match name.trim() {
        "exp" => match rest {
            None => Ok(FunctionSpec::Exp(Complex64::new(1.0, 0.0))),
            Some(_) => Ok(FunctionSpec::Exp(single("exp")?)),
        },
        "affine" => Ok(FunctionSpec::Affine(single("affine")?)),
        "geometric" => Ok(FunctionSpec::Geometric(single("geometric")?)),
        "taylor" | "rational" if rest.is_none() => err(
            lead + body.len(),
            format!("{} needs coefficients after ':'", name.trim()),
        ),
        "taylor" => {
            let (r, at) = rest.expect("checked above");
            let a = parse_list_at(r, at)?;
            nonzero_constant(&a, at, "taylor series")?;
            Ok(FunctionSpec::Taylor(a))
        }
        "rational" => {
            let (r, at) = rest.expect("checked above");
            let Some(slash) = r.iter().position(|&c| c == '/') else {
                return err(at + r.len(), "rational needs numerator/denominator");
            };
            let num = parse_list_at(&r[..slash], at)?;
            let den = parse_list_at(&r[slash + 1..], at + slash + 1)?;
            nonzero_constant(&num, at, "numerator")?;
            nonzero_constant(&den, at + slash + 1, "denominator")?;
            Ok(FunctionSpec::Rational { num, den })
        }
        _ if rest_at.is_none() => {
            let a = parse_list_at(body, lead)?;
            nonzero_constant(&a, lead, "taylor series")?;
            Ok(FunctionSpec::Taylor(a))
        }
        other => err(lead, format!("unknown function kind '{other}'")),
    }
}

/// Reads a spec from a file. `#` starts a comment; the remaining lines are
/// joined with commas, so a coefficient list may be written one per line.
pub fn parse_function_spec_file(path: &Path) -> Result<FunctionSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let joined = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(",");
    Ok(parse_function_spec(&joined)?)
}

/// `@path` reads a file, anything else is parsed in place.
pub fn resolve_function_spec(arg: &str) -> Result<FunctionSpec> {
    match arg.strip_prefix('@') {
        Some(path) => parse_function_spec_file(Path::new(path)),
        None => Ok(parse_function_spec(arg)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_tokens() {
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex(" 2i ").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_complex("0.3-0.4i").unwrap(), c(0.3, -0.4));
        assert_eq!(parse_complex("1e-3+2e-2i").unwrap(), c(1e-3, 2e-2));
        assert_eq!(parse_complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(parse_complex("\u{2212}2").unwrap(), c(-2.0, 0.0));
        assert_eq!(parse_complex(".5").unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn bad_tokens() {
        assert_eq!(parse_complex("").unwrap_err().position, 0);
        assert_eq!(parse_complex("1+2").unwrap_err().position, 3);
        assert_eq!(parse_complex("1e").unwrap_err().position, 1);
        assert!(parse_complex("nan").is_err());
        assert!(parse_complex("1e999").is_err());
        assert!(parse_complex("1 2").is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(
            parse_function_spec("exp").unwrap(),
            FunctionSpec::Exp(c(1.0, 0.0))
        );
        assert_eq!(
            parse_function_spec("exp:0.5i").unwrap(),
            FunctionSpec::Exp(c(0.0, 0.5))
        );
        assert_eq!(
            parse_function_spec("1, 0.5").unwrap(),
            FunctionSpec::Taylor(vec![c(1.0, 0.0), c(0.5, 0.0)])
        );
        assert_eq!(
            parse_function_spec("\u{2212}2,1").unwrap(),
            FunctionSpec::Taylor(vec![c(-2.0, 0.0), c(1.0, 0.0)])
        );
        assert_eq!(
            parse_function_spec("rational:1/1,-0.5").unwrap(),
            FunctionSpec::Rational {
                num: vec![c(1.0, 0.0)],
                den: vec![c(1.0, 0.0), c(-0.5, 0.0)]
            }
        );
        assert_eq!(
            parse_function_spec("geometric:0.5").unwrap(),
            FunctionSpec::Geometric(c(0.5, 0.0))
        );
    }

    #[test]
    fn rejects_zero_constant_term() {
        let e = parse_function_spec("0, 1").unwrap_err();
        assert!(e.message.contains("zero constant term"));
        assert!(parse_function_spec("taylor:0").is_err());
        assert!(parse_function_spec("rational:1/0,1").is_err());
    }

    #[test]
    fn positions_point_at_the_problem() {
        assert_eq!(parse_function_spec("1, 2, x").unwrap_err().position, 6);
        assert_eq!(parse_function_spec("taylor:1,,2").unwrap_err().position, 9);
        assert_eq!(parse_function_spec("bogus:1").unwrap_err().position, 0);
        assert_eq!(parse_function_spec("affine").unwrap_err().position, 6);
        assert_eq!(parse_function_spec("   ").unwrap_err().position, 0);
        assert_eq!(parse_function_spec("taylor").unwrap_err().position, 6);
        assert!(parse_function_spec("rational").is_err());
    }

    #[test]
    fn file_specs() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        std::fs::write(&p, "# coefficients\n1\n0.5-0.5i\n").unwrap();
        assert_eq!(
            resolve_function_spec(&format!("@{}", p.display())).unwrap(),
            FunctionSpec::Taylor(vec![c(1.0, 0.0), c(0.5, -0.5)])
        );
        assert!(resolve_function_spec("@/definitely/not/here").is_err());
    }
}
