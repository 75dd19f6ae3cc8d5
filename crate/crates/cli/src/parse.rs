//! Text grammars for ellipsoid shapes, homology classes and small tuples.

use num::rational::BigRational;
use num::traits::Zero;
use thiserror::Error;

use cuspcount::blowup::{BlowupClass, SurfaceBase};
use cuspcount::{EllipsoidShape, LatticeTuple, PerturbedRational, ReebOrbit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {}: {message}", position + 1)]
pub struct ParseError {
    /// Zero-based byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        Self {
            position,
            message: message.into(),
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, pos: usize) -> Self {
        Self { text, pos }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }
}

fn parse_rational_at(c: &mut Cursor<'_>) -> Result<BigRational, ParseError> {
    let start = c.pos;
    let numer = c.digits().ok_or_else(|| c.error("expected a number"))?;
    let numer: BigRational = BigRational::from_integer(numer.parse().expect("digits"));
    if c.eat('/') {
        let denom = c
            .digits()
            .ok_or_else(|| c.error("expected a denominator"))?;
        let denom: BigRational = BigRational::from_integer(denom.parse().expect("digits"));
        if denom.is_zero() {
            return Err(ParseError::new(start, "zero denominator"));
        }
        return Ok(numer / denom);
    }
    Ok(numer)
}

/// One factor: `r`, `r+`, `r-`, or `r` followed by terms `±k*eps^d`.
fn parse_factor(text: &str, offset: usize) -> Result<PerturbedRational, ParseError> {
    let mut c = Cursor::new(text, 0);
    let err = |c: &Cursor<'_>, m: &str| ParseError::new(offset + c.pos, m);
    c.skip_ws();
    if c.at_end() {
        return Err(err(&c, "empty entry"));
    }
    let shift = |e: ParseError| ParseError::new(offset + e.position, e.message);
    let mut value = PerturbedRational::from_rational(parse_rational_at(&mut c).map_err(shift)?);
    loop {
        c.skip_ws();
        let sign = if c.eat('+') {
            1
        } else if c.eat('-') {
            -1
        } else if c.at_end() {
            return Ok(value);
        } else {
            return Err(err(&c, "expected '+', '-' or ','"));
        };
        c.skip_ws();
        if c.at_end() {
            value = value + PerturbedRational::delta().scale_int(sign);
            return Ok(value);
        }
        let coefficient = if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
            let k = parse_rational_at(&mut c).map_err(shift)?;
            c.skip_ws();
            if !c.eat('*') {
                return Err(err(&c, "expected '*' before eps"));
            }
            c.skip_ws();
            k
        } else {
            BigRational::from_integer(1.into())
        };
        if !(c.eat_str("eps") || c.eat('δ')) {
            return Err(err(&c, "expected eps"));
        }
        let power = if c.eat('^') {
            let d = c.digits().ok_or_else(|| err(&c, "expected an exponent"))?;
            d.parse::<usize>()
                .map_err(|_| err(&c, "exponent too large"))?
        } else {
            1
        };
        if power == 0 {
            return Err(err(&c, "exponent must be positive"));
        }
        let signed = BigRational::from_integer(sign.into()) * coefficient;
        value = value + PerturbedRational::delta_pow(power).scale(&signed);
    }
}

/// A single value such as `44`, `3/2+eps` or `1-2*eps^2`.
pub fn parse_perturbed(text: &str) -> Result<PerturbedRational, ParseError> {
    parse_factor(text, 0)
}

/// Comma-separated factors; `+`/`-` alone stand for `±δ`.
pub fn parse_shape(text: &str) -> Result<EllipsoidShape, ParseError> {
    let mut factors = Vec::new();
    let mut offset = 0;
    for entry in text.split(',') {
        let factor = parse_factor(entry, offset)?;
        if !factor.is_positive() {
            return Err(ParseError::new(
                offset,
                format!("factor {factor} is not positive"),
            ));
        }
        factors.push(factor);
        offset += entry.len() + 1;
    }
    EllipsoidShape::new(factors).map_err(|e| ParseError::new(0, e.to_string()))
}

/// Comma-separated positive integers, e.g. `3,2`.
pub fn parse_tuple(text: &str) -> Result<LatticeTuple, ParseError> {
    let mut entries = Vec::new();
    let mut offset = 0;
    for entry in text.split(',') {
        let trimmed = entry.trim();
        let v: u64 = trimmed.parse().map_err(|_| {
            ParseError::new(offset, format!("'{trimmed}' is not a positive integer"))
        })?;
        entries.push(v);
        offset += entry.len() + 1;
    }
    LatticeTuple::new(entries).map_err(|e| ParseError::new(0, e.to_string()))
}

/// Semicolon-separated tuples, e.g. `2,1;1,1`.
pub fn parse_tuples(text: &str) -> Result<Vec<LatticeTuple>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        out.push(parse_tuple(chunk).map_err(|e| ParseError::new(offset + e.position, e.message))?);
        offset += chunk.len() + 1;
    }
    Ok(out)
}

/// Orbits written `axis^mult` (or `axis` for multiplicity one), comma separated.
pub fn parse_orbits(text: &str) -> Result<Vec<ReebOrbit>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for entry in text.split(',') {
        let trimmed = entry.trim();
        let (axis, mult) = trimmed.split_once('^').unwrap_or((trimmed, "1"));
        let bad = || ParseError::new(offset, format!("'{trimmed}' is not of the form axis^mult"));
        let axis: usize = axis.trim().parse().map_err(|_| bad())?;
        let mult: u64 = mult.trim().parse().map_err(|_| bad())?;
        if axis == 0 || mult == 0 {
            return Err(bad());
        }
        out.push(ReebOrbit::new(axis, mult));
        offset += entry.len() + 1;
    }
    Ok(out)
}

/// Classes like `5l-2e` on `F_1`, `3L-e1-e2` on `CP²`; `e<i>` is the
/// `i`-th exceptional sphere of a blowup.
pub fn parse_class(text: &str, base: SurfaceBase) -> Result<BlowupClass, ParseError> {
    let mut c = Cursor::new(text, 0);
    let mut base_coeffs = vec![0i64; base.rank()];
    let mut exc: Vec<i64> = Vec::new();
    let mut first = true;
    loop {
        c.skip_ws();
        if c.at_end() {
            break;
        }
        let term_start = c.pos;
        let sign = if c.eat('+') {
            1
        } else if c.eat('-') {
            -1
        } else if first {
            1
        } else {
            return Err(c.error("expected '+' or '-'"));
        };
        first = false;
        c.skip_ws();
        let coefficient: i64 = match c.digits() {
            Some(d) => d
                .parse()
                .map_err(|_| ParseError::new(term_start, "coefficient too large"))?,
            None => 1,
        };
        let value = sign * coefficient;
        let name_pos = c.pos;
        let name = c.peek().ok_or_else(|| c.error("expected a generator"))?;
        c.pos += name.len_utf8();
        let index = c.digits();
        match (name, index, base) {
            ('L' | 'l', None, _) => base_coeffs[0] += value,
            ('e', None, SurfaceBase::F1) => base_coeffs[1] -= value,
            ('e' | 'E', Some(i), _) => {
                let i: usize = i
                    .parse()
                    .map_err(|_| ParseError::new(name_pos, "index too large"))?;
                if i == 0 {
                    return Err(ParseError::new(
                        name_pos,
                        "exceptional spheres are numbered from 1",
                    ));
                }
                if exc.len() < i {
                    exc.resize(i, 0);
                }
                exc[i - 1] -= value;
            }
            _ => {
                return Err(ParseError::new(
                    name_pos,
                    format!("unknown generator '{name}' for {base:?}"),
                ))
            }
        }
    }
    if first {
        return Err(ParseError::new(0, "empty class"));
    }
    BlowupClass::new(base, base_coeffs, exc).map_err(|e| ParseError::new(0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> PerturbedRational {
        PerturbedRational::from_int(v)
    }

    #[test]
    fn shapes() {
        let a = parse_shape("2,3+").unwrap();
        assert_eq!(a.factors(), &[int(2), int(3) + PerturbedRational::delta()]);
        let a = parse_shape("1,8+").unwrap();
        assert_eq!(a.factors()[1], int(8) + PerturbedRational::delta());
        assert_eq!(
            parse_shape("8,13,22").unwrap(),
            EllipsoidShape::from_ints(&[8, 13, 22]).unwrap()
        );
        let a = parse_shape("1,1+eps,1+2*eps^2").unwrap();
        assert_eq!(
            a.factors()[2],
            int(1) + PerturbedRational::delta_pow(2).scale_int(2)
        );
        let a = parse_shape("3/2-, 5").unwrap();
        assert_eq!(
            a.factors(),
            &[
                PerturbedRational::from_ratio(3, 2) - PerturbedRational::delta(),
                int(5)
            ]
        );
        assert_eq!(
            parse_shape("1,1+eps^2").unwrap().factors()[1],
            int(1) + PerturbedRational::delta_pow(2)
        );
    }

    #[test]
    fn shape_errors_carry_positions() {
        assert_eq!(parse_shape("2,x").unwrap_err().position, 2);
        assert_eq!(parse_shape("2,3+k").unwrap_err().position, 4);
        assert_eq!(parse_shape("2,,3").unwrap_err().position, 2);
        assert!(parse_shape("1/0").is_err());
        assert!(parse_shape("0").is_err());
    }

    #[test]
    fn classes() {
        let a = parse_class("5l-2e", SurfaceBase::F1).unwrap();
        assert_eq!(a, BlowupClass::f1(5, 2, vec![]));
        let a = parse_class("3L - e1 - 2e3", SurfaceBase::Cp2).unwrap();
        assert_eq!(a, BlowupClass::cp2(3, vec![1, 0, 2]));
        assert_eq!(
            parse_class("e", SurfaceBase::F1).unwrap(),
            BlowupClass::f1(0, -1, vec![])
        );
        assert!(parse_class("e", SurfaceBase::Cp2).is_err());
        assert!(parse_class("5x", SurfaceBase::F1).is_err());
        assert!(parse_class("", SurfaceBase::F1).is_err());
    }

    #[test]
    fn tuples_and_orbits() {
        assert_eq!(parse_tuple("3,2").unwrap().entries(), &[3, 2]);
        assert_eq!(parse_tuples("2,1;1,1").unwrap().len(), 2);
        assert_eq!(parse_tuples("2,1;1,x").unwrap_err().position, 6);
        assert_eq!(
            parse_orbits("1^2, 2").unwrap(),
            vec![ReebOrbit::new(1, 2), ReebOrbit::new(2, 1)]
        );
        assert!(parse_orbits("0^1").is_err());
    }
}
