//! Exact rationals extended by a positive infinitesimal `δ`.
//!
//! A [`PerturbedRational`] is a polynomial `c_0 + c_1 δ + … + c_d δ^d` with
//! rational coefficients. Values are ordered lexicographically on the
//! coefficient list, which is the order they have for every sufficiently
//! small positive `δ`. Nothing in this module ever evaluates `δ`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `c_0 + c_1 δ + … + c_d δ^d` in canonical form (no trailing zeros).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PerturbedRational {
    coeffs: Vec<BigRational>,
}

impl PerturbedRational {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut out = Self { coeffs };
        out.trim();
        out
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(BigRational::from_integer(value.into()))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self::from_coeffs(vec![value])
    }

    /// The infinitesimal itself.
    pub fn delta() -> Self {
        Self::delta_pow(1)
    }

    /// `δ^power`.
    pub fn delta_pow(power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = BigRational::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `δ^power` (zero past the stored degree).
    pub fn coeff(&self, power: usize) -> BigRational {
        self.coeffs
            .get(power)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The value at `δ = 0`.
    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    /// Degree in `δ`; zero for constants including zero itself.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff the value has no `δ` terms.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.constant_term())
    }

    /// Sign for all sufficiently small `δ > 0`.
    pub fn signum(&self) -> Ordering {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => Ordering::Equal,
            Some(c) if c.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&BigRational::from_integer(factor.into()))
    }

    /// Evaluates at a concrete rational `δ`. Intended for oracles and tests.
    pub fn eval(&self, delta: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * delta + c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

/// `⌊x / y⌋` for all sufficiently small `δ > 0`, restricted to operands of
/// degree at most one.
pub fn floor_ratio(x: &PerturbedRational, y: &PerturbedRational) -> Result<BigInt> {
    for operand in [x, y] {
        if operand.degree() > 1 {
            return Err(Error::UnsupportedDegree {
                degree: operand.degree(),
            });
        }
    }
    floor_quotient(x, y)
}

/// `⌊x / y⌋` for all sufficiently small `δ > 0`, any degree.
///
/// The quotient tends to `c = x(0)/y(0)`. Away from integers the floor is
/// `⌊c⌋`; at an integer `N` it is `N` or `N - 1` according to the sign of
/// `x - N·y`.
pub fn floor_quotient(x: &PerturbedRational, y: &PerturbedRational) -> Result<BigInt> {
    if !y.is_positive() {
        return Err(Error::domain(format!("divisor {y} is not positive")));
    }
    let y0 = y.constant_term();
    if y0.is_zero() {
        return Err(Error::domain(format!(
            "divisor {y} is infinitesimal; the quotient is unbounded"
        )));
    }
    let limit = x.constant_term() / y0;
    if !limit.is_integer() {
        return Ok(limit.floor().to_integer());
    }
    let n = limit.to_integer();
    let remainder = x - &y.scale(&BigRational::from_integer(n.clone()));
    Ok(match remainder.signum() {
        Ordering::Less => n - 1,
        _ => n,
    })
}

impl Ord for PerturbedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.coeffs.len().max(other.coeffs.len());
        for i in 0..len {
            let ord = self.coeff(i).cmp(&other.coeff(i));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for PerturbedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add<&PerturbedRational> for &PerturbedRational {
    type Output = PerturbedRational;

    fn add(self, rhs: &PerturbedRational) -> PerturbedRational {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PerturbedRational::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&PerturbedRational> for &PerturbedRational {
    type Output = PerturbedRational;

    fn sub(self, rhs: &PerturbedRational) -> PerturbedRational {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        PerturbedRational::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&PerturbedRational> for &PerturbedRational {
    type Output = PerturbedRational;

    fn mul(self, rhs: &PerturbedRational) -> PerturbedRational {
        if self.is_zero() || rhs.is_zero() {
            return PerturbedRational::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PerturbedRational::from_coeffs(coeffs)
    }
}

impl Neg for &PerturbedRational {
    type Output = PerturbedRational;

    fn neg(self) -> PerturbedRational {
        PerturbedRational {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr<PerturbedRational> for PerturbedRational {
            type Output = PerturbedRational;
            fn $method(self, rhs: PerturbedRational) -> PerturbedRational {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PerturbedRational> for PerturbedRational {
            type Output = PerturbedRational;
            fn $method(self, rhs: &PerturbedRational) -> PerturbedRational {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for PerturbedRational {
    type Output = PerturbedRational;

    fn neg(self) -> PerturbedRational {
        -&self
    }
}

impl std::iter::Sum for PerturbedRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(PerturbedRational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for PerturbedRational {
    fn from(value: i64) -> Self {
        Self::from_int(value)
    }
}

impl From<BigRational> for PerturbedRational {
    fn from(value: BigRational) -> Self {
        Self::from_rational(value)
    }
}

impl fmt::Display for PerturbedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let unit = magnitude.is_one() && power > 0;
            if !unit {
                write!(f, "{magnitude}")?;
            }
            match power {
                0 => {}
                1 => write!(f, "δ")?,
                _ => write!(f, "δ^{power}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PerturbedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PerturbedRational({self})")
    }
}

/// Formats a rational as `"n"` or `"n/d"`.
pub fn rational_to_string(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"n"` or `"n/d"` (optionally signed) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::domain(format!("malformed rational {text:?}"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(Error::domain(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders `value` as a decimal with `digits` fractional digits, rounding
/// half away from zero.
pub fn rational_to_decimal(value: &BigRational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(1.into(), 2.into()))
        .floor()
        .to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits
    )
}

#[derive(Serialize, Deserialize)]
struct CoeffsRepr {
    coeffs: Vec<String>,
}

impl Serialize for PerturbedRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsRepr {
            coeffs: self.coeffs.iter().map(rational_to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PerturbedRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CoeffsRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(PerturbedRational::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(c: &[i64]) -> PerturbedRational {
        PerturbedRational::from_coeffs(
            c.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    #[test]
    fn addition_examples() {
        assert_eq!(pr(&[3, 1]) + pr(&[3, -1]), pr(&[6]));
        assert_eq!((pr(&[3, 1]) + pr(&[3, 1])), pr(&[6, 2]));
        assert_eq!(PerturbedRational::zero() + pr(&[2, 0, 5]), pr(&[2, 0, 5]));
        assert_eq!((pr(&[3, 1]) + pr(&[3, -1])).coeffs().len(), 1);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(pr(&[1, 1]) * pr(&[1, -1]), pr(&[1, 0, -1]));
        assert_eq!(pr(&[3, 1]) * pr(&[2]), pr(&[6, 2]));
        assert_eq!(pr(&[2, 1]) * pr(&[3, 1]), pr(&[6, 5, 1]));
        assert!((pr(&[2, 1]) * PerturbedRational::zero()).is_zero());
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(pr(&[6, 2]).cmp(&pr(&[6, 1])), Ordering::Greater);
        assert_eq!(pr(&[6, -1]).cmp(&pr(&[6])), Ordering::Less);
        assert_eq!(pr(&[2]).cmp(&pr(&[3, 1])), Ordering::Less);
        assert!(PerturbedRational::delta_pow(2) < PerturbedRational::delta());
        assert!(PerturbedRational::zero() < PerturbedRational::delta_pow(5));
    }

    #[test]
    fn floor_ratio_examples() {
        // 6/(3+δ) = 2 - (2/3)δ + …
        assert_eq!(floor_ratio(&pr(&[6]), &pr(&[3, 1])).unwrap(), 1.into());
        assert_eq!(floor_ratio(&pr(&[6]), &pr(&[3, -1])).unwrap(), 2.into());
        assert_eq!(floor_ratio(&pr(&[7]), &pr(&[3])).unwrap(), 2.into());
        assert_eq!(floor_ratio(&pr(&[6]), &pr(&[3])).unwrap(), 2.into());
        assert_eq!(floor_ratio(&pr(&[-1]), &pr(&[3])).unwrap(), (-1).into());
    }

    #[test]
    fn floor_ratio_errors() {
        assert!(matches!(
            floor_ratio(&pr(&[1]), &pr(&[0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            floor_ratio(&pr(&[1]), &pr(&[-2, 1])),
            Err(Error::Domain(_))
        ));
        assert_eq!(
            floor_ratio(&pr(&[1, 0, 1]), &pr(&[1])),
            Err(Error::UnsupportedDegree { degree: 2 })
        );
        // The general quotient still handles it.
        assert_eq!(
            floor_quotient(&pr(&[2]), &pr(&[1, 0, 1])).unwrap(),
            1.into()
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(pr(&[6, 2]).to_string(), "6+2δ");
        assert_eq!(pr(&[3, -1]).to_string(), "3-δ");
        assert_eq!(pr(&[1, 0, 1]).to_string(), "1+δ^2");
        assert_eq!(pr(&[0, -1]).to_string(), "-δ");
        assert_eq!(PerturbedRational::zero().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let x = PerturbedRational::from_ratio(51, 23) + PerturbedRational::delta();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"coeffs":["51/23","1"]}"#);
        let back: PerturbedRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let unreduced: PerturbedRational =
            serde_json::from_str(r#"{"coeffs":["4/2","0"]}"#).unwrap();
        assert_eq!(unreduced, pr(&[2]));
    }

    #[test]
    fn decimal_rendering() {
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(rational_to_decimal(&third, 12), "0.333333333333");
        let two_thirds = BigRational::new((-2).into(), 3.into());
        assert_eq!(rational_to_decimal(&two_thirds, 4), "-0.6667");
        assert_eq!(
            rational_to_decimal(&BigRational::from_integer(5.into()), 2),
            "5.00"
        );
    }
}
