//! Extended max-plus scalars: exact rationals plus the two infinities.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseScalarError;

/// An element of ℝ ∪ {−∞, +∞}.
///
/// Finite values are exact rationals, so equality and ordering are decidable.
/// Variant order gives the total order `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedScalar {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtendedScalar {
    /// The max-plus unit, `0`.
    pub fn zero() -> Self {
        ExtendedScalar::Finite(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        ExtendedScalar::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        ExtendedScalar::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtendedScalar::NegInf)
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, ExtendedScalar::PosInf)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedScalar::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedScalar::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Strictly greater than the unit `0`.
    pub fn is_positive(&self) -> bool {
        match self {
            ExtendedScalar::NegInf => false,
            ExtendedScalar::Finite(v) => v.is_positive(),
            ExtendedScalar::PosInf => true,
        }
    }

    pub fn oplus(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `−∞` is absorbing, even against `+∞`.
    pub fn otimes(&self, other: &Self) -> Self {
        use ExtendedScalar::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    /// Scalar Kleene star: `0` when the value is at most `0`, `+∞` otherwise.
    pub fn star(&self) -> Self {
        if self.is_positive() {
            ExtendedScalar::PosInf
        } else {
            ExtendedScalar::zero()
        }
    }
}

impl From<BigRational> for ExtendedScalar {
    fn from(v: BigRational) -> Self {
        ExtendedScalar::Finite(v)
    }
}

impl From<i64> for ExtendedScalar {
    fn from(v: i64) -> Self {
        ExtendedScalar::from_int(v)
    }
}

pub fn scalar_oplus(a: &ExtendedScalar, b: &ExtendedScalar) -> ExtendedScalar {
    a.oplus(b)
}

pub fn scalar_otimes(a: &ExtendedScalar, b: &ExtendedScalar) -> ExtendedScalar {
    a.otimes(b)
}

impl fmt::Display for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedScalar::NegInf => f.write_str("-inf"),
            ExtendedScalar::PosInf => f.write_str("+inf"),
            ExtendedScalar::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl FromStr for ExtendedScalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "-inf" => Ok(ExtendedScalar::NegInf),
            "+inf" | "inf" => Ok(ExtendedScalar::PosInf),
            t => parse_rational(t).map(ExtendedScalar::Finite),
        }
    }
}

/// Parses `"-13.999"`, `"7"`, `"+2.5"` or `"-3/4"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseScalarError> {
    let bad = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(bad)?;
        let den = parse_integer(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(numer, denom))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

/// Exact textual form: an integer, a terminating decimal, or `p/q`.
///
/// The output always parses back to the same value through [`parse_rational`].
pub fn format_rational(v: &BigRational) -> String {
    if v.is_integer() {
        return v.numer().to_string();
    }
    let denom = v.denom();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut rest = denom.clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&rest % &two).is_zero() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", v.numer(), denom);
    }
    let places = twos.max(fives);
    let scale = BigInt::from(10u32).pow(places);
    let scaled = v.numer() * &scale / denom;
    let sign = if scaled.is_negative() { "-" } else { "" };
    let magnitude = scaled.abs();
    let int_part = &magnitude / &scale;
    let frac_part = &magnitude % &scale;
    format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part.to_string(),
        width = places as usize
    )
}
