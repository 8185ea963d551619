//! Exact rationals extended with negative infinity.
//!
//! Thresholds live in `Q ∪ {−∞}`; weights are always finite. Weighted sums
//! over an empty body are `−∞`, which is what lets facts fire on the empty
//! interpretation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite exact rational. Always kept in canonical form (reduced,
/// positive denominator) by `num_rational`.
pub type Rational = BigRational;

/// Either `−∞` or a finite rational. The derived order puts `NegInfinity`
/// below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedRational {
    NegInfinity,
    Finite(Rational),
}

impl ExtendedRational {
    pub fn zero() -> Self {
        Self::Finite(Rational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::Finite(Rational::from_integer(BigInt::from(n)))
    }

    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, Self::NegInfinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Self::NegInfinity => None,
            Self::Finite(q) => Some(q),
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(q: Rational) -> Self {
        Self::Finite(q)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::Finite(q) => write!(f, "{}", q),
        }
    }
}

/// `x ≥ y` under the total order of `Q ∪ {−∞}`.
pub fn ext_ge(x: &ExtendedRational, y: &ExtendedRational) -> bool {
    x.cmp(y) != Ordering::Less
}

/// Sum of `weight · [active]`. The empty sum is `−∞`; a nonempty list whose
/// terms are all inactive sums to `0`.
pub fn weighted_sum<'a, I>(terms: I) -> ExtendedRational
where
    I: IntoIterator<Item = (&'a Rational, bool)>,
{
    let mut acc: Option<Rational> = None;
    for (w, active) in terms {
        let sum = acc.get_or_insert_with(Rational::zero);
        if active {
            *sum += w;
        }
    }
    match acc {
        None => ExtendedRational::NegInfinity,
        Some(q) => ExtendedRational::Finite(q),
    }
}

/// Error returned when a rational literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal '{0}'")]
pub struct RationalParseError(pub String);

/// Parses `-?digits`, `-?digits/digits` or `-?digits.digits` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let value = if let Some((num, den)) = body.split_once('/') {
        if !all_digits(num) || !all_digits(den) {
            return Err(err());
        }
        let den = BigInt::from_str(den).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Rational::new(BigInt::from_str(num).map_err(|_| err())?, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        if !all_digits(int) || !all_digits(frac) {
            return Err(err());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let digits = format!("{int}{frac}");
        Rational::new(BigInt::from_str(&digits).map_err(|_| err())?, scale)
    } else {
        if !all_digits(body) {
            return Err(err());
        }
        Rational::from_integer(BigInt::from_str(body).map_err(|_| err())?)
    };
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p` when the denominator is one, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Always `p/q`, even for integers. Used by the JSON export.
pub fn format_rational_pq(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn format_extended_pq(x: &ExtendedRational) -> String {
    match x {
        ExtendedRational::NegInfinity => "-inf".to_string(),
        ExtendedRational::Finite(q) => format_rational_pq(q),
    }
}

pub fn is_positive(q: &Rational) -> bool {
    q.is_positive()
}

/// Convenience constructor used throughout the tests.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
