use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Exact rational numbers; always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Formats as `p/q`, or `p` when the denominator is 1.
pub fn format(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Integer power with possibly negative exponent. Panics on `0^k` with `k < 0`.
pub fn pow(q: &Rational, k: i64) -> Rational {
    let base = if k < 0 { q.recip() } else { q.clone() };
    let mut acc = one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reduced() {
        assert_eq!(format(&frac(6, -4)), "-3/2");
        assert_eq!(format(&frac(4, 2)), "2");
        assert_eq!(format(&zero()), "0");
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("-13/8").unwrap(), frac(-13, 8));
        assert_eq!(parse(" 7 ").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(pow(&int(2), -3), frac(1, 8));
        assert_eq!(pow(&frac(-1, 3), 2), frac(1, 9));
        assert_eq!(pow(&int(5), 0), one());
    }
}
