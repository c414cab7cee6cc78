//! Exact rationals (normalized, positive denominator) and their text forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Always `num/den`, even for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Accepts `a/b`, an integer, or a decimal with at most six fractional
/// digits (converted exactly).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |why: &str| Error::Parse {
        line: 0,
        message: format!("invalid rational `{s}`: {why}"),
    };
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("decimals take 1 to 6 fractional digits"));
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let whole: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            whole_digits.parse().map_err(|_| bad("integer part"))?
        };
        let frac_val: BigInt = frac.parse().map_err(|_| bad("fraction"))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mut r = Rational::new(whole * &scale + frac_val, scale);
        if negative {
            r = -r;
        }
        return Ok(r);
    }
    let v: BigInt = s.parse().map_err(|_| bad("not a number"))?;
    Ok(Rational::from_integer(v))
}

/// Rejects alpha outside [0, 1).
pub fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha >= Rational::one() {
        return Err(Error::AlphaOutOfRange(format_rational(alpha)));
    }
    Ok(())
}

/// `{0, 1/10, …, 9/10}`.
pub fn default_alpha_grid() -> Vec<Rational> {
    (0..10).map(|k| rat(k, 10)).collect()
}

/// Serde adapters rendering rationals as `num/den` strings.
pub mod serde_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }
    }
}
