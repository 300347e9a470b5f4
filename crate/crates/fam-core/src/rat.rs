//! Exact rational scalars and their canonical text forms.
//!
//! All arithmetic in this crate runs on `BigRational`; the "p/q" string form
//! is the wire format used by scenario and report files.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::CoreError;

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Shorthand constructor for small rationals.
pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer-valued rational.
pub fn qi(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

/// Parses the canonical "p/q" (or plain integer) form.
pub fn parse_q(text: &str) -> Result<Q, CoreError> {
    Q::from_str(text.trim())
        .map_err(|e| CoreError::Invalid(format!("invalid rational {text:?}: {e}")))
}

/// Canonical "p/q" rendering; integers drop the denominator.
pub fn q_to_string(value: &Q) -> String {
    value.to_string()
}

/// Decimal rendering to 12 places, rounded half away from zero.
pub fn decimal_12(value: &Q) -> String {
    let scale = BigInt::from(10u32).pow(12);
    let abs = value.abs();
    // round(|v| * 10^12) = floor((2*numer*scale + denom) / (2*denom))
    let scaled = (abs.numer() * &scale * 2u32 + abs.denom()) / (abs.denom() * 2u32);
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if value.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    format!("{sign}{int_part}.{frac_part:012}")
}

/// Exact nonnegative integer power.
pub fn q_pow(base: &Q, exp: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["1/2", "-3/4", "0", "7", "22/7"] {
            let v = parse_q(s).unwrap();
            assert_eq!(q_to_string(&v), s);
        }
    }

    #[test]
    fn parse_unreduced_normalizes() {
        assert_eq!(q_to_string(&parse_q("2/4").unwrap()), "1/2");
        assert_eq!(q_to_string(&parse_q("-2/-4").unwrap()), "1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_12(&q(1, 2)), "0.500000000000");
        assert_eq!(decimal_12(&q(1, 3)), "0.333333333333");
        assert_eq!(decimal_12(&q(2, 3)), "0.666666666667");
        assert_eq!(decimal_12(&qi(1)), "1.000000000000");
        assert_eq!(decimal_12(&q(-1, 4)), "-0.250000000000");
        // below the 12-place resolution, rounds to the nearest representable
        assert_eq!(decimal_12(&q_pow(&q(1, 2), 41)), "0.000000000000");
    }

    #[test]
    fn power_is_exact() {
        assert_eq!(q_pow(&q(1, 2), 10), q(1, 1024));
        assert_eq!(q_pow(&q(2, 3), 0), qi(1));
    }
}
