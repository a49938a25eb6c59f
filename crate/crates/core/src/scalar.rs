//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Everything that only needs field arithmetic (weights, coweights, gamma
//! vectors, mass vectors, the Kostant expansion) is written against
//! [`Scalar`], so the same code runs over [`BigRational`] when the inputs are
//! rational and over `f64`/`f32` otherwise.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    /// The exact value as a rational; `None` for non-finite floats.
    fn to_rational(&self) -> Option<BigRational>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Sum of a sequence of values. Floating-point types use Neumaier
    /// compensation.
    fn sum_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc + x)
    }

    /// Text form used in every output format: `p/q` for rationals and the
    /// shortest round-trip decimal for floats.
    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                rational_to_f64(r) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_rational(&self) -> Option<BigRational> {
                BigRational::from_float(*self as f64)
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn abs_val(&self) -> Self {
                self.abs()
            }

            fn render(&self) -> String {
                format_real(*self as f64)
            }

            fn sum_all<I: IntoIterator<Item = Self>>(items: I) -> Self {
                let mut sum: $t = 0.0;
                let mut comp: $t = 0.0;
                for x in items {
                    let t = sum + x;
                    if sum.abs() >= x.abs() {
                        comp += (sum - t) + x;
                    } else {
                        comp += (x - t) + sum;
                    }
                    sum = t;
                }
                sum + comp
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Converts a big rational to the nearest-ish `f64`, staying finite for
/// numerators and denominators far beyond the `f64` range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift > 0 {
        r / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let base = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
    base * 2f64.powi(shift as i32)
}

/// Parses an exact rational from `p/q`, an integer, or a finite decimal such
/// as `-0.25` or `1e-3`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational("1.3"), Some(q(13, 10)));
        assert_eq!(parse_rational("2e-3"), Some(q(1, 500)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn renders_integers_without_denominator() {
        assert_eq!(q(4, 2).render(), "2");
        assert_eq!(q(-2, 3).render(), "-2/3");
        assert_eq!(0.1f64.render(), "0.1");
        assert_eq!(2.5e-11f64.render(), "2.5e-11");
        assert_eq!(6.2e27f64.render(), "6.2e27");
        assert_eq!(f64::INFINITY.render(), "inf");
    }

    #[test]
    fn huge_rationals_convert_finitely() {
        let big = BigRational::new(
            BigInt::one() << 3000usize,
            (BigInt::one() << 2999usize) * BigInt::from(3),
        );
        assert!((rational_to_f64(&big) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let items = vec![1.0f64, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        let s = f64::sum_all(items);
        assert!((s - 4e-16).abs() < 1e-30);
    }
}
