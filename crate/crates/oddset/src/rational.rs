//! Exact rational scalars and the number-theoretic predicates built on them.
//!
//! Every quantity in this crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in canonical form (denominator positive, numerator and
//! denominator coprime, zero as `0/1`). There are no floating-point modes
//! anywhere.
//!
//! Besides arithmetic, this module provides the classification of a rational
//! by its denominator (integer, strict half-integer, dyadic, non-dyadic), the
//! odd part of denominators needed to scale a set onto the dyadic rationals,
//! and a Stern-Brocot search for the minimum-denominator rational inside an
//! open interval.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction, always in canonical form.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Handy for literals and tests.
///
/// Panics if `den` is zero; use [`checked_div`] when the denominator is data.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rat: zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact division that reports a zero divisor instead of panicking.
pub fn checked_div(lhs: &Rational, rhs: &Rational) -> Result<Rational> {
    if rhs.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(lhs / rhs)
}

/// Where a rational sits relative to the integer, half-integer and dyadic
/// lattices. Exactly one class applies to every rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumberClass {
    OddInteger,
    EvenInteger,
    /// An element of ℤ + 1/2 (canonical denominator exactly 2).
    StrictHalfInteger,
    /// Denominator a power of two ≥ 4.
    DyadicNonHalf,
    /// Denominator has an odd prime factor.
    NonDyadic,
}

pub fn classify_rational(x: &Rational) -> NumberClass {
    let den = x.denom().magnitude();
    if den.is_one() {
        if x.numer().is_odd() {
            NumberClass::OddInteger
        } else {
            NumberClass::EvenInteger
        }
    } else {
        let twos = den.trailing_zeros().unwrap_or(0);
        if (den >> twos).is_one() {
            if twos == 1 {
                NumberClass::StrictHalfInteger
            } else {
                NumberClass::DyadicNonHalf
            }
        } else {
            NumberClass::NonDyadic
        }
    }
}

pub fn is_odd_integer(x: &Rational) -> bool {
    x.is_integer() && x.numer().is_odd()
}

/// True when `x` is an integer or a strict half-integer, i.e. `x ∈ ½ℤ`.
pub fn is_half_integral(x: &Rational) -> bool {
    !matches!(
        classify_rational(x),
        NumberClass::DyadicNonHalf | NumberClass::NonDyadic
    )
}

fn odd_part(d: &BigUint) -> BigUint {
    d >> d.trailing_zeros().unwrap_or(0)
}

/// Least common multiple of the odd parts of all denominators.
///
/// The result is an odd positive integer; multiplying every input by it
/// leaves only powers of two in the denominators. The empty collection
/// yields 1.
pub fn odd_denominator_lcm<'a, I>(xs: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    let mut acc = BigUint::one();
    for x in xs {
        acc = acc.lcm(&odd_part(x.denom().magnitude()));
    }
    BigInt::from(acc)
}

/// The rational with the smallest denominator strictly inside the open
/// interval `(lo, hi)`; among equal denominators, the one with the smallest
/// absolute numerator. Fails when `lo >= hi`.
///
/// Integers are tried first (denominator 1, pick the one nearest zero).
/// Otherwise a Stern-Brocot descent finds the answer: the first mediant that
/// lands inside the interval is the unique minimum-denominator rational in
/// it. Runs of left or right steps are taken in one jump, so narrow
/// intervals near a simple fraction do not degrade to linear time.
pub fn best_rational_in_interval(lo: &Rational, hi: &Rational) -> Result<Rational> {
    if lo >= hi {
        return Err(Error::EmptyInterval {
            lo: lo.clone(),
            hi: hi.clone(),
        });
    }
    // Smallest integer > lo and largest integer < hi.
    let first: BigInt = lo.floor().to_integer() + 1;
    let last: BigInt = hi.ceil().to_integer() - 1;
    if first <= last {
        let k = if first.is_positive() {
            first
        } else if last.is_negative() {
            last
        } else {
            BigInt::zero()
        };
        return Ok(Rational::from_integer(k));
    }
    if !hi.is_positive() {
        // Mirror a non-positive interval onto the positive axis.
        return Ok(-stern_brocot(&-hi.clone(), &-lo.clone()));
    }
    // lo < 0 < hi would have hit the integer branch, so 0 <= lo here.
    Ok(stern_brocot(lo, hi))
}

/// Stern-Brocot search over the positive reals. Requires `0 <= lo < hi`
/// with no integer strictly inside the interval.
fn stern_brocot(lo: &Rational, hi: &Rational) -> Rational {
    // Bounds a/b <= lo and c/d >= hi, starting at 0/1 and the formal 1/0.
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    loop {
        let num = &a + &c;
        let den = &b + &d;
        // Cross-multiplied comparisons; every denominator in sight is >= 0.
        if &num * lo.denom() <= lo.numer() * &den {
            // Mediant <= lo: jump right past every mediant that stays <= lo.
            // (a + kc)/(b + kd) <= lo  ⇔  k <= (lo.n*b - lo.d*a)/(lo.d*c - lo.n*d).
            let k = (lo.numer() * &b - lo.denom() * &a)
                .div_floor(&(lo.denom() * &c - lo.numer() * &d));
            debug_assert!(k >= BigInt::one());
            a += &k * &c;
            b += &k * &d;
        } else if &num * hi.denom() >= hi.numer() * &den {
            // Mediant >= hi: jump left symmetrically.
            // (c + ka)/(d + kb) >= hi  ⇔  k <= (hi.n*d - hi.d*c)/(hi.d*a - hi.n*b),
            // where both sides of the division are non-positive.
            let k = (hi.numer() * &d - hi.denom() * &c)
                .div_floor(&(hi.denom() * &a - hi.numer() * &b));
            debug_assert!(k >= BigInt::one());
            c += &k * &a;
            d += &k * &b;
        } else {
            // Mediants of adjacent Stern-Brocot bounds are already reduced.
            return Rational::new(num, den);
        }
    }
}

/// Parses the canonical rational grammar: optional `-`, digits, optional
/// `/digits` with a positive denominator. This is the only numeric syntax
/// accepted in point-set documents.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let bad = || Error::InvalidNumber {
        input: input.to_string(),
    };
    let (num_str, den_str) = match input.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (input, None),
    };
    let digits = num_str.strip_prefix('-').unwrap_or(num_str);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    let den = match den_str {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den: BigInt = d.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            den
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(num, den))
}

/// Parses a decimal literal (optional `-`, digits, optional `.digits`) into
/// the exact rational it denotes. A decimal *is* a rational, so no precision
/// is lost at any length.
pub fn parse_decimal(input: &str) -> Result<Rational> {
    let bad = || Error::InvalidNumber {
        input: input.to_string(),
    };
    let (negative, rest) = match input.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, input),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if rest.contains('.') && (frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()))
    {
        return Err(bad());
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}
