//! Exact integer and rational arithmetic.
//!
//! Every certificate produced by this crate is built from the operations in
//! this module: arbitrary-precision integers and rationals (backed by
//! `num-bigint` / `num-rational`), integer square roots rounded in a chosen
//! direction, and rational over-estimates of square roots. Nothing here
//! touches floating point.

mod enclosure;

pub use enclosure::{Enclosure, HighPrecision};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `⌊√n⌋` by integer Newton iteration.
///
/// The starting guess `2^⌈bits/2⌉` is at least `√n`, and from above the
/// iteration decreases monotonically until it reaches the floor root.
pub fn isqrt_floor(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.to_string()));
    }
    if n.is_zero() {
        return Ok(BigInt::zero());
    }
    let mut x = BigInt::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return Ok(x);
        }
        x = y;
    }
}

/// `⌈√n⌉`: the floor root, bumped by one unless `n` is a perfect square.
pub fn isqrt_ceil(n: &BigInt) -> Result<BigInt> {
    let r = isqrt_floor(n)?;
    if &(&r * &r) == n {
        Ok(r)
    } else {
        Ok(r + 1u32)
    }
}

/// `⌊√n⌋` for machine words.
pub fn isqrt_floor_u64(n: u64) -> u64 {
    // f64 gets within a few units; the loops make it exact.
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}

/// `⌈√n⌉` for machine words.
pub fn isqrt_ceil_u64(n: u64) -> u64 {
    let r = isqrt_floor_u64(n);
    if (r as u128) * (r as u128) == n as u128 {
        r
    } else {
        r + 1
    }
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt_exact(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let p = isqrt_floor(x.numer()).ok()?;
    let q = isqrt_floor(x.denom()).ok()?;
    if &(&p * &p) == x.numer() && &(&q * &q) == x.denom() {
        Some(Rational::new(p, q))
    } else {
        None
    }
}

fn check_precision(precision_denominator: &BigInt) -> Result<()> {
    if precision_denominator < &BigInt::one() {
        return Err(Error::BadPrecision(precision_denominator.to_string()));
    }
    Ok(())
}

/// Rational `u ≥ √x` with `u − √x ≤ 1/d`.
///
/// Exact rational roots are returned as-is. Otherwise the result is
/// `⌈√(x·d²)⌉ / d`, using `⌈√(t/q)⌉ = ⌈√⌈t/q⌉⌉` to stay in integers.
pub fn sqrt_upper_bound(x: &Rational, precision_denominator: &BigInt) -> Result<Rational> {
    if x.is_negative() {
        return Err(Error::NegativeSqrt(x.to_string()));
    }
    check_precision(precision_denominator)?;
    if let Some(root) = rational_sqrt_exact(x) {
        return Ok(root);
    }
    let d = precision_denominator;
    let scaled = Integer::div_ceil(&(x.numer() * d * d), x.denom());
    Ok(Rational::new(isqrt_ceil(&scaled)?, d.clone()))
}

/// Rational `l ≤ √x` with `√x − l ≤ 1/d`; mirror image of [`sqrt_upper_bound`].
pub fn sqrt_lower_bound(x: &Rational, precision_denominator: &BigInt) -> Result<Rational> {
    if x.is_negative() {
        return Err(Error::NegativeSqrt(x.to_string()));
    }
    check_precision(precision_denominator)?;
    if let Some(root) = rational_sqrt_exact(x) {
        return Ok(root);
    }
    let d = precision_denominator;
    let scaled = Integer::div_floor(&(x.numer() * d * d), x.denom());
    Ok(Rational::new(isqrt_floor(&scaled)?, d.clone()))
}

/// Smallest integer `≥ x`.
pub fn ceil_to_int(x: &Rational) -> BigInt {
    Integer::div_ceil(x.numer(), x.denom())
}

/// Parses `p/q`, an integer, or a decimal literal such as `-1.1`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::RationalSyntax(text.to_string());
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_integer(p).ok_or_else(err)?;
        let q = parse_integer(q).ok_or_else(err)?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if whole.is_empty() && frac.is_empty() {
            return Err(err());
        }
        let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if !digits_ok(whole) || !digits_ok(frac) {
            return Err(err());
        }
        let mantissa: BigInt = format!("0{whole}{frac}").parse().map_err(|_| err())?;
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        let value = Rational::new(mantissa, denom);
        return Ok(if negative { -value } else { value });
    }
    parse_integer(s).map(Rational::from_integer).ok_or_else(err)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `p/q` text (integers print without `/1`).
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

pub(crate) fn sign_of(x: &Rational) -> Sign {
    if x.is_zero() {
        Sign::NoSign
    } else if x.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}
