//! Fixed-point enclosures for sums of square roots.
//!
//! An [`Enclosure`] is a pair of integers `lo ≤ hi` read as `[lo, hi] / 10^digits`
//! that is guaranteed to contain the exact value. Every operation rounds the
//! lower end down and the upper end up, so comparisons between enclosures
//! that do not overlap are rigorous.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{isqrt_ceil, isqrt_floor, Rational};
use crate::error::Result;

/// Working precision: `digits` decimal places after the point.
#[derive(Clone, Debug)]
pub struct HighPrecision {
    digits: u32,
    scale: BigInt,
}

impl HighPrecision {
    pub fn new(digits: u32) -> Self {
        HighPrecision {
            digits,
            scale: num_traits::pow(BigInt::from(10u32), digits as usize),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Enclosure of a rational value (width ≤ one ulp).
    pub fn exact(&self, x: &Rational) -> Enclosure {
        let t = x.numer() * &self.scale;
        Enclosure {
            lo: Integer::div_floor(&t, x.denom()),
            hi: Integer::div_ceil(&t, x.denom()),
            digits: self.digits,
        }
    }

    /// Enclosure of `√x` for rational `x ≥ 0`.
    pub fn sqrt(&self, x: &Rational) -> Result<Enclosure> {
        let t = x.numer() * &self.scale * &self.scale;
        let lo = isqrt_floor(&Integer::div_floor(&t, x.denom()))?;
        let hi = isqrt_ceil(&Integer::div_ceil(&t, x.denom()))?;
        Ok(Enclosure {
            lo,
            hi,
            digits: self.digits,
        })
    }

    pub fn zero(&self) -> Enclosure {
        Enclosure {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            digits: self.digits,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    digits: u32,
}

impl Enclosure {
    fn scale(&self) -> BigInt {
        num_traits::pow(BigInt::from(10u32), self.digits as usize)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn lower(&self) -> Rational {
        Rational::new(self.lo.clone(), self.scale())
    }

    pub fn upper(&self) -> Rational {
        Rational::new(self.hi.clone(), self.scale())
    }

    pub fn width(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, self.scale())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    /// Every value in `self` is strictly below every value in `other`.
    pub fn strictly_below(&self, other: &Enclosure) -> bool {
        debug_assert_eq!(self.digits, other.digits);
        self.hi < other.lo
    }

    /// Scales by a rational factor with outward rounding.
    pub fn mul_rational(&self, k: &Rational) -> Enclosure {
        let (a, b) = if k.is_negative() {
            (&self.hi, &self.lo)
        } else {
            (&self.lo, &self.hi)
        };
        let lo = Integer::div_floor(&(a * k.numer()), k.denom());
        let hi = Integer::div_ceil(&(b * k.numer()), k.denom());
        Enclosure {
            lo,
            hi,
            digits: self.digits,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Enclosure {
        if k.is_negative() {
            Enclosure {
                lo: &self.hi * k,
                hi: &self.lo * k,
                digits: self.digits,
            }
        } else {
            Enclosure {
                lo: &self.lo * k,
                hi: &self.hi * k,
                digits: self.digits,
            }
        }
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self.clone()
        } else {
            Enclosure {
                lo: BigInt::zero(),
                hi: self.hi.clone().max(-self.lo.clone()),
                digits: self.digits,
            }
        }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        debug_assert_eq!(self.digits, rhs.digits);
        Enclosure {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
            digits: self.digits,
        }
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        self + (-rhs)
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
            digits: self.digits,
        }
    }
}

impl std::iter::Sum for Enclosure {
    fn sum<I: Iterator<Item = Enclosure>>(mut iter: I) -> Enclosure {
        let first = iter.next().expect("sum of an empty enclosure sequence");
        iter.fold(first, |acc, e| acc + e)
    }
}
