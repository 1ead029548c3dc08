//! Exact dyadic rationals `mant * 2^exp` with an arbitrary-precision mantissa.
//!
//! Every finite value of every supported format, every exact product and every
//! exact sum of those is a dyadic rational, so this is the common currency of
//! the oracles and of the final rounding step.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

/// An exact value `mant * 2^exp`.
///
/// Canonical: the mantissa is odd, or it is zero and `exp == 0`. Structural
/// equality is therefore value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
    }

    pub fn from_parts(negative: bool, magnitude: BigUint, exp: i64) -> Self {
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Self::new(BigInt::from_biguint(sign, magnitude), exp)
    }

    pub fn from_i64(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::from(1), exp: e }
    }

    /// Exact conversion; `None` for NaN and infinities.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let field = ((bits >> 52) & 0x7FF) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (sig, exp) = if field == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), field - 1075)
        };
        Some(Self::from_parts(neg, BigUint::from(sig), exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn magnitude(&self) -> &BigUint {
        self.mant.magnitude()
    }

    /// Exponent of the leading bit, i.e. `floor(log2|self|)`. `None` for zero.
    pub fn binade(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    /// `log2|self|` to double precision; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let Some(top) = self.binade() else {
            return f64::NEG_INFINITY;
        };
        let bits = self.mant.bits();
        let keep = bits.min(60);
        let lead = (self.magnitude() >> (bits - keep)).to_u64().unwrap_or(u64::MAX);
        // lead in [2^(keep-1), 2^keep)
        top as f64 + (lead as f64 / (1u64 << (keep - 1)) as f64).log2()
    }

    /// Nearest double, saturating to infinity outside the double range.
    ///
    /// Only used for reporting; rounding through formats goes via
    /// [`crate::formats::encode_dyadic`].
    pub fn to_f64(&self) -> f64 {
        let Some(top) = self.binade() else {
            return 0.0;
        };
        let bits = self.mant.bits();
        let keep = bits.min(64);
        let lead = (self.magnitude() >> (bits - keep)).to_u64().unwrap_or(u64::MAX);
        let scale = top - (keep as i64 - 1);
        let mag = if scale > 2000 {
            f64::INFINITY
        } else if scale < -2200 {
            0.0
        } else {
            let half = scale / 2;
            lead as f64 * 2f64.powi(half as i32) * 2f64.powi((scale - half) as i32)
        };
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// Scales by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Mantissa expressed on the grid `2^grid`; requires `grid <= exp`.
    pub(crate) fn scaled_to(&self, grid: i64) -> BigInt {
        debug_assert!(self.is_zero() || grid <= self.exp);
        if self.is_zero() {
            BigInt::zero()
        } else {
            &self.mant << ((self.exp - grid) as usize)
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let grid = self.exp.min(rhs.exp);
        Dyadic::new(self.scaled_to(grid) + rhs.scaled_to(grid), grid)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // product of odd mantissas is odd: already canonical
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -self.mant, exp: self.exp }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.is_zero() || other.is_zero() {
            // Sign orders Minus < NoSign < Plus
            return self.mant.sign().cmp(&other.mant.sign());
        }
        let grid = self.exp.min(other.exp);
        self.scaled_to(grid).cmp(&other.scaled_to(grid))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Renders as `mantissa` or `mantissa*2^exp`, exact.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mant)
        } else {
            write!(f, "{}*2^{}", self.mant, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_absorbs_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(48), -4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 0);
        assert_eq!(Dyadic::new(BigInt::zero(), 17), Dyadic::zero());
    }

    #[test]
    fn addition_cancels_exactly() {
        let big = Dyadic::pow2(1000);
        let tiny = Dyadic::pow2(-1000);
        let s = &(&big + &tiny) - &big;
        assert_eq!(s, tiny);
    }

    #[test]
    fn ordering_across_signs_and_zero() {
        let a = Dyadic::from_i64(-3);
        let z = Dyadic::zero();
        let b = Dyadic::pow2(-40);
        assert!(a < z && z < b && a < b);
        assert!(Dyadic::from_i64(5) > Dyadic::from_i64(4));
    }

    #[test]
    fn f64_conversions() {
        for v in [1.0, -0.375, f64::MIN_POSITIVE, 5e-324, 1.7976931348623157e308, 3.0e-310] {
            let d = Dyadic::from_f64(v).unwrap();
            assert_eq!(d.to_f64(), v);
        }
        assert!((Dyadic::from_i64(8).log2_abs() - 3.0).abs() < 1e-15);
        assert!((Dyadic::from_i64(3).log2_abs() - 3f64.log2()).abs() < 1e-15);
        assert_eq!(Dyadic::pow2(5000).to_f64(), f64::INFINITY);
    }
}
