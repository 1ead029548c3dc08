//! Posit⟨n, es⟩ codec for arbitrary `n <= 128` and `es`.
//!
//! Layout after the sign: a run-length regime (`k+1` ones then a zero for
//! `k >= 0`, `-k` zeros then a one for `k < 0`), up to `es` exponent bits and
//! the remaining fraction bits. Negative values are the two's complement of
//! the positive pattern. Value = `2^(k*2^es + e) * 1.f`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::round::shr_round_even;
use super::{width_mask, UnpackedReal};
use crate::dyadic::Dyadic;

pub(super) fn decode(bits: u128, n: u32, es: u32) -> UnpackedReal {
    let mask = width_mask(n);
    if bits == 0 {
        return UnpackedReal::zero(false);
    }
    if bits == 1u128 << (n - 1) {
        return UnpackedReal::nar();
    }
    let negative = (bits >> (n - 1)) & 1 == 1;
    let p = if negative { bits.wrapping_neg() & mask } else { bits };

    // left-align the regime's first bit (position n-2) at bit 127
    let body_len = n - 1;
    let aligned = p << (128 - body_len);
    let first_is_one = aligned >> 127 == 1;
    let run = if first_is_one { (!aligned).leading_zeros() } else { aligned.leading_zeros() }.min(body_len);
    let k: i64 = if first_is_one { i64::from(run) - 1 } else { -i64::from(run) };

    // bits left after the regime and its terminator
    let rest_len = body_len.saturating_sub(run + 1);
    let rest = p & width_mask(rest_len);
    let (e, frac_len, frac) = if rest_len >= es {
        let frac_len = rest_len - es;
        ((rest >> frac_len) as i64, frac_len, rest & width_mask(frac_len))
    } else {
        // truncated exponent bits are implicit zeros
        ((rest << (es - rest_len)) as i64, 0, 0)
    };

    let sig = (1u128 << frac_len) | frac;
    let scale = (k << es) + e - i64::from(frac_len);
    UnpackedReal::finite(negative, BigUint::from(sig), scale)
}

pub(super) fn encode(x: &Dyadic, n: u32, es: u32) -> u128 {
    let Some(top) = x.binade() else {
        return 0;
    };
    let mask = width_mask(n);
    let body_len = n - 1;
    let max_scale = (i64::from(n) - 2) << es;
    let maxpos = (1u128 << body_len) - 1;
    let minpos = 1u128;

    let pattern = if top >= max_scale {
        maxpos
    } else if top < -max_scale {
        minpos
    } else {
        let k = top.div_euclid(1i64 << es);
        let e = top.rem_euclid(1i64 << es) as u64;
        let (regime, regime_len) = if k >= 0 {
            // k+1 ones followed by a zero
            (((BigUint::one() << (k as u64 + 1)) - 1u32) << 1u32, k as u64 + 2)
        } else {
            (BigUint::one(), (-k) as u64 + 1)
        };
        let mag = x.magnitude();
        let frac_len = mag.bits() - 1;
        let frac = mag - (BigUint::one() << frac_len);
        let total = regime_len + u64::from(es) + frac_len;
        let full = (((regime << es) | BigUint::from(e)) << frac_len) | frac;

        let rounded = if total <= u64::from(body_len) {
            full << (u64::from(body_len) - total)
        } else {
            shr_round_even(&full, total - u64::from(body_len))
        };
        // never round to zero or past maxpos
        if rounded.is_zero() {
            minpos
        } else {
            rounded.to_u128().filter(|&r| r <= maxpos).unwrap_or(maxpos)
        }
    };

    if x.is_negative() {
        pattern.wrapping_neg() & mask
    } else {
        pattern
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::Class;

    fn value(bits: u128, n: u32, es: u32) -> f64 {
        decode(bits, n, es).to_dyadic().unwrap().to_f64()
    }

    #[test]
    fn posit8_es0_reference_values() {
        assert_eq!(value(0x40, 8, 0), 1.0);
        assert_eq!(value(0x60, 8, 0), 2.0);
        assert_eq!(value(0x20, 8, 0), 0.5);
        assert_eq!(value(0x7F, 8, 0), 64.0);
        assert_eq!(value(0x01, 8, 0), 1.0 / 64.0);
        assert_eq!(value(0x50, 8, 0), 1.5);
        assert_eq!(value(0xC0, 8, 0), -1.0);
        assert_eq!(value(0xFF, 8, 0), -1.0 / 64.0);
    }

    #[test]
    fn posit16_es1_reference_values() {
        assert_eq!(value(0x4000, 16, 1), 1.0);
        assert_eq!(value(0x5000, 16, 1), 2.0);
        assert_eq!(value(0x6000, 16, 1), 4.0);
        assert_eq!(value(0x7FFF, 16, 1), 2f64.powi(28));
        assert_eq!(value(0x0001, 16, 1), 2f64.powi(-28));
        assert_eq!(value(0x4800, 16, 1), 1.5);
        assert_eq!(decode(0x8000, 16, 1).class, Class::Nar);
    }

    #[test]
    fn posit32_es2_reference_values() {
        assert_eq!(value(0x4000_0000, 32, 2), 1.0);
        assert_eq!(value(0x7FFF_FFFF, 32, 2), 2f64.powi(120));
        assert_eq!(value(0x0000_0001, 32, 2), 2f64.powi(-120));
        assert_eq!(value(0x4800_0000, 32, 2), 2.0);
    }

    #[test]
    fn truncated_exponent_bits_are_zero() {
        // posit<8,2>: 0x7E = 0 1111110 -> k=5, no exponent bits: 16^5 = 2^20
        assert_eq!(value(0x7E, 8, 2), 2f64.powi(20));
        // 0x7D = 0 111110 1 -> k=4, exponent bits "1" padded to "10" = 2
        assert_eq!(value(0x7D, 8, 2), 2f64.powi(18));
    }

    #[test]
    fn rounding_ties_to_even_on_pattern() {
        // posit<8,0> around 1: ulp = 1/32; 1 + 1/64 is a tie between 0x40 and 0x41
        let tie = &Dyadic::from_i64(1) + &Dyadic::pow2(-6);
        assert_eq!(encode(&tie, 8, 0), 0x40);
        let tie_odd = &Dyadic::new(33.into(), -5) + &Dyadic::pow2(-6);
        assert_eq!(encode(&tie_odd, 8, 0), 0x42);
        // between 32 (0x7E) and 64 (0x7F) the midpoint pattern rule picks 48 as the tie
        assert_eq!(encode(&Dyadic::from_i64(48), 8, 0), 0x7E);
        assert_eq!(encode(&Dyadic::from_i64(49), 8, 0), 0x7F);
    }

    #[test]
    fn saturation() {
        assert_eq!(encode(&Dyadic::pow2(7), 8, 0), 0x7F);
        assert_eq!(encode(&Dyadic::pow2(-7), 8, 0), 0x01);
        assert_eq!(encode(&-Dyadic::pow2(-300), 8, 0), 0xFF);
    }
}
