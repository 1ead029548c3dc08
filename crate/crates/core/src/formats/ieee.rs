use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::round::shr_round_even;
use super::UnpackedReal;
use crate::dyadic::Dyadic;

pub(super) fn decode(bits: u128, exp_bits: u32, frac_bits: u32) -> UnpackedReal {
    let negative = (bits >> (exp_bits + frac_bits)) & 1 == 1;
    let field = (bits >> frac_bits) & ((1u128 << exp_bits) - 1);
    let frac = bits & ((1u128 << frac_bits) - 1);
    let bias = (1i64 << (exp_bits - 1)) - 1;
    let max_field = (1u128 << exp_bits) - 1;

    if field == max_field {
        return if frac == 0 { UnpackedReal::inf(negative) } else { UnpackedReal::nan() };
    }
    if field == 0 {
        if frac == 0 {
            return UnpackedReal::zero(negative);
        }
        // subnormal: unit bit sits at emin - frac_bits
        return UnpackedReal::finite(negative, BigUint::from(frac), 1 - bias - frac_bits as i64);
    }
    let sig = frac | (1u128 << frac_bits);
    UnpackedReal::finite(negative, BigUint::from(sig), field as i64 - bias - frac_bits as i64)
}

pub(super) fn encode(x: &Dyadic, exp_bits: u32, frac_bits: u32) -> u128 {
    let sign_bit = 1u128 << (exp_bits + frac_bits);
    let Some(top) = x.binade() else {
        return 0;
    };
    let sign = if x.is_negative() { sign_bit } else { 0 };
    let bias = (1i64 << (exp_bits - 1)) - 1;
    let emin = 1 - bias;
    let frac = i64::from(frac_bits);

    // quantum (weight of the last kept bit) of the binade x lands in
    let subnormal = top < emin;
    let mut quantum = top.max(emin) - frac;
    let mut n = if x.exponent() >= quantum {
        x.magnitude() << ((x.exponent() - quantum) as u64)
    } else {
        shr_round_even(x.magnitude(), (quantum - x.exponent()) as u64)
    };

    if subnormal {
        // n <= 2^frac; n == 2^frac lands exactly on the smallest normal encoding
        return sign | n.to_u128().expect("subnormal significand fits");
    }
    if n.bits() > u64::from(frac_bits) + 1 {
        // rounding carried into the next binade; n was exactly 2^(frac+1)
        n >>= 1u32;
        quantum += 1;
    }
    let biased = quantum + frac + bias;
    if biased >= (1i64 << exp_bits) - 1 {
        return sign | (((1u128 << exp_bits) - 1) << frac_bits);
    }
    let hidden = BigUint::one() << frac_bits;
    let fraction = (n - hidden).to_u128().expect("fraction fits");
    sign | ((biased as u128) << frac_bits) | fraction
}
