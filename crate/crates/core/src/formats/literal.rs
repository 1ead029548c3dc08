//! Text literals for bit patterns: `0x`-prefixed hex is taken verbatim,
//! decimals are rounded once (exactly, from the decimal value) into the format.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{encode, encode_dyadic, FormatSpec, UnpackedReal};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Parses `0x3F800000`, `-1.25e-3`, `inf`, `-inf` or `nan` into a pattern of `fmt`.
pub fn parse_bits(text: &str, fmt: FormatSpec) -> Result<u128> {
    let s = text.trim();
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        let bits = u128::from_str_radix(hex, 16)
            .map_err(|e| Error::Parse(format!("bad hex literal `{s}`: {e}")))?;
        if bits & !fmt.mask() != 0 {
            return Err(Error::WidthMismatch { bits, width: fmt.width(), format: fmt.name() });
        }
        return Ok(bits);
    }
    match s.to_ascii_lowercase().as_str() {
        "nan" | "nar" => return Ok(fmt.nan_bits()),
        "inf" | "+inf" => return Ok(encode(&UnpackedReal::inf(false), fmt)),
        "-inf" => return Ok(encode(&UnpackedReal::inf(true), fmt)),
        "-0" | "-0.0" => return Ok(encode(&UnpackedReal::zero(true), fmt)),
        _ => {}
    }
    let (negative, mant, dec_exp) = parse_decimal(s)?;
    let mant = BigInt::from_biguint(if negative { num_bigint::Sign::Minus } else { num_bigint::Sign::Plus }, mant);
    Ok(encode_dyadic(&decimal_to_dyadic(mant, dec_exp), fmt))
}

fn parse_decimal(s: &str) -> Result<(bool, BigUint, i64)> {
    let bad = || Error::Parse(format!("bad numeric literal `{s}`"));
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (num, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (body, 0),
    };
    let (int_part, frac_part) = num.split_once('.').unwrap_or((num, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mant: BigUint = digits.parse().map_err(|_| bad())?;
    let exp = exp - frac_part.len() as i64;
    if exp.abs() > 20_000 {
        return Err(Error::Parse(format!("decimal exponent out of range in `{s}`")));
    }
    Ok((negative, mant, exp))
}

/// A dyadic that rounds identically to `mant * 10^dec_exp` in every supported
/// format: exact when possible, otherwise 160+ correct bits plus a sticky bit.
fn decimal_to_dyadic(mant: BigInt, dec_exp: i64) -> Dyadic {
    if mant.is_zero() {
        return Dyadic::zero();
    }
    if dec_exp >= 0 {
        let ten_pow: BigInt = BigInt::from(10u32).pow(dec_exp as u64);
        return Dyadic::new(mant * ten_pow, 0);
    }
    // mant * 10^-k = mant / 5^k * 2^-k
    let k = (-dec_exp) as u64;
    let five_pow: BigUint = BigUint::from(5u32).pow(k);
    let negative = mant.sign() == num_bigint::Sign::Minus;
    let mag = mant.magnitude();
    let shift = (five_pow.bits() + 160).saturating_sub(mag.bits());
    let (q, r) = (mag << shift).div_rem(&five_pow);
    if r.is_zero() {
        Dyadic::from_parts(negative, q, -(k as i64) - shift as i64)
    } else {
        let with_sticky = (q << 1u32) + BigUint::one();
        Dyadic::from_parts(negative, with_sticky, -(k as i64) - shift as i64 - 1)
    }
}
