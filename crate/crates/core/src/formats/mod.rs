//! Bit-exact codecs between packed computer formats and [`UnpackedReal`].
//!
//! Bit patterns travel as `u128`, which covers every supported storage width
//! (up to binary128 and 128-bit posits).

mod ieee;
mod literal;
mod posit;
mod round;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub use literal::parse_bits;

/// A computer-format descriptor.
///
/// bfloat16 is the IEEE-like layout with 8 exponent and 7 fraction bits and is
/// represented as such; it only gets its own name when printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormatSpec {
    Ieee { exp_bits: u32, frac_bits: u32 },
    Posit { n: u32, es: u32 },
}

impl FormatSpec {
    pub const BINARY16: FormatSpec = FormatSpec::Ieee { exp_bits: 5, frac_bits: 10 };
    pub const BFLOAT16: FormatSpec = FormatSpec::Ieee { exp_bits: 8, frac_bits: 7 };
    pub const BINARY32: FormatSpec = FormatSpec::Ieee { exp_bits: 8, frac_bits: 23 };
    pub const BINARY64: FormatSpec = FormatSpec::Ieee { exp_bits: 11, frac_bits: 52 };
    pub const BINARY128: FormatSpec = FormatSpec::Ieee { exp_bits: 15, frac_bits: 112 };
    pub const POSIT16_1: FormatSpec = FormatSpec::Posit { n: 16, es: 1 };
    pub const POSIT32_2: FormatSpec = FormatSpec::Posit { n: 32, es: 2 };

    pub fn ieee(exp_bits: u32, frac_bits: u32) -> Result<Self> {
        if !(2..=30).contains(&exp_bits) || frac_bits == 0 || 1 + exp_bits + frac_bits > 128 {
            return Err(Error::InvalidFormat(format!(
                "ieee layout with {exp_bits} exponent and {frac_bits} fraction bits is not supported \
                 (need 2..=30 exponent bits, >=1 fraction bit, total <= 128)"
            )));
        }
        Ok(FormatSpec::Ieee { exp_bits, frac_bits })
    }

    pub fn posit(n: u32, es: u32) -> Result<Self> {
        if !(3..=128).contains(&n) || es > 16 {
            return Err(Error::InvalidFormat(format!(
                "posit<{n},{es}> is not supported (need 3 <= n <= 128, es <= 16)"
            )));
        }
        Ok(FormatSpec::Posit { n, es })
    }

    /// Storage width in bits.
    pub fn width(&self) -> u32 {
        match *self {
            FormatSpec::Ieee { exp_bits, frac_bits } => 1 + exp_bits + frac_bits,
            FormatSpec::Posit { n, .. } => n,
        }
    }

    /// Significand bits including the hidden bit. For posits, the largest
    /// precision any value attains (shortest regime).
    pub fn precision(&self) -> u32 {
        self.fraction_bits() + 1
    }

    /// Stored fraction bits; for posits the maximum over all values. This is
    /// the cap used by correct-bits scoring.
    pub fn fraction_bits(&self) -> u32 {
        match *self {
            FormatSpec::Ieee { frac_bits, .. } => frac_bits,
            FormatSpec::Posit { n, es } => n.saturating_sub(3 + es),
        }
    }

    pub fn is_ieee(&self) -> bool {
        matches!(self, FormatSpec::Ieee { .. })
    }

    pub fn is_posit(&self) -> bool {
        matches!(self, FormatSpec::Posit { .. })
    }

    /// Exponent bias (IEEE-like formats only; 0 for posits).
    pub fn bias(&self) -> i64 {
        match *self {
            FormatSpec::Ieee { exp_bits, .. } => (1i64 << (exp_bits - 1)) - 1,
            FormatSpec::Posit { .. } => 0,
        }
    }

    /// Smallest binade exponent of a normal number (posits: of minpos).
    pub fn emin(&self) -> i64 {
        match *self {
            FormatSpec::Ieee { .. } => 1 - self.bias(),
            FormatSpec::Posit { n, es } => -(i64::from(n) - 2) << es,
        }
    }

    /// Largest binade exponent of a finite number (posits: of maxpos).
    pub fn emax(&self) -> i64 {
        match *self {
            FormatSpec::Ieee { .. } => self.bias(),
            FormatSpec::Posit { n, es } => (i64::from(n) - 2) << es,
        }
    }

    pub fn mask(&self) -> u128 {
        width_mask(self.width())
    }

    /// Canonical quiet NaN, or NaR for posits.
    pub fn nan_bits(&self) -> u128 {
        match *self {
            FormatSpec::Ieee { exp_bits, frac_bits } => {
                (((1u128 << exp_bits) - 1) << frac_bits) | (1u128 << (frac_bits - 1))
            }
            FormatSpec::Posit { n, .. } => 1u128 << (n - 1),
        }
    }

    /// Signed infinity; posits have none and return NaR.
    pub fn inf_bits(&self, negative: bool) -> u128 {
        match *self {
            FormatSpec::Ieee { exp_bits, frac_bits } => {
                let mag = ((1u128 << exp_bits) - 1) << frac_bits;
                if negative {
                    mag | (1u128 << (exp_bits + frac_bits))
                } else {
                    mag
                }
            }
            FormatSpec::Posit { .. } => self.nan_bits(),
        }
    }

    /// Number of hex digits used when printing a pattern of this format.
    pub fn hex_digits(&self) -> usize {
        self.width().div_ceil(4) as usize
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn width_mask(width: u32) -> u128 {
    if width >= 128 {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl fmt::Display for FormatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FormatSpec::Ieee { exp_bits: 5, frac_bits: 10 } => f.write_str("binary16"),
            FormatSpec::Ieee { exp_bits: 8, frac_bits: 7 } => f.write_str("bfloat16"),
            FormatSpec::Ieee { exp_bits: 8, frac_bits: 23 } => f.write_str("binary32"),
            FormatSpec::Ieee { exp_bits: 11, frac_bits: 52 } => f.write_str("binary64"),
            FormatSpec::Ieee { exp_bits: 15, frac_bits: 112 } => f.write_str("binary128"),
            FormatSpec::Ieee { exp_bits, frac_bits } => write!(f, "ieee{exp_bits}_{frac_bits}"),
            FormatSpec::Posit { n, es } => write!(f, "posit{n}_{es}"),
        }
    }
}

impl FromStr for FormatSpec {
    type Err = Error;

    /// Accepts `binary16|32|64|128`, `bfloat16`, `ieee<E>_<F>` and `posit<N>_<ES>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let two = |rest: &str| -> Option<(u32, u32)> {
            let (a, b) = rest.split_once('_')?;
            Some((a.parse().ok()?, b.parse().ok()?))
        };
        match lower.as_str() {
            "binary16" | "fp16" | "half" => Ok(Self::BINARY16),
            "bfloat16" | "bf16" => Ok(Self::BFLOAT16),
            "binary32" | "fp32" | "single" => Ok(Self::BINARY32),
            "binary64" | "fp64" | "double" => Ok(Self::BINARY64),
            "binary128" | "fp128" | "quad" => Ok(Self::BINARY128),
            other => {
                if let Some(rest) = other.strip_prefix("posit") {
                    let (n, es) = two(rest).ok_or_else(|| unknown_format(s))?;
                    Self::posit(n, es)
                } else if let Some(rest) = other.strip_prefix("ieee") {
                    let (e, m) = two(rest).ok_or_else(|| unknown_format(s))?;
                    Self::ieee(e, m)
                } else {
                    Err(unknown_format(s))
                }
            }
        }
    }
}

fn unknown_format(s: &str) -> Error {
    Error::InvalidFormat(format!(
        "unknown format `{s}` (expected binary16/32/64/128, bfloat16, ieee<E>_<F> or posit<N>_<ES>)"
    ))
}

impl Serialize for FormatSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Value class of an [`UnpackedReal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Finite,
    Zero,
    Inf,
    Nan,
    /// Posit "not a real".
    Nar,
}

/// Format-agnostic decoded value: `(-1)^sign * significand * 2^exponent`.
///
/// Finite values are canonical (odd significand); zero keeps its sign only so
/// IEEE `-0` survives a codec round trip.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnpackedReal {
    pub negative: bool,
    pub exponent: i64,
    pub significand: BigUint,
    pub class: Class,
}

impl UnpackedReal {
    pub fn zero(negative: bool) -> Self {
        UnpackedReal { negative, exponent: 0, significand: BigUint::zero(), class: Class::Zero }
    }

    pub fn inf(negative: bool) -> Self {
        UnpackedReal { negative, exponent: 0, significand: BigUint::zero(), class: Class::Inf }
    }

    pub fn nan() -> Self {
        UnpackedReal { negative: false, exponent: 0, significand: BigUint::zero(), class: Class::Nan }
    }

    pub fn nar() -> Self {
        UnpackedReal { negative: false, exponent: 0, significand: BigUint::zero(), class: Class::Nar }
    }

    /// Builds a canonical finite value (or zero when `significand == 0`).
    pub fn finite(negative: bool, significand: BigUint, exponent: i64) -> Self {
        if significand.is_zero() {
            return Self::zero(negative);
        }
        let tz = significand.trailing_zeros().unwrap_or(0);
        UnpackedReal {
            negative,
            exponent: exponent + tz as i64,
            significand: significand >> tz,
            class: Class::Finite,
        }
    }

    pub fn from_dyadic(d: &Dyadic) -> Self {
        if d.is_zero() {
            Self::zero(false)
        } else {
            UnpackedReal {
                negative: d.is_negative(),
                exponent: d.exponent(),
                significand: d.magnitude().clone(),
                class: Class::Finite,
            }
        }
    }

    /// Exact value for zero and finite classes.
    pub fn to_dyadic(&self) -> Option<Dyadic> {
        match self.class {
            Class::Zero => Some(Dyadic::zero()),
            Class::Finite => {
                Some(Dyadic::from_parts(self.negative, self.significand.clone(), self.exponent))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.class == Class::Zero
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.class, Class::Finite | Class::Zero)
    }

    /// NaN or NaR.
    pub fn is_nan(&self) -> bool {
        matches!(self.class, Class::Nan | Class::Nar)
    }

    /// Exact product of two finite values (zero if either is zero).
    /// `None` when either operand is not finite.
    pub fn exact_mul(&self, other: &UnpackedReal) -> Option<UnpackedReal> {
        if !self.is_finite() || !other.is_finite() {
            return None;
        }
        let negative = self.negative != other.negative;
        if self.is_zero() || other.is_zero() {
            return Some(Self::zero(negative));
        }
        Some(UnpackedReal {
            negative,
            exponent: self.exponent + other.exponent,
            significand: &self.significand * &other.significand,
            class: Class::Finite,
        })
    }
}

/// Decodes a packed pattern to its exact value.
pub fn decode(bits: u128, fmt: FormatSpec) -> Result<UnpackedReal> {
    if bits & !fmt.mask() != 0 {
        return Err(Error::WidthMismatch { bits, width: fmt.width(), format: fmt.name() });
    }
    Ok(match fmt {
        FormatSpec::Ieee { exp_bits, frac_bits } => ieee::decode(bits, exp_bits, frac_bits),
        FormatSpec::Posit { n, es } => posit::decode(bits, n, es),
    })
}

/// Rounds `x` into `fmt`: round-to-nearest-even for IEEE-like formats,
/// posit rounding (ties-to-even, saturating) for posits.
pub fn encode(x: &UnpackedReal, fmt: FormatSpec) -> u128 {
    match x.class {
        Class::Nan | Class::Nar => fmt.nan_bits(),
        Class::Inf => fmt.inf_bits(x.negative),
        Class::Zero => match fmt {
            FormatSpec::Ieee { exp_bits, frac_bits } if x.negative => 1u128 << (exp_bits + frac_bits),
            _ => 0,
        },
        Class::Finite => {
            let d = Dyadic::from_parts(x.negative, x.significand.clone(), x.exponent);
            encode_dyadic(&d, fmt)
        }
    }
}

/// Rounds an exact value into `fmt`. Zero encodes as `+0`.
pub fn encode_dyadic(x: &Dyadic, fmt: FormatSpec) -> u128 {
    match fmt {
        FormatSpec::Ieee { exp_bits, frac_bits } => ieee::encode(x, exp_bits, frac_bits),
        FormatSpec::Posit { n, es } => posit::encode(x, n, es),
    }
}

/// `0x`-prefixed upper-case hex, zero-padded to the format's storage width.
pub fn format_hex(bits: u128, fmt: FormatSpec) -> String {
    format!("0x{:0width$X}", bits, width = fmt.hex_digits())
}
