//! The tailored fixed-point scratchpad.
//!
//! An [`Accumulator`] is a `W`-bit two's-complement register whose integer
//! content `r` stands for the value `r * 2^lsb`, with
//! `W = ovf + msb - lsb + 1`. Exact operand products are shifted onto that
//! grid (bits below `lsb` are floored away) and added modulo `2^W`. Modular
//! addition is associative and commutative, so the final register does not
//! depend on the order of accumulation, and it equals the true sum whenever
//! that sum fits in `W` bits, however far intermediate partial sums strayed.
//! Rounding to a storage format happens once, in [`Accumulator::round_into`].

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::formats::{encode_dyadic, Class, FormatSpec, UnpackedReal};

/// Largest register width accepted, in bits.
pub const MAX_WIDTH: u64 = 1 << 16;

/// Accumulator geometry ⟨ovf, msb, lsb⟩.
///
/// `msb` and `lsb` are weight exponents of the highest data bit and the lowest
/// kept bit; `ovf` guard bits above `msb` absorb carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AccumConfig {
    ovf: u32,
    msb: i64,
    lsb: i64,
}

impl AccumConfig {
    pub fn new(ovf: u32, msb: i64, lsb: i64) -> Result<Self> {
        if lsb > msb {
            return Err(Error::InvalidConfig(format!("lsb ({lsb}) must not exceed msb ({msb})")));
        }
        let width = i128::from(ovf) + i128::from(msb) - i128::from(lsb) + 1;
        if width < 2 {
            return Err(Error::InvalidConfig(format!(
                "⟨{ovf}:{msb}:{lsb}⟩ gives a {width}-bit register; at least 2 bits are needed"
            )));
        }
        if width > i128::from(MAX_WIDTH) {
            return Err(Error::InvalidConfig(format!(
                "⟨{ovf}:{msb}:{lsb}⟩ gives a {width}-bit register; the limit is {MAX_WIDTH}"
            )));
        }
        Ok(AccumConfig { ovf, msb, lsb })
    }

    pub fn ovf(&self) -> u32 {
        self.ovf
    }

    pub fn msb(&self) -> i64 {
        self.msb
    }

    pub fn lsb(&self) -> i64 {
        self.lsb
    }

    /// Register width `W = ovf + msb - lsb + 1`.
    pub fn width(&self) -> u32 {
        (i64::from(self.ovf) + self.msb - self.lsb + 1) as u32
    }
}

/// Register width of a config given as raw parts, validating it first.
pub fn width(ovf: u32, msb: i64, lsb: i64) -> Result<u32> {
    AccumConfig::new(ovf, msb, lsb).map(|c| c.width())
}

/// Written `ovf:msb:lsb`, e.g. `30:30:-30`.
impl fmt::Display for AccumConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.ovf, self.msb, self.lsb)
    }
}

impl FromStr for AccumConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [ovf, msb, lsb] = parts.as_slice() else {
            return Err(Error::Parse(format!(
                "accumulator config `{s}` must have the form ovf:msb:lsb (e.g. 30:30:-30)"
            )));
        };
        let num = |field: &str, v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("accumulator config `{s}`: {field} `{v}` is not an integer")))
        };
        let ovf = num("ovf", ovf)?;
        let ovf = u32::try_from(ovf)
            .map_err(|_| Error::Parse(format!("accumulator config `{s}`: ovf must be a nonnegative integer")))?;
        AccumConfig::new(ovf, num("msb", msb)?, num("lsb", lsb)?)
    }
}

impl Serialize for AccumConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Sticky status bits. Once set, never cleared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AccumFlags {
    pub poisoned_nan: bool,
    pub poisoned_inf_pos: bool,
    pub poisoned_inf_neg: bool,
    /// Some single addition overflowed the signed register. Advisory only: it
    /// may differ between orderings of the same products.
    pub overflow_advisory: bool,
    /// Some product had nonzero bits below `lsb`.
    pub inexact_low: bool,
}

impl AccumFlags {
    pub fn is_poisoned(&self) -> bool {
        self.poisoned_nan || self.poisoned_inf_pos || self.poisoned_inf_neg
    }
}

#[derive(Clone, Debug)]
pub struct Accumulator {
    cfg: AccumConfig,
    width: u64,
    /// little-endian 64-bit limbs; bits at and above `width` are kept zero
    limbs: Vec<u64>,
    flags: AccumFlags,
    scratch: Vec<u64>,
}

impl Accumulator {
    /// A cleared register with no flags set.
    pub fn zero(cfg: AccumConfig) -> Self {
        let width = u64::from(cfg.width());
        Accumulator {
            cfg,
            width,
            limbs: vec![0; width.div_ceil(64) as usize],
            flags: AccumFlags::default(),
            scratch: Vec::new(),
        }
    }

    pub fn cfg(&self) -> AccumConfig {
        self.cfg
    }

    pub fn flags(&self) -> AccumFlags {
        self.flags
    }

    pub fn is_poisoned(&self) -> bool {
        self.flags.is_poisoned()
    }

    /// Signed register content `r` (the value is `r * 2^lsb`).
    pub fn register(&self) -> BigInt {
        let digits: Vec<u32> = self.limbs.iter().flat_map(|&l| [l as u32, (l >> 32) as u32]).collect();
        let unsigned = BigInt::from(BigUint::new(digits));
        if self.sign_bit() {
            unsigned - (BigInt::one() << self.width)
        } else {
            unsigned
        }
    }

    /// Adds the exact product `a * b`.
    ///
    /// NaN/NaR operands and `inf * 0` poison with NaN; `inf * nonzero` sets the
    /// signed infinity flag. The register never holds special values.
    pub fn mac(&mut self, a: &UnpackedReal, b: &UnpackedReal) {
        match (a.class, b.class) {
            (Class::Nan | Class::Nar, _) | (_, Class::Nan | Class::Nar) => {
                self.flags.poisoned_nan = true;
                return;
            }
            (Class::Inf, Class::Zero) | (Class::Zero, Class::Inf) => {
                self.flags.poisoned_nan = true;
                return;
            }
            (Class::Inf, _) | (_, Class::Inf) => {
                if a.negative != b.negative {
                    self.flags.poisoned_inf_neg = true;
                } else {
                    self.flags.poisoned_inf_pos = true;
                }
                return;
            }
            (Class::Zero, _) | (_, Class::Zero) => return,
            (Class::Finite, Class::Finite) => {}
        }
        let negative = a.negative != b.negative;
        let exp = a.exponent + b.exponent;
        match (a.significand.to_u64(), b.significand.to_u64()) {
            (Some(x), Some(y)) => {
                let p = u128::from(x) * u128::from(y);
                self.insert(negative, &[p as u64, (p >> 64) as u64], exp);
            }
            _ => {
                let p = &a.significand * &b.significand;
                self.insert(negative, &p.to_u64_digits(), exp);
            }
        }
    }

    /// Adds the exact value `(-1)^negative * mag * 2^exp`, `mag` given as
    /// little-endian 64-bit digits.
    fn insert(&mut self, negative: bool, mag: &[u64], exp: i64) {
        let shift = i128::from(exp) - i128::from(self.cfg.lsb);
        if shift >= 0 {
            let shift = u64::try_from(shift).unwrap_or(u64::MAX);
            self.apply(negative, mag, shift);
            return;
        }
        // below the grid: floor(value / 2^lsb)
        let k = u64::try_from(-shift).unwrap_or(u64::MAX);
        let mut q = std::mem::take(&mut self.scratch);
        let dropped = shr_digits(mag, k, &mut q);
        if dropped {
            self.flags.inexact_low = true;
            if negative {
                // -ceil(m / 2^k) = floor(-m / 2^k)
                increment(&mut q);
            }
        }
        self.apply(negative, &q, 0);
        self.scratch = q;
    }

    fn apply(&mut self, negative: bool, mag: &[u64], shift: u64) {
        let mag_bits = bit_len(mag);
        if mag_bits == 0 {
            return;
        }
        let addend_bits = mag_bits.saturating_add(shift);
        let fits = addend_bits < self.width
            || (negative && addend_bits == self.width && is_power_of_two(mag));
        if shift >= self.width {
            // contributes 0 modulo 2^W
            self.flags.overflow_advisory = true;
            return;
        }
        let old_sign = self.sign_bit();
        if negative {
            sub_shifted(&mut self.limbs, mag, shift);
        } else {
            add_shifted(&mut self.limbs, mag, shift);
        }
        self.mask_top();
        if !fits || (old_sign == negative && self.sign_bit() != old_sign) {
            self.flags.overflow_advisory = true;
        }
    }

    fn sign_bit(&self) -> bool {
        let top = self.width - 1;
        (self.limbs[(top / 64) as usize] >> (top % 64)) & 1 == 1
    }

    fn mask_top(&mut self) {
        let rem = self.width % 64;
        if rem != 0 {
            let last = self.limbs.len() - 1;
            self.limbs[last] &= (1u64 << rem) - 1;
        }
    }

    /// The exact value `register * 2^lsb`.
    pub fn to_exact(&self) -> Result<Dyadic> {
        if self.flags.poisoned_nan || (self.flags.poisoned_inf_pos && self.flags.poisoned_inf_neg) {
            return Err(Error::Poisoned("nan"));
        }
        if self.flags.poisoned_inf_pos {
            return Err(Error::Poisoned("+inf"));
        }
        if self.flags.poisoned_inf_neg {
            return Err(Error::Poisoned("-inf"));
        }
        Ok(Dyadic::new(self.register(), self.cfg.lsb))
    }

    /// The single final rounding into `fmt`.
    ///
    /// NaN poison (or both infinities) gives the format's NaN/NaR, one
    /// infinity gives that infinity (NaR for posits).
    pub fn round_into(&self, fmt: FormatSpec) -> u128 {
        let f = self.flags;
        if f.poisoned_nan || (f.poisoned_inf_pos && f.poisoned_inf_neg) {
            fmt.nan_bits()
        } else if f.poisoned_inf_pos {
            fmt.inf_bits(false)
        } else if f.poisoned_inf_neg {
            fmt.inf_bits(true)
        } else {
            encode_dyadic(&Dyadic::new(self.register(), self.cfg.lsb), fmt)
        }
    }
}

fn bit_len(mag: &[u64]) -> u64 {
    match mag.iter().rposition(|&d| d != 0) {
        Some(i) => 64 * i as u64 + (64 - u64::from(mag[i].leading_zeros())),
        None => 0,
    }
}

fn is_power_of_two(mag: &[u64]) -> bool {
    mag.iter().map(|d| d.count_ones()).sum::<u32>() == 1
}

/// `out = mag >> k`; returns whether any nonzero bit was shifted out.
fn shr_digits(mag: &[u64], k: u64, out: &mut Vec<u64>) -> bool {
    out.clear();
    let limb_shift = usize::try_from(k / 64).unwrap_or(usize::MAX);
    let bit = (k % 64) as u32;
    if limb_shift >= mag.len() {
        return mag.iter().any(|&d| d != 0);
    }
    let mut dropped = mag[..limb_shift].iter().any(|&d| d != 0);
    if bit > 0 {
        dropped |= mag[limb_shift] & ((1u64 << bit) - 1) != 0;
    }
    for i in limb_shift..mag.len() {
        let lo = mag[i] >> bit;
        let hi = if bit > 0 && i + 1 < mag.len() { mag[i + 1] << (64 - bit) } else { 0 };
        out.push(lo | hi);
    }
    dropped
}

fn increment(digits: &mut Vec<u64>) {
    for d in digits.iter_mut() {
        let (s, carry) = d.overflowing_add(1);
        *d = s;
        if !carry {
            return;
        }
    }
    digits.push(1);
}

/// Digit `i` of `mag << bit` (`bit < 64`), for `i` in `0..=mag.len()`.
fn shifted_digit(mag: &[u64], bit: u32, i: usize) -> u64 {
    let lo = if i < mag.len() { mag[i] << bit } else { 0 };
    let hi = if bit > 0 && i > 0 { mag[i - 1] >> (64 - bit) } else { 0 };
    lo | hi
}

/// `limbs += mag << shift` modulo `2^(64 * limbs.len())`.
fn add_shifted(limbs: &mut [u64], mag: &[u64], shift: u64) {
    let start = (shift / 64) as usize;
    let bit = (shift % 64) as u32;
    let mut carry = false;
    let mut j = start;
    for i in 0..=mag.len() {
        if j >= limbs.len() {
            return;
        }
        let (s1, c1) = limbs[j].overflowing_add(shifted_digit(mag, bit, i));
        let (s2, c2) = s1.overflowing_add(u64::from(carry));
        limbs[j] = s2;
        carry = c1 || c2;
        j += 1;
    }
    while carry && j < limbs.len() {
        let (s, c) = limbs[j].overflowing_add(1);
        limbs[j] = s;
        carry = c;
        j += 1;
    }
}

/// `limbs -= mag << shift` modulo `2^(64 * limbs.len())`.
fn sub_shifted(limbs: &mut [u64], mag: &[u64], shift: u64) {
    let start = (shift / 64) as usize;
    let bit = (shift % 64) as u32;
    let mut borrow = false;
    let mut j = start;
    for i in 0..=mag.len() {
        if j >= limbs.len() {
            return;
        }
        let (s1, b1) = limbs[j].overflowing_sub(shifted_digit(mag, bit, i));
        let (s2, b2) = s1.overflowing_sub(u64::from(borrow));
        limbs[j] = s2;
        borrow = b1 || b2;
        j += 1;
    }
    while borrow && j < limbs.len() {
        let (s, b) = limbs[j].overflowing_sub(1);
        limbs[j] = s;
        borrow = b;
        j += 1;
    }
}
