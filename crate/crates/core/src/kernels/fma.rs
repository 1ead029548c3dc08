use crate::error::{Error, Result};
use crate::formats::{decode, encode, encode_dyadic, Class, FormatSpec, UnpackedReal};

/// Running state of an FMA chain: `s <- round(s + a*b)` in `acc_fmt`, the
/// product never rounded on its own.
#[derive(Clone, Debug)]
pub struct FmaChain {
    acc_fmt: FormatSpec,
    bits: u128,
}

impl FmaChain {
    /// Starts at `+0`.
    pub fn new(acc_fmt: FormatSpec) -> Result<Self> {
        if !acc_fmt.is_ieee() {
            return Err(Error::Unsupported(format!(
                "FMA-chain accumulation needs an IEEE-like format, got {acc_fmt}"
            )));
        }
        Ok(FmaChain { acc_fmt, bits: 0 })
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn step(&mut self, a: &UnpackedReal, b: &UnpackedReal) {
        let fmt = self.acc_fmt;
        let s = decode(self.bits, fmt).expect("state is always a valid pattern");
        let prod_neg = a.negative != b.negative;
        let prod_class = match (a.class, b.class) {
            (Class::Nan | Class::Nar, _) | (_, Class::Nan | Class::Nar) => Class::Nan,
            (Class::Inf, Class::Zero) | (Class::Zero, Class::Inf) => Class::Nan,
            (Class::Inf, _) | (_, Class::Inf) => Class::Inf,
            (Class::Zero, _) | (_, Class::Zero) => Class::Zero,
            _ => Class::Finite,
        };
        self.bits = match (s.class, prod_class) {
            (Class::Nan, _) | (_, Class::Nan) => fmt.nan_bits(),
            (Class::Inf, Class::Inf) if s.negative != prod_neg => fmt.nan_bits(),
            (_, Class::Inf) => fmt.inf_bits(prod_neg),
            (Class::Inf, _) => self.bits,
            (Class::Zero, Class::Zero) => encode(&UnpackedReal::zero(s.negative && prod_neg), fmt),
            _ => {
                let p = a.exact_mul(b).and_then(|p| p.to_dyadic()).expect("finite product");
                let sum = &s.to_dyadic().expect("finite state") + &p;
                // an exact zero sum of nonzero terms is +0 under round-to-nearest
                encode_dyadic(&sum, fmt)
            }
        };
    }
}

/// Left-to-right FMA chain dot product; the result is a pattern of `acc_fmt`.
pub fn fma_chain_dot(x: &[u128], y: &[u128], in_fmt: FormatSpec, acc_fmt: FormatSpec) -> Result<u128> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { x: x.len(), y: y.len() });
    }
    if in_fmt == FormatSpec::BINARY64 && acc_fmt == FormatSpec::BINARY64 {
        return Ok(binary64_chain(x, y));
    }
    let mut chain = FmaChain::new(acc_fmt)?;
    for (&a, &b) in x.iter().zip(y) {
        chain.step(&decode(a, in_fmt)?, &decode(b, in_fmt)?);
    }
    Ok(chain.bits())
}

/// Same recurrence on host doubles; `f64::mul_add` rounds once per step.
fn binary64_chain(x: &[u128], y: &[u128]) -> u128 {
    let s = x.iter().zip(y).fold(0.0f64, |s, (&a, &b)| {
        f64::from_bits(a as u64).mul_add(f64::from_bits(b as u64), s)
    });
    if s.is_nan() {
        FormatSpec::BINARY64.nan_bits()
    } else {
        u128::from(s.to_bits())
    }
}

/// Re-rounds a pattern of `from` into `to` (identity when equal).
pub(crate) fn convert(bits: u128, from: FormatSpec, to: FormatSpec) -> Result<u128> {
    if from == to {
        return Ok(bits);
    }
    Ok(encode(&decode(bits, from)?, to))
}
