use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::formats::{decode, FormatSpec, UnpackedReal};

/// Exact `Σ x[i] * y[i]`.
///
/// Deliberately shares nothing with the accumulator: every product is formed
/// as a big integer, all are aligned to the smallest product exponent and
/// summed with unbounded integers.
pub fn exact_dot(x: &[UnpackedReal], y: &[UnpackedReal]) -> Result<Dyadic> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { x: x.len(), y: y.len() });
    }
    let mut terms: Vec<(BigInt, i64)> = Vec::with_capacity(x.len());
    for (a, b) in x.iter().zip(y) {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Poisoned("non-finite operand"));
        }
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let sign = if a.negative != b.negative { Sign::Minus } else { Sign::Plus };
        let mag = &a.significand * &b.significand;
        terms.push((BigInt::from_biguint(sign, mag), a.exponent + b.exponent));
    }
    let Some(base) = terms.iter().map(|t| t.1).min() else {
        return Ok(Dyadic::zero());
    };
    let mut sum = BigInt::zero();
    for (mant, exp) in terms {
        sum += mant << ((exp - base) as usize);
    }
    Ok(Dyadic::new(sum, base))
}

/// [`exact_dot`] over packed vectors.
pub fn exact_dot_bits(x: &[u128], y: &[u128], fmt: FormatSpec) -> Result<Dyadic> {
    let dx = x.iter().map(|&b| decode(b, fmt)).collect::<Result<Vec<_>>>()?;
    let dy = y.iter().map(|&b| decode(b, fmt)).collect::<Result<Vec<_>>>()?;
    exact_dot(&dx, &dy)
}
