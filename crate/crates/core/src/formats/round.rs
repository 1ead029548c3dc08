use num_bigint::BigUint;
use num_traits::One;

/// `round(mag / 2^k)` to nearest, ties to even.
pub(crate) fn shr_round_even(mag: &BigUint, k: u64) -> BigUint {
    if k == 0 {
        return mag.clone();
    }
    let q = mag >> k;
    let half = mag.bit(k - 1);
    let sticky = half && mag.trailing_zeros().is_some_and(|tz| tz < k - 1);
    if half && (sticky || q.bit(0)) {
        q + BigUint::one()
    } else {
        q
    }
}
