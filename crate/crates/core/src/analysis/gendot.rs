//! Ill-conditioned dot products in the style of Ogita, Rump and Oishi's
//! GenDot: the first half of the entries span exponents `[0, b/2]` with
//! `b = log2(target_cond)`, the second half are chosen so that each new
//! product nearly cancels the running exact sum, leaving a small final value.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{condition_number, exact_dot};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::formats::{decode, encode_dyadic, FormatSpec, UnpackedReal};

/// Grid exponent used by [`gen_dot`]: entries are multiples of `2^-15`, so
/// every product is a multiple of `2^-30`.
pub const DEFAULT_GRID_EXP: i32 = -15;

/// A generated instance.
#[derive(Clone, Debug, Serialize)]
pub struct GenDot {
    pub n: usize,
    pub target_cond: f64,
    pub seed: u64,
    #[serde(skip)]
    pub fmt: FormatSpec,
    #[serde(skip)]
    pub x: Vec<u128>,
    #[serde(skip)]
    pub y: Vec<u128>,
    #[serde(serialize_with = "crate::analysis::report::ser_dyadic")]
    pub exact: Dyadic,
    pub achieved_cond: f64,
}

impl GenDot {
    pub fn decoded(&self) -> (Vec<UnpackedReal>, Vec<UnpackedReal>) {
        let dec = |v: &[u128]| v.iter().map(|&b| decode(b, self.fmt).expect("generated patterns are valid")).collect();
        (dec(&self.x), dec(&self.y))
    }
}

/// Instance on the default `2^-15` grid, which keeps every product inside
/// the window of any accumulator with `lsb <= -30`.
pub fn gen_dot(n: usize, target_cond: f64, fmt: FormatSpec, seed: u64) -> Result<GenDot> {
    gen_dot_on_grid(n, target_cond, fmt, seed, Some(DEFAULT_GRID_EXP))
}

/// Instance whose entries are multiples of `2^grid_exp` (`None`: full
/// double-precision entries).
pub fn gen_dot_on_grid(
    n: usize,
    target_cond: f64,
    fmt: FormatSpec,
    seed: u64,
    grid_exp: Option<i32>,
) -> Result<GenDot> {
    if n < 6 {
        return Err(Error::InvalidParameter(format!("gen_dot needs n >= 6, got {n}")));
    }
    if target_cond.is_nan() || target_cond < 1.0 || !target_cond.is_finite() {
        return Err(Error::InvalidParameter(format!("target condition must be finite and >= 1, got {target_cond}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quantize = |v: f64| match grid_exp {
        Some(g) => (v * 2f64.powi(-g)).round() * 2f64.powi(g),
        None => v,
    };
    let b = target_cond.log2();

    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
    if b < 1.0 {
        // nothing to cancel: positive entries only
        for _ in 0..n {
            pairs.push((quantize(rng.gen_range(0.5..1.0)), quantize(rng.gen_range(0.5..1.0))));
        }
    } else {
        let half = n.div_ceil(2);
        let mut exps: Vec<i32> = (0..half).map(|_| (rng.gen::<f64>() * b / 2.0).round() as i32).collect();
        exps[0] = (b / 2.0).round() as i32 + 1;
        exps[half - 1] = 0;
        let mut partial = Dyadic::zero();
        for &e in &exps {
            let x = quantize(rng.gen_range(-1.0..1.0) * 2f64.powi(e));
            let y = quantize(rng.gen_range(-1.0..1.0) * 2f64.powi(e));
            partial = &partial + &(&exact_f64(x) * &exact_f64(y));
            pairs.push((x, y));
        }
        let rest = n - half;
        for i in 0..rest {
            // exponents descend linearly from b/2 to 0
            let t = if rest == 1 { 1.0 } else { i as f64 / (rest - 1) as f64 };
            let e = ((1.0 - t) * b / 2.0).round() as i32;
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let x = quantize(sign * rng.gen_range(0.5..1.0) * 2f64.powi(e));
            // magnitude bounded away from zero so the final sum cannot vanish
            let target_sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let target = target_sign * rng.gen_range(0.5..1.0) * 2f64.powi(e);
            let y = quantize((target - partial.to_f64()) / x);
            partial = &partial + &(&exact_f64(x) * &exact_f64(y));
            pairs.push((x, y));
        }
    }
    pairs.shuffle(&mut rng);

    let to_bits = |v: f64| encode_dyadic(&exact_f64(v), fmt);
    let x: Vec<u128> = pairs.iter().map(|p| to_bits(p.0)).collect();
    let y: Vec<u128> = pairs.iter().map(|p| to_bits(p.1)).collect();
    let mut inst = GenDot { n, target_cond, seed, fmt, x, y, exact: Dyadic::zero(), achieved_cond: 1.0 };
    let (dx, dy) = inst.decoded();
    inst.exact = exact_dot(&dx, &dy)?;
    inst.achieved_cond = condition_number(&dx, &dy, &inst.exact);
    Ok(inst)
}

fn exact_f64(v: f64) -> Dyadic {
    Dyadic::from_f64(v).expect("generator values are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::exact_dot_bits;

    #[test]
    fn target_one_is_all_positive() {
        let g = gen_dot(32, 1.0, FormatSpec::BINARY64, 3).unwrap();
        let (dx, dy) = g.decoded();
        assert!(dx.iter().chain(&dy).all(|v| !v.negative && !v.is_zero()));
        assert!((g.achieved_cond - 1.0).abs() < 1e-12);
    }

    #[test]
    fn achieved_condition_tracks_target() {
        for seed in 0..10 {
            let g = gen_dot(128, 1e15, FormatSpec::BINARY64, seed).unwrap();
            assert!((1e13..=1e17).contains(&g.achieved_cond), "seed {seed}: {}", g.achieved_cond);
        }
    }

    #[test]
    fn exact_field_is_self_consistent() {
        for (n, c) in [(6, 10.0), (7, 1e8), (100, 1e20)] {
            let g = gen_dot(n, c, FormatSpec::BINARY64, 99).unwrap();
            assert_eq!(g.x.len(), n);
            assert_eq!(exact_dot_bits(&g.x, &g.y, g.fmt).unwrap(), g.exact);
        }
    }

    #[test]
    fn entries_sit_on_the_grid() {
        let g = gen_dot(64, 1e12, FormatSpec::BINARY64, 5).unwrap();
        let (dx, dy) = g.decoded();
        assert!(dx.iter().chain(&dy).all(|v| v.is_zero() || v.exponent >= i64::from(DEFAULT_GRID_EXP)));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_dot(50, 1e9, FormatSpec::BINARY32, 17).unwrap();
        let b = gen_dot(50, 1e9, FormatSpec::BINARY32, 17).unwrap();
        let c = gen_dot(50, 1e9, FormatSpec::BINARY32, 18).unwrap();
        assert_eq!(a.x, b.x);
        assert_eq!(a.y, b.y);
        assert_ne!(a.x, c.x);
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(gen_dot(5, 10.0, FormatSpec::BINARY64, 0).is_err());
        assert!(gen_dot(10, 0.5, FormatSpec::BINARY64, 0).is_err());
        assert!(gen_dot(10, f64::NAN, FormatSpec::BINARY64, 0).is_err());
        assert!(gen_dot(10, f64::INFINITY, FormatSpec::BINARY64, 0).is_err());
    }
}
