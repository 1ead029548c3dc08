//! Dot-product and GEMM kernels: the fused dot product built on
//! [`Accumulator`], and FMA-chain baselines that round after every step.

mod fma;
mod gemm;
mod matrix;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::accumulator::{AccumConfig, Accumulator};
use crate::error::{Error, Result};
use crate::formats::{decode, FormatSpec};

pub use fma::{fma_chain_dot, FmaChain};
pub use gemm::{gemm, gemm_with_workers};
pub use matrix::PackedMatrix;

/// Which accumulation strategy a kernel uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// Fused dot product into a fixed-point accumulator, one final rounding.
    Fdp(AccumConfig),
    /// Sequential fused multiply-adds, rounding into `acc_fmt` at every step.
    FmaChain(FormatSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub out_fmt: FormatSpec,
}

impl KernelSpec {
    pub fn fdp(cfg: AccumConfig, out_fmt: FormatSpec) -> Self {
        KernelSpec { kind: KernelKind::Fdp(cfg), out_fmt }
    }

    pub fn fma_chain(acc_fmt: FormatSpec, out_fmt: FormatSpec) -> Result<Self> {
        if !acc_fmt.is_ieee() {
            return Err(Error::Unsupported(format!(
                "FMA-chain accumulation needs an IEEE-like format, got {acc_fmt}"
            )));
        }
        Ok(KernelSpec { kind: KernelKind::FmaChain(acc_fmt), out_fmt })
    }

    /// Stable identifier, `fdp:<ovf:msb:lsb>` or `fma:<format>`.
    pub fn id(&self) -> String {
        self.kind.to_string()
    }

    /// Dot product of two packed vectors of `in_fmt`, delivered in `out_fmt`.
    pub fn dot(&self, x: &[u128], y: &[u128], in_fmt: FormatSpec) -> Result<u128> {
        match self.kind {
            KernelKind::Fdp(cfg) => fdp(x, y, in_fmt, cfg, self.out_fmt),
            KernelKind::FmaChain(acc_fmt) => {
                let r = fma_chain_dot(x, y, in_fmt, acc_fmt)?;
                fma::convert(r, acc_fmt, self.out_fmt)
            }
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Fdp(cfg) => write!(f, "fdp:{cfg}"),
            KernelKind::FmaChain(acc) => write!(f, "fma:{acc}"),
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    /// `fdp:30:30:-30` or `fma:binary64`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(cfg) = s.strip_prefix("fdp:") {
            return Ok(KernelKind::Fdp(cfg.parse()?));
        }
        if let Some(f) = s.strip_prefix("fma:") {
            let acc: FormatSpec = f.parse()?;
            if !acc.is_ieee() {
                return Err(Error::Unsupported(format!("FMA-chain accumulation needs an IEEE-like format, got {acc}")));
            }
            return Ok(KernelKind::FmaChain(acc));
        }
        Err(Error::UnknownKernel(s.to_string()))
    }
}

impl Serialize for KernelKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Accumulates `x · y` into a fresh accumulator without rounding.
pub fn fdp_accumulate(x: &[u128], y: &[u128], in_fmt: FormatSpec, cfg: AccumConfig) -> Result<Accumulator> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { x: x.len(), y: y.len() });
    }
    let mut acc = Accumulator::zero(cfg);
    for (&a, &b) in x.iter().zip(y) {
        acc.mac(&decode(a, in_fmt)?, &decode(b, in_fmt)?);
    }
    Ok(acc)
}

/// Fused dot product: exact products into a ⟨ovf, msb, lsb⟩ accumulator,
/// rounded once into `out_fmt`. Empty vectors give `+0`.
pub fn fdp(x: &[u128], y: &[u128], in_fmt: FormatSpec, cfg: AccumConfig, out_fmt: FormatSpec) -> Result<u128> {
    Ok(fdp_accumulate(x, y, in_fmt, cfg)?.round_into(out_fmt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{encode_dyadic, parse_bits};
    use crate::Dyadic;

    fn b64(v: f64) -> u128 {
        u128::from(v.to_bits())
    }

    #[test]
    fn single_product() {
        let cfg = AccumConfig::new(30, 30, -30).unwrap();
        let r = fdp(&[b64(1.0)], &[b64(1.0)], FormatSpec::BINARY64, cfg, FormatSpec::BINARY64).unwrap();
        assert_eq!(r, b64(1.0));
    }

    #[test]
    fn fdp_keeps_bits_the_chain_loses() {
        let t = 2f64.powi(-53);
        let x = [b64(1.0), b64(t), b64(t)];
        let y = [b64(1.0); 3];
        let cfg = AccumConfig::new(30, 30, -60).unwrap();
        let r = fdp(&x, &y, FormatSpec::BINARY64, cfg, FormatSpec::BINARY64).unwrap();
        assert_eq!(r, 0x3FF0_0000_0000_0001);
        let chain = fma_chain_dot(&x, &y, FormatSpec::BINARY64, FormatSpec::BINARY64).unwrap();
        assert_eq!(chain, b64(1.0));
    }

    #[test]
    fn empty_and_mismatched_vectors() {
        let cfg = AccumConfig::new(2, 4, -4).unwrap();
        assert_eq!(fdp(&[], &[], FormatSpec::BINARY32, cfg, FormatSpec::BINARY32).unwrap(), 0);
        assert!(matches!(
            fdp(&[0], &[], FormatSpec::BINARY32, cfg, FormatSpec::BINARY32),
            Err(Error::LengthMismatch { x: 1, y: 0 })
        ));
        assert!(fdp(&[1 << 40], &[0], FormatSpec::BINARY32, cfg, FormatSpec::BINARY32).is_err());
    }

    #[test]
    fn mixed_precision_bfloat16_in_binary32_out() {
        let bf = FormatSpec::BFLOAT16;
        let x: Vec<u128> = ["1.5", "-2", "0.0078125"].iter().map(|s| parse_bits(s, bf).unwrap()).collect();
        let y: Vec<u128> = ["3", "1.25", "1"].iter().map(|s| parse_bits(s, bf).unwrap()).collect();
        let cfg = AccumConfig::new(8, 8, -16).unwrap();
        let r = fdp(&x, &y, bf, cfg, FormatSpec::BINARY32).unwrap();
        // 4.5 - 2.5 + 2^-7
        let want = &Dyadic::from_i64(2) + &Dyadic::pow2(-7);
        assert_eq!(r, encode_dyadic(&want, FormatSpec::BINARY32));
    }

    #[test]
    fn posit_operands() {
        let p = FormatSpec::POSIT16_1;
        let cfg = AccumConfig::new(4, 30, -30).unwrap();
        // 1 * 1 + NaR -> NaR
        let r = fdp(&[0x4000, 0x8000], &[0x4000, 0x4000], p, cfg, p).unwrap();
        assert_eq!(r, 0x8000);
        let r = fdp(&[0x4000, 0x5000], &[0x5000, 0x4000], p, cfg, p).unwrap();
        assert_eq!(r, 0x6000); // 2 + 2 = 4
    }

    #[test]
    fn kernel_ids_round_trip() {
        for id in ["fdp:30:30:-30", "fdp:9:6:-20", "fma:binary64", "fma:binary128"] {
            assert_eq!(id.parse::<KernelKind>().unwrap().to_string(), id);
        }
        assert!("fma:posit16_1".parse::<KernelKind>().is_err());
        assert!("kulisch".parse::<KernelKind>().is_err());
        assert!(KernelSpec::fma_chain(FormatSpec::POSIT16_1, FormatSpec::BINARY64).is_err());
    }

    #[test]
    fn kernel_dot_converts_chain_result_to_out_format() {
        let k = KernelSpec::fma_chain(FormatSpec::BINARY128, FormatSpec::BINARY64).unwrap();
        let t = 2f64.powi(-53);
        let r = k.dot(&[b64(1.0), b64(t), b64(t)], &[b64(1.0); 3], FormatSpec::BINARY64).unwrap();
        assert_eq!(r, 0x3FF0_0000_0000_0001);
    }
}
