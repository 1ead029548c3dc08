//! Software model of numerically tailored matrix-multiply kernels.
//!
//! The centrepiece is a fused dot product ([`kernels::fdp`]) that places every
//! exact operand product on the grid of a configurable fixed-point
//! accumulator ⟨ovf, msb, lsb⟩ ([`accumulator`]) and rounds exactly once at
//! the end. Around it sit format codecs for IEEE-like, bfloat16 and posit
//! formats ([`formats`]), conventional FMA-chain baselines and GEMM
//! ([`kernels`]), an exact oracle with correct-bits and reproducibility
//! probes ([`analysis`]), and a Verilog emitter for the datapath ([`rtl`]).

pub mod accumulator;
pub mod analysis;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod formats;
pub mod kernels;
pub mod rtl;

pub use accumulator::{AccumConfig, AccumFlags, Accumulator};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use formats::{decode, encode, encode_dyadic, format_hex, parse_bits, Class, FormatSpec, UnpackedReal};
pub use kernels::{fdp, fma_chain_dot, gemm, KernelKind, KernelSpec, PackedMatrix};

/// Seed used by every seeded entry point when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_F0D9;
