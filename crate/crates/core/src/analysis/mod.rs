//! Ground truth and metrics: an exact oracle, correct-bits scoring, a
//! permutation reproducibility probe, an ill-conditioned dot-product
//! generator, and bits-per-watt reporting from fixed power constants.

mod gendot;
mod metrics;
mod oracle;
mod power;
mod repro;
mod report;

pub use gendot::{gen_dot, gen_dot_on_grid, GenDot, DEFAULT_GRID_EXP};
pub use metrics::{condition_number, correct_bits, median};
pub use oracle::{exact_dot, exact_dot_bits};
pub use power::{bits_per_watt, PowerConstants, Ratio, RatioTable};
pub use repro::{repro_probe, ReproReport};
pub use report::{evaluate_dot, ssh_sweep, DotReport, KernelResult, SweepConfig, SweepRow};
