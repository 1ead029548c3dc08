//! Behavioral Verilog for the FDP datapath, the widths it is built from, and
//! golden vectors computed by the software model.

mod golden;
mod lint;
mod params;
mod verilog;

pub use golden::{emit_golden, GoldenRow, GoldenVectors};
pub use lint::{lint, LintReport};
pub use params::{derive_params, PipelineParams};
pub use verilog::{default_module_name, emit_fdp};
