// Verilog for the binary64 ⟨30,30,−30⟩ datapath plus golden vectors, written
// to a scratch directory.

use fdpgen::rtl::{default_module_name, derive_params, emit_fdp, emit_golden, lint};
use fdpgen::{AccumConfig, FormatSpec, Result};

pub fn run_example() -> Result<()> {
    let f = FormatSpec::BINARY64;
    let cfg = AccumConfig::new(30, 30, -30)?;
    let params = derive_params(f, cfg, f)?;
    println!("{params:?}");

    let name = default_module_name(f, cfg, f);
    let verilog = emit_fdp(&params, cfg, f, f, &name)?;
    let report = lint(&verilog, &params)?;
    println!("module {} with {} ports, {}-bit accumulator", report.module_name, report.ports.len(), report.acc_width);

    let golden = emit_golden(f, cfg, f, 64, fdpgen::DEFAULT_SEED)?;
    assert_eq!(golden.replay()?, golden.expected());

    let dir = std::env::temp_dir().join("fdpgen-rtl-example");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join(format!("{name}.v")), &verilog)?;
    std::fs::write(dir.join(format!("{name}_golden.csv")), golden.to_csv())?;
    println!("wrote {} lines of Verilog and {} golden rows to {}", verilog.lines().count(), golden.rows.len(), dir.display());

    let posit = derive_params(FormatSpec::POSIT16_1, AccumConfig::new(4, 56, -56)?, f)?;
    let err = emit_fdp(&posit, AccumConfig::new(4, 56, -56)?, FormatSpec::POSIT16_1, f, "p").unwrap_err();
    println!("posit16_1: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
