// Correct bits of the binary64 and binary128 FMA chains and the 91-bit FDP
// as the condition number grows.

use fdpgen::analysis::{median, ssh_sweep, PowerConstants, SweepConfig};
use fdpgen::{AccumConfig, FormatSpec, Result};

pub fn run_example() -> Result<()> {
    let cfg = SweepConfig {
        sizes: vec![256],
        conds: vec![1e5, 1e10, 1e15, 1e20, 1e30],
        fmt: FormatSpec::BINARY64,
        cfg: AccumConfig::new(30, 30, -30)?,
        instances: 5,
        seed: fdpgen::DEFAULT_SEED,
        constants: PowerConstants::published(),
    };
    let rows = ssh_sweep(&cfg)?;
    println!("{:>8} {:>16} {:>16} {:>16}", "cond", "fma:binary64", "fma:binary128", "fdp:30:30:-30");
    for &c in &cfg.conds {
        let med = |k: &str| {
            let v: Vec<f64> = rows.iter().filter(|r| r.target_cond == c && r.kernel == k).map(|r| r.correct_bits).collect();
            median(&v)
        };
        println!("{c:>8.0e} {:>16.1} {:>16.1} {:>16.1}", med("fma:binary64"), med("fma:binary128"), med("fdp:30:30:-30"));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
