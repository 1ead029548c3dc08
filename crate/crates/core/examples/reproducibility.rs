// Reordering the summands of an ill-conditioned dot product: the FDP
// returns one result, the binary64 FMA chain many.

use fdpgen::analysis::{gen_dot, repro_probe};
use fdpgen::{AccumConfig, FormatSpec, KernelSpec, Result};

pub fn run_example() -> Result<()> {
    let f = FormatSpec::BINARY64;
    let kernels = [KernelSpec::fdp(AccumConfig::new(30, 30, -30)?, f), KernelSpec::fma_chain(f, f)?];
    for (n, cond) in [(64, 1e8), (512, 1e15)] {
        let inst = gen_dot(n, cond, f, 11)?;
        for k in &kernels {
            let r = repro_probe(&inst.x, &inst.y, f, k, 200, 11)?;
            println!(
                "n={n:<4} cond={:.1e} {:<14} distinct={:<4} max_dev={:.3e}",
                inst.achieved_cond, r.kernel, r.distinct_results, r.max_abs_deviation
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
