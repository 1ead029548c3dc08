// Generated dot products with a prescribed condition number.

use fdpgen::analysis::{exact_dot_bits, gen_dot};
use fdpgen::{FormatSpec, Result};

pub fn run_example() -> Result<()> {
    for target in [1.0, 1e5, 1e10, 1e20, 1e30] {
        let g = gen_dot(100, target, FormatSpec::BINARY64, 42)?;
        assert_eq!(exact_dot_bits(&g.x, &g.y, g.fmt)?, g.exact);
        println!("target {target:>6.0e}: achieved {:.2e}, exact dot ≈ {:.6e}", g.achieved_cond, g.exact.to_f64());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
