// One rounding at the end versus one rounding per step.

use fdpgen::analysis::{correct_bits, exact_dot_bits};
use fdpgen::{fdp, fma_chain_dot, format_hex, parse_bits, AccumConfig, FormatSpec, Result};

pub fn run_example() -> Result<()> {
    let f = FormatSpec::BINARY64;
    let x: Vec<u128> = ["1e16", "1", "-1e16", "0.5"].iter().map(|s| parse_bits(s, f)).collect::<Result<_>>()?;
    let y: Vec<u128> = ["1", "1", "1", "1"].iter().map(|s| parse_bits(s, f)).collect::<Result<_>>()?;
    let exact = exact_dot_bits(&x, &y, f)?;

    let cfg: AccumConfig = "30:60:-30".parse()?;
    let fused = fdp(&x, &y, f, cfg, f)?;
    let chain = fma_chain_dot(&x, &y, f, f)?;
    let quad = fma_chain_dot(&x, &y, f, FormatSpec::BINARY128)?;

    println!("exact          {} ({})", exact, exact.to_f64());
    println!("fdp {cfg:<10} {}  correct bits {}", format_hex(fused, f), correct_bits(fused, f, &exact));
    println!("fma binary64   {}  correct bits {}", format_hex(chain, f), correct_bits(chain, f, &exact));
    println!("fma binary128  {}", format_hex(quad, FormatSpec::BINARY128));
    assert_eq!(f64::from_bits(fused as u64), 1.5);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
