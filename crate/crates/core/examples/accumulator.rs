// The ⟨ovf, msb, lsb⟩ register: flooring below lsb, wrap-around above
// msb, poisoning by NaN and infinities.

use fdpgen::{decode, parse_bits, AccumConfig, Accumulator, FormatSpec, Result};

pub fn run_example() -> Result<()> {
    let f = FormatSpec::BINARY32;
    let v = |s: &str| parse_bits(s, f).and_then(|b| decode(b, f));
    let one = v("1")?;

    // 4 fraction bits: 2^-5 is floored away, 2^-4 is kept
    let cfg = AccumConfig::new(2, 4, -4)?;
    let mut acc = Accumulator::zero(cfg);
    acc.mac(&v("0.03125")?, &one);
    acc.mac(&v("0.0625")?, &one);
    println!("{cfg} (W={}): 2^-5 + 2^-4 -> {}", cfg.width(), acc.to_exact()?);

    // partial sums overflow the register but the final value fits
    let cfg = AccumConfig::new(0, 4, 0)?;
    let mut acc = Accumulator::zero(cfg);
    for s in ["20", "20", "-25", "-10"] {
        acc.mac(&v(s)?, &one);
        println!("  + {s:>3}: register {:>4}, overflow advisory {}", acc.register(), acc.flags().overflow_advisory);
    }
    assert_eq!(acc.to_exact()?.to_f64(), 5.0);

    let mut acc = Accumulator::zero(AccumConfig::new(8, 8, -8)?);
    acc.mac(&v("inf")?, &one);
    acc.mac(&v("-inf")?, &one);
    println!("+inf then -inf: {:?}, rounds to 0x{:X}", acc.to_exact().err(), acc.round_into(f));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
