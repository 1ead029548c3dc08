// Bits-per-watt ratios from fixed published power figures. Nothing here is
// measured.

use fdpgen::analysis::{bits_per_watt, PowerConstants};
use fdpgen::Result;

pub fn run_example() -> Result<()> {
    let constants = PowerConstants::published();
    // FDP keeps 52 bits; quad keeps a fifth of that, double 1/27.7
    let bits = [("fdp:30:30:-30", 52.0), ("fma:binary128", 52.0 / 5.0), ("fma:binary64", 52.0 / 27.7)];
    let table = bits_per_watt(&bits, &constants)?;
    for (k, bpw) in &table.bits_per_watt {
        println!("{k:<14} {bpw:>8.3} bits/W (watts {:?})", constants.watts(k));
    }
    for den in ["fma:binary128", "fma:binary64"] {
        println!("fdp / {den}: {:.4}", table.ratio("fdp:30:30:-30", den).expect("both registered"));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
