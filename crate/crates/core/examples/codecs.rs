// Decoding, encoding and literal parsing across IEEE-like, bfloat16 and
// posit formats.

use fdpgen::{decode, encode, format_hex, parse_bits, FormatSpec, Result};

pub fn run_example() -> Result<()> {
    let formats = [
        FormatSpec::BINARY16,
        FormatSpec::BFLOAT16,
        FormatSpec::BINARY32,
        FormatSpec::POSIT16_1,
        FormatSpec::POSIT32_2,
    ];
    for lit in ["1", "0.1", "-3.14159", "65504", "1e-7"] {
        let cells: Vec<String> = formats
            .iter()
            .map(|&f| parse_bits(lit, f).map(|b| format!("{f}={}", format_hex(b, f))))
            .collect::<Result<_>>()?;
        println!("{lit:>9}: {}", cells.join("  "));
    }

    // every bfloat16 pattern survives a decode/encode round trip
    let bf = FormatSpec::BFLOAT16;
    let mut kept = 0;
    for bits in 0..=0xFFFFu128 {
        let v = decode(bits, bf)?;
        let back = encode(&v, bf);
        assert!(back == bits || v.is_nan());
        kept += usize::from(back == bits);
    }
    println!("bfloat16: {kept} of 65536 patterns reproduced exactly, the rest are NaNs");

    // posits saturate instead of overflowing, and have a single NaR
    let p = FormatSpec::POSIT16_1;
    println!("posit16_1: 1e30 -> {}, 1e-30 -> {}, nan -> {}",
        format_hex(parse_bits("1e30", p)?, p),
        format_hex(parse_bits("1e-30", p)?, p),
        format_hex(parse_bits("nan", p)?, p));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
