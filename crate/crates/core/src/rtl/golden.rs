use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::accumulator::AccumConfig;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::formats::{encode_dyadic, format_hex, FormatSpec};
use crate::kernels::fdp;

const MAX_GROUP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub a: u128,
    pub b: u128,
    pub last: bool,
    /// Present on `last` rows only.
    pub expected: Option<u128>,
}

/// Operand stream with `last` markers and the software model's results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenVectors {
    pub fmt_in: FormatSpec,
    pub cfg: AccumConfig,
    pub fmt_out: FormatSpec,
    pub seed: u64,
    pub rows: Vec<GoldenRow>,
}

impl GoldenVectors {
    pub const CSV_HEADER: &'static str = "a_hex,b_hex,last,expected_hex";

    /// Builds rows from explicit dot products, computing each expected value
    /// with [`fdp`].
    pub fn from_dots(
        fmt_in: FormatSpec,
        cfg: AccumConfig,
        fmt_out: FormatSpec,
        seed: u64,
        dots: &[Vec<(u128, u128)>],
    ) -> Result<Self> {
        let mut rows = Vec::new();
        for dot in dots {
            if dot.is_empty() {
                return Err(Error::InvalidParameter("golden dot products need at least one pair".into()));
            }
            let (x, y): (Vec<u128>, Vec<u128>) = dot.iter().copied().unzip();
            let expected = fdp(&x, &y, fmt_in, cfg, fmt_out)?;
            for (i, &(a, b)) in dot.iter().enumerate() {
                let last = i + 1 == dot.len();
                rows.push(GoldenRow { a, b, last, expected: last.then_some(expected) });
            }
        }
        Ok(GoldenVectors { fmt_in, cfg, fmt_out, seed, rows })
    }

    /// Operand pairs split at `last` markers; a trailing unterminated group
    /// is dropped.
    pub fn dots(&self) -> Vec<Vec<(u128, u128)>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for r in &self.rows {
            cur.push((r.a, r.b));
            if r.last {
                out.push(std::mem::take(&mut cur));
            }
        }
        out
    }

    /// Recomputes every dot product through the software model.
    pub fn replay(&self) -> Result<Vec<u128>> {
        self.dots()
            .iter()
            .map(|d| {
                let (x, y): (Vec<u128>, Vec<u128>) = d.iter().copied().unzip();
                fdp(&x, &y, self.fmt_in, self.cfg, self.fmt_out)
            })
            .collect()
    }

    pub fn expected(&self) -> Vec<u128> {
        self.rows.iter().filter_map(|r| r.expected).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# {},{},{},{}\n{}\n", self.fmt_in, self.cfg, self.fmt_out, self.seed, Self::CSV_HEADER);
        for r in &self.rows {
            let exp = r.expected.map(|e| format_hex(e, self.fmt_out)).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{}\n",
                format_hex(r.a, self.fmt_in),
                format_hex(r.b, self.fmt_in),
                u8::from(r.last),
                exp
            ));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let perr = |m: String| Error::Parse(format!("golden vectors: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().and_then(|l| l.strip_prefix('#')).ok_or_else(|| perr("missing # header".into()))?;
        let fields: Vec<&str> = head.trim().split(',').collect();
        let [fmt_in, cfg, fmt_out, seed] = fields[..] else {
            return Err(perr(format!("header `{head}` needs format,ovf:msb:lsb,out_format,seed")));
        };
        let fmt_in: FormatSpec = fmt_in.trim().parse()?;
        let cfg: AccumConfig = cfg.trim().parse()?;
        let fmt_out: FormatSpec = fmt_out.trim().parse()?;
        let seed: u64 = seed.trim().parse().map_err(|_| perr(format!("bad seed `{seed}`")))?;
        let hex = |t: &str| {
            let t = t.trim();
            t.strip_prefix("0x")
                .and_then(|h| u128::from_str_radix(h, 16).ok())
                .ok_or_else(|| perr(format!("bad hex field `{t}`")))
        };
        let mut rows = Vec::new();
        for line in lines {
            if line.trim() == Self::CSV_HEADER {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            let [a, b, last, expected] = f[..] else {
                return Err(perr(format!("row `{line}` needs 4 fields")));
            };
            let last = match last.trim() {
                "0" => false,
                "1" => true,
                other => return Err(perr(format!("bad last flag `{other}`"))),
            };
            let expected = if expected.trim().is_empty() { None } else { Some(hex(expected)?) };
            if expected.is_some() != last {
                return Err(perr(format!("row `{line}`: expected value must be present exactly on last rows")));
            }
            rows.push(GoldenRow { a: hex(a)?, b: hex(b)?, last, expected });
        }
        Ok(GoldenVectors { fmt_in, cfg, fmt_out, seed, rows })
    }
}

fn random_operand(rng: &mut ChaCha8Rng, fmt: FormatSpec, cfg: AccumConfig) -> u128 {
    let roll: f64 = rng.gen();
    if roll < 0.01 {
        return if fmt.is_posit() || rng.gen_bool(0.5) { fmt.nan_bits() } else { fmt.inf_bits(rng.gen()) };
    }
    if roll < 0.06 {
        return 0;
    }
    if roll < 0.30 {
        return rng.gen::<u128>() & fmt.mask();
    }
    // operands whose products land inside the register window
    let lo = cfg.lsb().div_euclid(2);
    let hi = (cfg.msb().div_euclid(2)).max(lo);
    let e = rng.gen_range(lo..=hi);
    let bits = fmt.precision().min(64);
    let sig = rng.gen::<u64>() >> (64 - bits) | 1u64 << (bits - 1);
    let v = Dyadic::from_parts(rng.gen(), BigUint::from(sig), e - i64::from(bits) + 1);
    encode_dyadic(&v, fmt)
}

/// `n_vectors` seeded operand rows grouped into dot products of 1 to 16
/// pairs. Operands mix in-window values, raw patterns, zeros and a few
/// specials.
pub fn emit_golden(
    fmt_in: FormatSpec,
    cfg: AccumConfig,
    fmt_out: FormatSpec,
    n_vectors: usize,
    seed: u64,
) -> Result<GoldenVectors> {
    if n_vectors == 0 {
        return Err(Error::InvalidParameter("n_vectors must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dots = Vec::new();
    let mut left = n_vectors;
    while left > 0 {
        let len = rng.gen_range(1..=MAX_GROUP).min(left);
        left -= len;
        dots.push((0..len).map(|_| (random_operand(&mut rng, fmt_in, cfg), random_operand(&mut rng, fmt_in, cfg))).collect());
    }
    GoldenVectors::from_dots(fmt_in, cfg, fmt_out, seed, &dots)
}
