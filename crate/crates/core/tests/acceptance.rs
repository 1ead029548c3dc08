//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero on any failure not listed in `KNOWN_UNATTAINABLE`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fdpgen::analysis::{
    bits_per_watt, correct_bits, exact_dot_bits, gen_dot, median, repro_probe, PowerConstants,
};
use fdpgen::kernels::gemm_with_workers;
use fdpgen::rtl::{default_module_name, derive_params, emit_fdp, emit_golden, lint};
use fdpgen::{
    decode, encode, encode_dyadic, fdp, AccumConfig, Dyadic, FormatSpec, KernelSpec, PackedMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria whose published target cannot be met by a faithful
/// implementation, with the reason printed next to the FAIL line.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    5,
    "27.7 * 0.266 / 0.491 = 15.0066; the published constants cannot give 15.1 +/- 0.05",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn b64(v: f64) -> u128 {
    u128::from(v.to_bits())
}

fn cfg91() -> AccumConfig {
    AccumConfig::new(30, 30, -30).unwrap()
}

fn cfg36() -> AccumConfig {
    AccumConfig::new(9, 6, -20).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let bf = FormatSpec::BFLOAT16;
    let bf_bad = (0..=0xFFFFu128)
        .into_par_iter()
        .filter(|&b| {
            let v = decode(b, bf).unwrap();
            let back = encode(&v, bf);
            !(back == b || (v.is_nan() && back == bf.nan_bits()))
        })
        .count();
    let p = FormatSpec::POSIT16_1;
    let p_bad = (0..=0xFFFFu128).into_par_iter().filter(|&b| encode(&decode(b, p).unwrap(), p) != b).count();

    let random_bad = |fmt: FormatSpec, seed: u64| {
        (0..1_000_000u64)
            .into_par_iter()
            .filter(|&i| {
                let mut r = rng(seed);
                r.set_stream(i);
                let b = r.gen::<u128>() & fmt.mask();
                let v = decode(b, fmt).unwrap();
                let back = encode(&v, fmt);
                !(back == b || (v.is_nan() && back == fmt.nan_bits()))
            })
            .count()
    };
    let f32_bad = random_bad(FormatSpec::BINARY32, 1);
    let f64_bad = random_bad(FormatSpec::BINARY64, 2);
    let t = start.elapsed();
    outcome(
        bf_bad + p_bad + f32_bad + f64_bad == 0 && t < Duration::from_secs(60),
        format!(
            "codec round trip: bfloat16 {bf_bad}/65536, posit16_1 {p_bad}/65536, binary32 {f32_bad}/1e6, \
             binary64 {f64_bad}/1e6 failures in {:.1}s",
            t.as_secs_f64()
        ),
    )
}

/// Random binary64 value with binade in [-20, 20] on the 2^-15 grid, so
/// every product is a multiple of 2^-30.
fn window_value(r: &mut ChaCha8Rng) -> f64 {
    let e = r.gen_range(-20..=20);
    let v = r.gen_range(1.0..2.0) * 2f64.powi(e);
    let v = (v * 32768.0).round() / 32768.0;
    if r.gen() {
        -v
    } else {
        v
    }
}

/// Fraction of `count` seeded window instances whose fdp result equals the
/// correctly rounded exact dot product.
fn oracle_equivalence(fmt: FormatSpec, cfg: AccumConfig, count: u64, max_n: usize, value: fn(&mut ChaCha8Rng) -> f64)
    -> (usize, f64) {
    let results: Vec<(bool, f64)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(1000 + i);
            let n = r.gen_range(1..=max_n);
            let enc = |v: f64| encode_dyadic(&Dyadic::from_f64(v).unwrap(), fmt);
            let x: Vec<u128> = (0..n).map(|_| enc(value(&mut r))).collect();
            let y: Vec<u128> = (0..n).map(|_| enc(value(&mut r))).collect();
            let exact = exact_dot_bits(&x, &y, fmt).unwrap();
            let got = fdp(&x, &y, fmt, cfg, fmt).unwrap();
            (got == encode_dyadic(&exact, fmt), correct_bits(got, fmt, &exact))
        })
        .collect();
    let exact = results.iter().filter(|r| r.0).count();
    let min_bits = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    (exact, min_bits)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (exact, min_bits) = oracle_equivalence(FormatSpec::BINARY64, cfg91(), 1000, 10_000, window_value);
    let t = start.elapsed();

    // outside the window, for information only: full 53-bit operands
    let mut r = rng(77);
    let mut info = Vec::new();
    for _ in 0..20 {
        let n = 1000;
        let v = |r: &mut ChaCha8Rng| r.gen_range(-1.0..1.0) * 2f64.powi(r.gen_range(-20..=20));
        let x: Vec<u128> = (0..n).map(|_| b64(v(&mut r))).collect();
        let y: Vec<u128> = (0..n).map(|_| b64(v(&mut r))).collect();
        let e = exact_dot_bits(&x, &y, FormatSpec::BINARY64).unwrap();
        info.push(correct_bits(fdp(&x, &y, FormatSpec::BINARY64, cfg91(), FormatSpec::BINARY64).unwrap(), FormatSpec::BINARY64, &e));
    }
    outcome(
        exact == 1000 && min_bits == 52.0 && t < Duration::from_secs(120),
        format!(
            "oracle equivalence <30,30,-30>: {exact}/1000 bit-exact, min correct_bits {min_bits} in {:.1}s \
             (info: full-precision operands outside the window give median {:.1} bits)",
            t.as_secs_f64(),
            median(&info)
        ),
    )
}

fn criterion_3() -> Outcome {
    let f = FormatSpec::BINARY64;
    let fdp_k = KernelSpec::fdp(cfg91(), f);
    let mut fdp_ok = 0;
    let mut fdp_total = 0;
    for n in [64, 256, 1024, 4096] {
        for cond in [1e5, 1e15, 1e30] {
            let inst = gen_dot(n, cond, f, n as u64).unwrap();
            let rep = repro_probe(&inst.x, &inst.y, f, &fdp_k, 1000, 3).unwrap();
            fdp_total += 1;
            fdp_ok += usize::from(rep.distinct_results == 1);
        }
    }
    let fma_k = KernelSpec::fma_chain(f, f).unwrap();
    let seeds = 50;
    let mut varied = 0;
    for seed in 0..seeds {
        let inst = gen_dot(256, 1e12, f, seed).unwrap();
        let rep = repro_probe(&inst.x, &inst.y, f, &fma_k, 1000, seed).unwrap();
        varied += usize::from(rep.distinct_results > 1);
    }
    let frac = varied as f64 / seeds as f64;
    outcome(
        fdp_ok == fdp_total && frac >= 0.9,
        format!(
            "reproducibility K=1000: fdp distinct=1 on {fdp_ok}/{fdp_total} instances; \
             fma:binary64 (n=256, cond 1e12) distinct>1 on {varied}/{seeds} seeds"
        ),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let f = FormatSpec::BINARY64;
    let conds = [1e5, 1e10, 1e15, 1e20];
    let mut medians = Vec::new();
    let mut fdp_all_52 = true;
    for (ci, &c) in conds.iter().enumerate() {
        let scores: Vec<(f64, f64)> = (0..100u64)
            .into_par_iter()
            .map(|i| {
                let g = gen_dot(256, c, f, 10_000 * ci as u64 + i).unwrap();
                let chain = KernelSpec::fma_chain(f, f).unwrap().dot(&g.x, &g.y, f).unwrap();
                let fused = fdp(&g.x, &g.y, f, cfg91(), f).unwrap();
                (correct_bits(chain, f, &g.exact), correct_bits(fused, f, &g.exact))
            })
            .collect();
        fdp_all_52 &= scores.iter().all(|s| s.1 == 52.0);
        medians.push(median(&scores.iter().map(|s| s.0).collect::<Vec<_>>()));
    }
    let monotone = medians.windows(2).all(|w| w[1] <= w[0]);
    let t = start.elapsed();
    outcome(
        monotone && medians[2] < 10.0 && fdp_all_52 && t < Duration::from_secs(300),
        format!(
            "degradation: fma:binary64 median correct_bits {:?} at cond 1e5/1e10/1e15/1e20; fdp 52 throughout: {fdp_all_52} ({:.1}s)",
            medians.iter().map(|m| (m * 10.0).round() / 10.0).collect::<Vec<_>>(),
            t.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let table = bits_per_watt(
        &[("fdp:30:30:-30", 52.0), ("fma:binary128", 52.0 / 5.0), ("fma:binary64", 52.0 / 27.7)],
        &PowerConstants::published(),
    )
    .unwrap();
    let quad = table.ratio("fdp:30:30:-30", "fma:binary128").unwrap();
    let double = table.ratio("fdp:30:30:-30", "fma:binary64").unwrap();
    let quad_ok = (quad - 5.6).abs() <= 0.05;
    let double_ok = (double - 15.1).abs() <= 0.05;
    outcome(
        quad_ok && double_ok,
        format!(
            "bits per watt: fdp/quad {quad:.4} (target 5.6: {}), fdp/double {double:.4} (target 15.1: {})",
            if quad_ok { "ok" } else { "off" },
            if double_ok { "ok" } else { "off" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let f = FormatSpec::BINARY64;
    // 21-bit register holding multiples of 2^-10 in [-2^10, 2^10)
    let cfg = AccumConfig::new(0, 10, -10).unwrap();
    let results: Vec<(bool, bool)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(6);
            r.set_stream(i);
            let grid = |v: f64| (v * 32.0).round() / 32.0;
            let n = r.gen_range(2..40);
            // products up to 2^18, far beyond the register
            let mut x: Vec<u128> = (0..n - 1).map(|_| b64(grid(r.gen_range(-1.0..1.0) * 2f64.powi(r.gen_range(0..14))))).collect();
            let mut y: Vec<u128> = (0..n - 1).map(|_| b64(grid(r.gen_range(-1.0..1.0) * 2f64.powi(r.gen_range(0..6))))).collect();
            // the last product steers the total to a value that fits
            let target = Dyadic::from_f64((r.gen_range(-512.0..512.0) * 1024.0f64).round() / 1024.0).unwrap();
            let steer = &target - &exact_dot_bits(&x, &y, f).unwrap();
            x.push(encode_dyadic(&steer, f));
            y.push(b64(1.0));
            let exact = exact_dot_bits(&x, &y, f).unwrap();
            let acc = fdpgen::kernels::fdp_accumulate(&x, &y, f, cfg).unwrap();
            (exact == target && acc.to_exact().unwrap() == exact, acc.flags().overflow_advisory)
        })
        .collect();
    let ok = results.iter().filter(|r| r.0).count();
    let exceeded = results.iter().filter(|r| r.1).count();
    outcome(
        ok == results.len() && exceeded > results.len() / 2,
        format!("wrap-around: {ok}/10000 equal the oracle; partial sums left the register in {exceeded} cases"),
    )
}

fn criterion_7() -> Outcome {
    let f = FormatSpec::BINARY64;
    let cfg = AccumConfig::new(20, 20, -8).unwrap();
    let worst: Vec<(bool, f64)> = (0..2000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(7);
            r.set_stream(i);
            let n = r.gen_range(1..200);
            let v = |r: &mut ChaCha8Rng| r.gen_range(-1.0..1.0) * 2f64.powi(r.gen_range(-15..=5));
            let x: Vec<u128> = (0..n).map(|_| b64(v(&mut r))).collect();
            let y: Vec<u128> = (0..n).map(|_| b64(v(&mut r))).collect();
            let acc = fdpgen::kernels::fdp_accumulate(&x, &y, f, cfg).unwrap();
            let exact = exact_dot_bits(&x, &y, f).unwrap();
            let err = (&acc.to_exact().unwrap() - &exact).abs();
            let bound = Dyadic::from_i64(n as i64).shl(cfg.lsb());
            (err <= bound, err.to_f64() / bound.to_f64())
        })
        .collect();
    let ok = worst.iter().filter(|w| w.0).count();
    let max_ratio = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    outcome(
        ok == worst.len(),
        format!("truncation bound n*2^lsb: {ok}/2000 instances within, largest error/bound {max_ratio:.3}"),
    )
}

fn gemm_files_identical(fmt: FormatSpec, acc: &str, dir: &Path, tag: &str) -> bool {
    let mut r = rng(8);
    let mut m = |name: &str| {
        let data = (0..64)
            .map(|_| encode_dyadic(&Dyadic::from_f64(r.gen_range(-4.0..4.0)).unwrap(), fmt))
            .collect();
        let path = dir.join(format!("{tag}_{name}.csv"));
        PackedMatrix::new(8, 8, fmt, data).unwrap().write_csv(&path).unwrap();
        path
    };
    let (a, b) = (m("a"), m("b"));
    let outs: Vec<Vec<u8>> = [1, 2, 8]
        .iter()
        .map(|w| {
            let out = dir.join(format!("{tag}_c{w}.csv"));
            let status = Command::new(env!("CARGO_BIN_EXE_fdpgen"))
                .args(["gemm", "--acc", acc, "--workers", &w.to_string()])
                .arg("--a")
                .arg(&a)
                .arg("--b")
                .arg(&b)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap()
                .status;
            assert!(status.success());
            std::fs::read(out).unwrap()
        })
        .collect();
    outs.windows(2).all(|w| w[0] == w[1])
}

fn criterion_8(dir: &Path) -> Outcome {
    let same = gemm_files_identical(FormatSpec::BINARY64, "30:30:-30", dir, "b64");
    // in-process as well, straight through the library
    let f = FormatSpec::BINARY64;
    let mut r = rng(88);
    let mut m = || {
        PackedMatrix::new(8, 8, f, (0..64).map(|_| b64(r.gen_range(-1e3..1e3))).collect()).unwrap()
    };
    let (a, b) = (m(), m());
    let c = PackedMatrix::zeros(8, 8, f).unwrap();
    let k = KernelSpec::fdp(cfg91(), f);
    let one = b64(1.0);
    let lib: Vec<String> =
        [1, 2, 8].iter().map(|&w| gemm_with_workers(one, &a, &b, 0, &c, &k, w).unwrap().to_csv()).collect();
    let lib_same = lib.windows(2).all(|w| w[0] == w[1]);
    outcome(
        same && lib_same,
        format!("gemm 8x8x8 fdp with 1, 2, 8 workers: CLI files identical {same}, library output identical {lib_same}"),
    )
}

fn criterion_9(dir: &Path) -> Outcome {
    let f = FormatSpec::BINARY64;
    let cfg = cfg91();
    let params = derive_params(f, cfg, f).unwrap();
    let name = default_module_name(f, cfg, f);
    let v1 = emit_fdp(&params, cfg, f, f, &name).unwrap();
    let v2 = emit_fdp(&params, cfg, f, f, &name).unwrap();
    let declares = v1.contains("reg signed [90:0]") && params.acc_width == 91;
    let linted = lint(&v1, &params).is_ok();

    let run = |sub: &str| {
        let out = dir.join(sub);
        let ok = Command::new(env!("CARGO_BIN_EXE_fdpgen"))
            .args(["rtl", "--fmt", "binary64", "--acc", "30:30:-30", "--out-dir"])
            .arg(&out)
            .output()
            .unwrap()
            .status
            .success();
        assert!(ok);
        (std::fs::read(out.join(format!("{name}.v"))).unwrap(), std::fs::read(out.join(format!("{name}_golden.csv"))).unwrap())
    };
    let cli_same = run("rtl1") == run("rtl2");

    let golden = emit_golden(f, cfg, f, 2000, 9).unwrap();
    let replay = golden.replay().unwrap() == golden.expected();
    let reparsed = fdpgen::rtl::GoldenVectors::from_csv(&golden.to_csv()).unwrap() == golden;
    outcome(
        declares && linted && v1 == v2 && cli_same && replay && reparsed,
        format!(
            "RTL: 91-bit register declared {declares}, lint {linted}, byte-identical {}, CLI files identical {cli_same}, \
             {} golden dot products replay {replay}",
            v1 == v2,
            golden.expected().len()
        ),
    )
}

fn criterion_10(dir: &Path) -> Outcome {
    // criteria 2, 3 and 8 again with binary32 and <9,6,-20>
    let f = FormatSpec::BINARY32;
    let value = |r: &mut ChaCha8Rng| {
        let v = r.gen_range(-1.0..1.0) * 2f64.powi(r.gen_range(-8..=3));
        (v * 1024.0).round() / 1024.0
    };
    let (exact, min_bits) = oracle_equivalence(f, cfg36(), 1000, 1000, value);

    let k = KernelSpec::fdp(cfg36(), f);
    let mut repro_ok = 0;
    for (n, cond) in [(64, 1e3), (512, 1e6), (2048, 1e6)] {
        let g = gen_dot(n, cond, f, n as u64).unwrap();
        repro_ok += usize::from(repro_probe(&g.x, &g.y, f, &k, 1000, 10).unwrap().distinct_results == 1);
    }
    let gemm_same = gemm_files_identical(f, "9:6:-20", dir, "b32");
    outcome(
        exact == 1000 && min_bits == 23.0 && repro_ok == 3 && gemm_same,
        format!(
            "desk-scale substitute at binary32 <9,6,-20>: oracle {exact}/1000 (min bits {min_bits}), \
             repro distinct=1 on {repro_ok}/3, gemm worker-invariant {gemm_same}"
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(criterion_3)),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(|| criterion_8(dir.path()))),
        (9, Box::new(|| criterion_9(dir.path()))),
        (10, Box::new(|| criterion_10(dir.path()))),
    ];
    let mut unexpected = 0;
    for (id, run) in criteria {
        let o = run();
        let known = KNOWN_UNATTAINABLE.iter().find(|k| k.0 == id);
        println!("criterion {id:>2} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("             known unattainable: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("             listed as unattainable but passed");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} unexpected acceptance outcome(s)");
        std::process::exit(1);
    }
}
