//! Command-line front end. Every subcommand is deterministic given its
//! arguments and `--seed` (default [`crate::DEFAULT_SEED`]), which is echoed
//! on stderr. Exit codes: 0 ok, 2 usage or contract violation, 3 unsupported
//! feature.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::accumulator::AccumConfig;
use crate::analysis::{
    evaluate_dot, gen_dot, gen_dot_on_grid, repro_probe, ssh_sweep, PowerConstants, SweepConfig, SweepRow,
};
use crate::error::{Error, Result};
use crate::formats::{format_hex, parse_bits, FormatSpec};
use crate::kernels::{gemm, gemm_with_workers, KernelKind, KernelSpec, PackedMatrix};
use crate::rtl::{default_module_name, derive_params, emit_fdp, emit_golden, lint};
use crate::DEFAULT_SEED;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "fdpgen", version, about = "Fused-dot-product kernels, accuracy probes and RTL generation")]
struct Cli {
    /// RNG seed for every randomized step
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One dot product, scored against the exact value
    Dot(DotArgs),
    /// Correct bits of the binary64 and binary128 FMA chains and an FDP over generated ill-conditioned dot products
    SshSweep(SweepArgs),
    /// Count distinct results over random permutations of one generated dot product
    Repro(ReproArgs),
    /// alpha*A*B + beta*C on matrix CSV files
    Gemm(GemmArgs),
    /// Write a generated ill-conditioned dot product
    Gendot(GendotArgs),
    /// Emit the Verilog datapath and golden vectors
    Rtl(RtlArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON instead of CSV
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DotArgs {
    /// Operand format
    #[arg(long, default_value = "binary64")]
    fmt: FormatSpec,
    /// Result format [default: --fmt]
    #[arg(long)]
    out_fmt: Option<FormatSpec>,
    /// Accumulator ovf:msb:lsb, used by `--kernel fdp`
    #[arg(long, default_value = "30:30:-30", allow_hyphen_values = true)]
    acc: AccumConfig,
    /// fdp, fdp:<ovf:msb:lsb>, fma or fma:<format>
    #[arg(long, default_value = "fdp")]
    kernel: String,
    /// Comma-separated entries of x (decimal or hex patterns)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<String>,
    /// Comma-separated entries of y
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    y: Vec<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Operand and result format
    #[arg(long, default_value = "binary64")]
    fmt: FormatSpec,
    /// FDP accumulator ovf:msb:lsb
    #[arg(long, default_value = "30:30:-30", allow_hyphen_values = true)]
    acc: AccumConfig,
    /// Vector lengths
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024,4096")]
    sizes: Vec<usize>,
    /// Target condition numbers
    #[arg(long, value_delimiter = ',', default_value = "1e5,1e10,1e15,1e20,1e25,1e30")]
    conds: Vec<f64>,
    /// Instances per (size, condition)
    #[arg(long, default_value_t = 1)]
    instances: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// fdp, fdp:<ovf:msb:lsb>, fma or fma:<format>
    #[arg(long, default_value = "fdp")]
    kernel: String,
    #[arg(long, default_value = "binary64")]
    fmt: FormatSpec,
    #[arg(long, default_value = "30:30:-30", allow_hyphen_values = true)]
    acc: AccumConfig,
    /// Vector length
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Target condition number of the generated dot product
    #[arg(long, default_value_t = 1e15)]
    cond: f64,
    /// Number of permutations
    #[arg(long = "K", default_value_t = 1000)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GemmArgs {
    /// Matrix CSV for A
    #[arg(long)]
    a: PathBuf,
    /// Matrix CSV for B
    #[arg(long)]
    b: PathBuf,
    /// Matrix CSV for C [default: zeros]
    #[arg(long)]
    c: Option<PathBuf>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    /// fdp, fdp:<ovf:msb:lsb>, fma or fma:<format>
    #[arg(long, default_value = "fdp")]
    kernel: String,
    #[arg(long, default_value = "30:30:-30", allow_hyphen_values = true)]
    acc: AccumConfig,
    /// Result format [default: format of A]
    #[arg(long)]
    out_fmt: Option<FormatSpec>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    workers: Option<usize>,
    /// Write the result matrix here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GendotArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 1e15)]
    cond: f64,
    #[arg(long, default_value = "binary64")]
    fmt: FormatSpec,
    /// Full-precision entries instead of the 2^-15 grid
    #[arg(long)]
    full_precision: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RtlArgs {
    /// Operand format
    #[arg(long, default_value = "binary64")]
    fmt: FormatSpec,
    #[arg(long, default_value = "30:30:-30", allow_hyphen_values = true)]
    acc: AccumConfig,
    /// Result format [default: --fmt]
    #[arg(long)]
    out_fmt: Option<FormatSpec>,
    /// Module name [default: derived from formats and config]
    #[arg(long)]
    name: Option<String>,
    /// Directory receiving <name>.v and <name>_golden.csv
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Number of golden operand rows
    #[arg(long, default_value_t = 256)]
    vectors: usize,
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    eprintln!("# seed={}", cli.seed);
    let seed = cli.seed;
    let res = match cli.command {
        Command::Dot(a) => cmd_dot(a),
        Command::SshSweep(a) => cmd_ssh_sweep(a, seed),
        Command::Repro(a) => cmd_repro(a, seed),
        Command::Gemm(a) => cmd_gemm(a),
        Command::Gendot(a) => cmd_gendot(a, seed),
        Command::Rtl(a) => cmd_rtl(a, seed),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("fdpgen: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_) => EXIT_UNSUPPORTED,
        _ => EXIT_USAGE,
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_text(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

/// `fdp` and `fma` take their parameters from `acc` and `fmt`.
fn resolve_kernel(id: &str, acc: AccumConfig, fmt: FormatSpec, out_fmt: FormatSpec) -> Result<KernelSpec> {
    let kind = match id {
        "fdp" => KernelKind::Fdp(acc),
        "fma" => KernelKind::FmaChain(fmt),
        other => other.parse()?,
    };
    match kind {
        KernelKind::Fdp(cfg) => Ok(KernelSpec::fdp(cfg, out_fmt)),
        KernelKind::FmaChain(acc_fmt) => KernelSpec::fma_chain(acc_fmt, out_fmt),
    }
}

fn parse_list(values: &[String], fmt: FormatSpec) -> Result<Vec<u128>> {
    values.iter().map(|v| parse_bits(v.trim(), fmt)).collect()
}

fn cmd_dot(a: DotArgs) -> Result<()> {
    let out_fmt = a.out_fmt.unwrap_or(a.fmt);
    let kernel = resolve_kernel(&a.kernel, a.acc, a.fmt, out_fmt)?;
    let x = parse_list(&a.x, a.fmt)?;
    let y = parse_list(&a.y, a.fmt)?;
    let report = evaluate_dot(&x, &y, a.fmt, &[kernel])?;
    let text = if a.output.json {
        json_text(&report)
    } else {
        let k = &report.kernels[0];
        format!(
            "kernel,{}\nresult_hex,{}\ncorrect_bits,{}\nexact,{}\ncond,{:e}\n",
            k.kernel, k.result_hex, k.correct_bits, report.exact, report.condition
        )
    };
    write_out(a.output.out.as_deref(), &text)
}

fn cmd_ssh_sweep(a: SweepArgs, seed: u64) -> Result<()> {
    let cfg = SweepConfig {
        sizes: a.sizes,
        conds: a.conds,
        fmt: a.fmt,
        cfg: a.acc,
        instances: a.instances,
        seed,
        constants: PowerConstants::published(),
    };
    let rows = ssh_sweep(&cfg)?;
    let text = if a.output.json {
        json_text(&rows)
    } else {
        let mut s = format!("{}\n", SweepRow::CSV_HEADER);
        for r in &rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    };
    write_out(a.output.out.as_deref(), &text)
}

fn cmd_repro(a: ReproArgs, seed: u64) -> Result<()> {
    let kernel = resolve_kernel(&a.kernel, a.acc, a.fmt, a.fmt)?;
    let inst = gen_dot(a.n, a.cond, a.fmt, seed)?;
    let report = repro_probe(&inst.x, &inst.y, a.fmt, &kernel, a.k, seed)?;
    let text = if a.output.json {
        json_text(&json!({ "report": report, "cond": inst.achieved_cond }))
    } else {
        format!(
            "kernel,{}\nn,{}\ncond,{:e}\npermutations,{}\nseed,{}\ndistinct_results,{}\nmax_abs_deviation,{:e}\nbit_identical,{}\n",
            report.kernel,
            report.n,
            inst.achieved_cond,
            report.permutations,
            report.seed,
            report.distinct_results,
            report.max_abs_deviation,
            report.bit_identical
        )
    };
    write_out(a.output.out.as_deref(), &text)
}

fn cmd_gemm(a: GemmArgs) -> Result<()> {
    let ma = PackedMatrix::read_csv(&a.a)?;
    let mb = PackedMatrix::read_csv(&a.b)?;
    let in_fmt = ma.fmt();
    let mc = match &a.c {
        Some(p) => PackedMatrix::read_csv(p)?,
        None => PackedMatrix::zeros(ma.rows(), mb.cols(), in_fmt)?,
    };
    let out_fmt = a.out_fmt.unwrap_or(in_fmt);
    let kernel = resolve_kernel(&a.kernel, a.acc, in_fmt, out_fmt)?;
    let alpha = parse_bits(&a.alpha, in_fmt)?;
    let beta = parse_bits(&a.beta, in_fmt)?;
    let r = match a.workers {
        Some(w) => gemm_with_workers(alpha, &ma, &mb, beta, &mc, &kernel, w)?,
        None => gemm(alpha, &ma, &mb, beta, &mc, &kernel)?,
    };
    write_out(a.out.as_deref(), &r.to_csv())
}

fn cmd_gendot(a: GendotArgs, seed: u64) -> Result<()> {
    let inst = if a.full_precision {
        gen_dot_on_grid(a.n, a.cond, a.fmt, seed, None)?
    } else {
        gen_dot(a.n, a.cond, a.fmt, seed)?
    };
    let hex = |v: &[u128]| v.iter().map(|&b| format_hex(b, a.fmt)).collect::<Vec<_>>();
    let text = if a.output.json {
        json_text(&json!({ "instance": inst, "format": a.fmt, "x": hex(&inst.x), "y": hex(&inst.y) }))
    } else {
        let mut s = format!(
            "# n={},format={},target_cond={:e},achieved_cond={:e},seed={},exact={}\nx_hex,y_hex\n",
            inst.n, a.fmt, inst.target_cond, inst.achieved_cond, inst.seed, inst.exact
        );
        for (x, y) in hex(&inst.x).iter().zip(hex(&inst.y)) {
            let _ = writeln!(s, "{x},{y}");
        }
        s
    };
    write_out(a.output.out.as_deref(), &text)
}

fn cmd_rtl(a: RtlArgs, seed: u64) -> Result<()> {
    let out_fmt = a.out_fmt.unwrap_or(a.fmt);
    let name = a.name.unwrap_or_else(|| default_module_name(a.fmt, a.acc, out_fmt));
    let params = derive_params(a.fmt, a.acc, out_fmt)?;
    let verilog = emit_fdp(&params, a.acc, a.fmt, out_fmt, &name)?;
    lint(&verilog, &params)?;
    let golden = emit_golden(a.fmt, a.acc, out_fmt, a.vectors, seed)?;
    std::fs::create_dir_all(&a.out_dir)?;
    let v_path = a.out_dir.join(format!("{name}.v"));
    let g_path = a.out_dir.join(format!("{name}_golden.csv"));
    std::fs::write(&v_path, verilog)?;
    std::fs::write(&g_path, golden.to_csv())?;
    println!("verilog,{}", v_path.display());
    println!("golden,{}", g_path.display());
    println!("acc_width,{}", params.acc_width);
    println!("sig_prod_width,{}", params.sig_prod_width);
    println!("max_shift,{}", params.max_shift);
    println!("shift_count_width,{}", params.shift_count_width);
    println!("seed,{seed}");
    Ok(())
}
