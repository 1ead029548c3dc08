use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{condition_number, correct_bits, exact_dot, gen_dot, PowerConstants};
use crate::accumulator::AccumConfig;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::formats::{decode, format_hex, FormatSpec};
use crate::kernels::KernelSpec;

pub(crate) fn ser_dyadic<S: Serializer>(d: &Dyadic, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelResult {
    pub kernel: String,
    pub result_hex: String,
    pub correct_bits: f64,
}

/// One dot product scored against the exact value by several kernels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DotReport {
    pub n: usize,
    pub condition: f64,
    #[serde(serialize_with = "ser_dyadic")]
    pub exact: Dyadic,
    pub exact_approx: f64,
    pub kernels: Vec<KernelResult>,
}

impl DotReport {
    pub const CSV_HEADER: &'static str = "n,cond,kernel,result_hex,correct_bits";

    /// Rows under [`DotReport::CSV_HEADER`], no header.
    pub fn csv_rows(&self) -> String {
        self.kernels
            .iter()
            .map(|k| format!("{},{:e},{},{},{}\n", self.n, self.condition, k.kernel, k.result_hex, k.correct_bits))
            .collect()
    }
}

/// Runs every kernel on `(x, y)` and scores each result in its output format.
pub fn evaluate_dot(x: &[u128], y: &[u128], in_fmt: FormatSpec, kernels: &[KernelSpec]) -> Result<DotReport> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { x: x.len(), y: y.len() });
    }
    let dx = x.iter().map(|&b| decode(b, in_fmt)).collect::<Result<Vec<_>>>()?;
    let dy = y.iter().map(|&b| decode(b, in_fmt)).collect::<Result<Vec<_>>>()?;
    let exact = exact_dot(&dx, &dy)?;
    let condition = condition_number(&dx, &dy, &exact);
    let kernels = kernels
        .iter()
        .map(|k| {
            let r = k.dot(x, y, in_fmt)?;
            Ok(KernelResult {
                kernel: k.id(),
                result_hex: format_hex(r, k.out_fmt),
                correct_bits: correct_bits(r, k.out_fmt, &exact),
            })
        })
        .collect::<Result<_>>()?;
    Ok(DotReport { n: x.len(), condition, exact_approx: exact.to_f64(), exact, kernels })
}

/// Grid of generated ill-conditioned instances compared across the binary64
/// FMA chain, the binary128 FMA chain and one FDP configuration. All kernels
/// deliver their result in `fmt`.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub conds: Vec<f64>,
    pub fmt: FormatSpec,
    pub cfg: AccumConfig,
    pub instances: usize,
    pub seed: u64,
    pub constants: PowerConstants,
}

impl SweepConfig {
    pub fn kernels(&self) -> Result<Vec<KernelSpec>> {
        Ok(vec![
            KernelSpec::fma_chain(FormatSpec::BINARY64, self.fmt)?,
            KernelSpec::fma_chain(FormatSpec::BINARY128, self.fmt)?,
            KernelSpec::fdp(self.cfg, self.fmt),
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub cond: f64,
    pub kernel: String,
    pub result_hex: String,
    pub correct_bits: f64,
    pub target_cond: f64,
    pub seed: u64,
    /// Fixed published figure, not a measurement.
    pub watts_paper_constant: Option<f64>,
    pub bits_per_watt_paper_constant: Option<f64>,
    /// FDP bits-per-watt over this kernel's, same instance.
    pub fdp_ratio_paper_constant: Option<f64>,
}

impl SweepRow {
    pub const CSV_HEADER: &'static str = "n,cond,kernel,result_hex,correct_bits,target_cond,seed,\
        watts_paper_constant,bits_per_watt_paper_constant,fdp_ratio_paper_constant";

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{:e},{},{},{},{:e},{},{},{},{}",
            self.n,
            self.cond,
            self.kernel,
            self.result_hex,
            self.correct_bits,
            self.target_cond,
            self.seed,
            opt(self.watts_paper_constant),
            opt(self.bits_per_watt_paper_constant),
            opt(self.fdp_ratio_paper_constant),
        )
    }
}

/// Runs the sweep. Instance seeds are drawn in grid order from `cfg.seed` and
/// recorded on every row.
pub fn ssh_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.sizes.is_empty() || cfg.conds.is_empty() || cfg.instances == 0 {
        return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
    }
    let kernels = cfg.kernels()?;
    let fdp_id = KernelSpec::fdp(cfg.cfg, cfg.fmt).id();
    let mut seeds = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for &target in &cfg.conds {
            for _ in 0..cfg.instances {
                let seed = seeds.next_u64();
                let inst = gen_dot(n, target, cfg.fmt, seed)?;
                let report = evaluate_dot(&inst.x, &inst.y, cfg.fmt, &kernels)?;
                let bpw = |k: &super::KernelResult| cfg.constants.watts(&k.kernel).map(|w| k.correct_bits / w);
                let fdp_bpw = report.kernels.iter().find(|k| k.kernel == fdp_id).and_then(bpw);
                for k in &report.kernels {
                    let own = bpw(k);
                    rows.push(SweepRow {
                        n,
                        cond: inst.achieved_cond,
                        kernel: k.kernel.clone(),
                        result_hex: k.result_hex.clone(),
                        correct_bits: k.correct_bits,
                        target_cond: target,
                        seed,
                        watts_paper_constant: cfg.constants.watts(&k.kernel),
                        bits_per_watt_paper_constant: own,
                        fdp_ratio_paper_constant: fdp_bpw.zip(own).map(|(f, o)| f / o),
                    });
                }
            }
        }
    }
    Ok(rows)
}
