use rayon::prelude::*;

use super::fma::{convert, FmaChain};
use super::{KernelKind, KernelSpec, PackedMatrix};
use crate::accumulator::Accumulator;
use crate::error::{Error, Result};
use crate::formats::{decode, Class, UnpackedReal};

/// `alpha * A * B + beta * C` on the global thread pool.
///
/// With an FDP kernel every output element is a single accumulator holding
/// the exact products `(alpha * A[i][k]) * B[k][j]` and `beta * C[i][j]`,
/// rounded once. With an FMA chain the inner loop rounds every step and
/// alpha and beta each cost one more rounding. `beta == 0` skips `C`.
pub fn gemm(
    alpha: u128,
    a: &PackedMatrix,
    b: &PackedMatrix,
    beta: u128,
    c: &PackedMatrix,
    kernel: &KernelSpec,
) -> Result<PackedMatrix> {
    let prepared = Prepared::new(alpha, a, b, beta, c)?;
    prepared.run(kernel)
}

/// [`gemm`] on a dedicated pool of `workers` threads. The output does not
/// depend on `workers`.
pub fn gemm_with_workers(
    alpha: u128,
    a: &PackedMatrix,
    b: &PackedMatrix,
    beta: u128,
    c: &PackedMatrix,
    kernel: &KernelSpec,
    workers: usize,
) -> Result<PackedMatrix> {
    if workers == 0 {
        return Err(Error::InvalidParameter("worker count must be at least 1".into()));
    }
    let prepared = Prepared::new(alpha, a, b, beta, c)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
    pool.install(|| prepared.run(kernel))
}

struct Prepared {
    m: usize,
    n: usize,
    depth: usize,
    alpha: UnpackedReal,
    beta: UnpackedReal,
    a: Vec<UnpackedReal>,
    /// column-major
    b: Vec<UnpackedReal>,
    c: Vec<UnpackedReal>,
}

impl Prepared {
    fn new(alpha: u128, a: &PackedMatrix, b: &PackedMatrix, beta: u128, c: &PackedMatrix) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{} but B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if c.rows() != a.rows() || c.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "C is {}x{}, expected {}x{}",
                c.rows(),
                c.cols(),
                a.rows(),
                b.cols()
            )));
        }
        let fmt = a.fmt();
        if b.fmt() != fmt || c.fmt() != fmt {
            return Err(Error::DimensionMismatch(format!(
                "A, B and C must share one format (got {}, {}, {})",
                fmt,
                b.fmt(),
                c.fmt()
            )));
        }
        let dec = |bits: u128| decode(bits, fmt);
        let mut b_cols = Vec::with_capacity(b.rows() * b.cols());
        for j in 0..b.cols() {
            for k in 0..b.rows() {
                b_cols.push(dec(b.get(k, j))?);
            }
        }
        Ok(Prepared {
            m: a.rows(),
            n: b.cols(),
            depth: a.cols(),
            alpha: dec(alpha)?,
            beta: dec(beta)?,
            a: a.data().iter().map(|&x| dec(x)).collect::<Result<_>>()?,
            b: b_cols,
            c: c.data().iter().map(|&x| dec(x)).collect::<Result<_>>()?,
        })
    }

    fn run(&self, kernel: &KernelSpec) -> Result<PackedMatrix> {
        let out_fmt = kernel.out_fmt;
        let data: Vec<u128> = match kernel.kind {
            KernelKind::Fdp(cfg) => {
                // alpha * A[i][k], exact, shared by every column j
                let scaled: Vec<UnpackedReal> = self.a.iter().map(|x| product(&self.alpha, x)).collect();
                (0..self.m * self.n)
                    .into_par_iter()
                    .map(|idx| {
                        let (i, j) = (idx / self.n, idx % self.n);
                        let mut acc = Accumulator::zero(cfg);
                        let row = &scaled[i * self.depth..(i + 1) * self.depth];
                        let col = &self.b[j * self.depth..(j + 1) * self.depth];
                        for (x, y) in row.iter().zip(col) {
                            acc.mac(x, y);
                        }
                        if !self.beta.is_zero() {
                            acc.mac(&self.beta, &self.c[idx]);
                        }
                        acc.round_into(out_fmt)
                    })
                    .collect()
            }
            KernelKind::FmaChain(acc_fmt) => (0..self.m * self.n)
                .into_par_iter()
                .map(|idx| {
                    let (i, j) = (idx / self.n, idx % self.n);
                    let mut dot = FmaChain::new(acc_fmt)?;
                    let row = &self.a[i * self.depth..(i + 1) * self.depth];
                    let col = &self.b[j * self.depth..(j + 1) * self.depth];
                    for (x, y) in row.iter().zip(col) {
                        dot.step(x, y);
                    }
                    let mut scaled = FmaChain::new(acc_fmt)?;
                    scaled.step(&self.alpha, &decode(dot.bits(), acc_fmt)?);
                    if !self.beta.is_zero() {
                        scaled.step(&self.beta, &self.c[idx]);
                    }
                    convert(scaled.bits(), acc_fmt, out_fmt)
                })
                .collect::<Result<_>>()?,
        };
        PackedMatrix::new(self.m, self.n, out_fmt, data)
    }
}

/// Exact product, with IEEE-style special cases folded into the class.
fn product(a: &UnpackedReal, b: &UnpackedReal) -> UnpackedReal {
    if let Some(p) = a.exact_mul(b) {
        return p;
    }
    match (a.class, b.class) {
        (Class::Nan | Class::Nar, _) | (_, Class::Nan | Class::Nar) => UnpackedReal::nan(),
        (Class::Inf, Class::Zero) | (Class::Zero, Class::Inf) => UnpackedReal::nan(),
        _ => UnpackedReal::inf(a.negative != b.negative),
    }
}
