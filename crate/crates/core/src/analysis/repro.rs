use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{decode, FormatSpec};
use crate::kernels::KernelSpec;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproReport {
    pub kernel: String,
    pub n: usize,
    pub permutations: usize,
    pub seed: u64,
    pub distinct_results: usize,
    /// Largest `|v_perm - v_original|` over the permutations.
    pub max_abs_deviation: f64,
    pub bit_identical: bool,
}

/// Runs `kernel` on `k` seeded random simultaneous permutations of the
/// `(x[i], y[i])` pairs and counts distinct results.
///
/// Permutation `i` draws from ChaCha stream `i` of `seed`, so the report does
/// not depend on how the permutations are scheduled across threads.
pub fn repro_probe(
    x: &[u128],
    y: &[u128],
    in_fmt: FormatSpec,
    kernel: &KernelSpec,
    k: usize,
    seed: u64,
) -> Result<ReproReport> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("the probe needs at least 2 permutations, got {k}")));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { x: x.len(), y: y.len() });
    }
    let reference = kernel.dot(x, y, in_fmt)?;
    let results: Vec<u128> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut order: Vec<usize> = (0..x.len()).collect();
            order.shuffle(&mut rng);
            let px: Vec<u128> = order.iter().map(|&j| x[j]).collect();
            let py: Vec<u128> = order.iter().map(|&j| y[j]).collect();
            kernel.dot(&px, &py, in_fmt)
        })
        .collect::<Result<_>>()?;

    let distinct: BTreeSet<u128> = results.iter().copied().collect();
    let out = kernel.out_fmt;
    let ref_value = decode(reference, out)?.to_dyadic();
    let mut max_dev = 0.0f64;
    for &r in &distinct {
        if r == reference {
            continue;
        }
        let dev = match (&ref_value, decode(r, out)?.to_dyadic()) {
            (Some(a), Some(b)) => (&b - a).abs().to_f64(),
            _ => f64::INFINITY,
        };
        max_dev = max_dev.max(dev);
    }
    Ok(ReproReport {
        kernel: kernel.id(),
        n: x.len(),
        permutations: k,
        seed,
        distinct_results: distinct.len(),
        max_abs_deviation: max_dev,
        bit_identical: distinct.len() == 1,
    })
}
