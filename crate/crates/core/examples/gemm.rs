// alpha*A*B + beta*C with FDP elements, checked against the FMA chain and
// across worker counts.

use fdpgen::kernels::gemm_with_workers;
use fdpgen::{gemm, parse_bits, AccumConfig, FormatSpec, KernelSpec, PackedMatrix, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rows: usize, cols: usize, fmt: FormatSpec, rng: &mut ChaCha8Rng) -> Result<PackedMatrix> {
    let data = (0..rows * cols)
        .map(|_| u128::from((rng.gen_range(-1.0f32..1.0) * 2f32.powi(rng.gen_range(-8..8))).to_bits()))
        .collect();
    PackedMatrix::new(rows, cols, fmt, data)
}

pub fn run_example() -> Result<()> {
    let f = FormatSpec::BINARY32;
    let mut rng = ChaCha8Rng::seed_from_u64(fdpgen::DEFAULT_SEED);
    let a = random_matrix(8, 8, f, &mut rng)?;
    let b = random_matrix(8, 8, f, &mut rng)?;
    let c = PackedMatrix::zeros(8, 8, f)?;
    let one = parse_bits("1", f)?;

    let fdp = KernelSpec::fdp(AccumConfig::new(9, 40, -80)?, f);
    let reference = gemm(one, &a, &b, 0, &c, &fdp)?;
    for workers in [1, 2, 8] {
        let r = gemm_with_workers(one, &a, &b, 0, &c, &fdp, workers)?;
        assert_eq!(r.to_csv(), reference.to_csv());
    }
    println!("fdp gemm: identical output for 1, 2 and 8 workers");

    let chain = gemm(one, &a, &b, 0, &c, &KernelSpec::fma_chain(f, f)?)?;
    let differ = reference.data().iter().zip(chain.data()).filter(|(x, y)| x != y).count();
    println!("fma-chain gemm differs from fdp in {differ} of 64 elements");
    print!("{}", reference.to_csv().lines().take(3).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
