//! Subsampled Hadamard operator: structure, adjointness and speed.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use mu_srldpc::sensing::SensingOperator;

fn main() -> mu_srldpc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, cols) in [(1460usize, 19456usize), (4096, 65536), (30000, 262144)] {
        let op = SensingOperator::hadamard(n, cols, 1)?;
        let s: Vec<f64> = (0..cols).map(|_| StandardNormal.sample(&mut rng)).collect();
        let z: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let t = Instant::now();
        let as_ = op.forward(&s)?;
        let atz = op.adjoint(&z)?;
        let elapsed = t.elapsed();
        let lhs: f64 = as_.iter().zip(&z).map(|(a, b)| a * b).sum();
        let rhs: f64 = atz.iter().zip(&s).map(|(a, b)| a * b).sum();
        println!(
            "n={n:6} N={cols:7} m={:7}  <As,z>-<s,A'z> = {:.1e}  forward+adjoint {:.2} ms",
            op.order().unwrap(),
            (lhs - rhs).abs() / lhs.abs().max(1.0),
            elapsed.as_secs_f64() * 1e3
        );
    }
    let col = SensingOperator::hadamard(1460, 19456, 1)?.column(0)?;
    println!("column 0 norm: {:.6}", col.iter().map(|x| x * x).sum::<f64>().sqrt());
    Ok(())
}
