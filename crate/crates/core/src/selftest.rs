//! Quick oracle checks runnable from the command line.
//!
//! Each check compares a fast path against an independent slow computation
//! on a small random instance. The full suites live in the test targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::amp::{AmpBpDecoder, DecoderParams};
use crate::encoder::SrLdpcEncoder;
use crate::gf::{GfField, GfSymbol};
use crate::nbldpc::{fq_convolve, random_code, BeliefVector};
use crate::sensing::{fwht, OperatorKind, SensingOperator};

pub struct CheckResult {
    pub name: &'static str,
    pub outcome: std::result::Result<(), String>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_fwht(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let x: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut fast = x.clone();
    fwht(&mut fast).map_err(|e| e.to_string())?;
    let worst = (0..64)
        .map(|i| {
            let slow: f64 = (0..64)
                .map(|j| if (i & j as usize).count_ones() % 2 == 0 { x[j] } else { -x[j] })
                .sum();
            (slow - fast[i]).abs()
        })
        .fold(0.0, f64::max);
    ensure(worst <= 1e-12, || format!("max diff {worst:e}"))
}

fn check_convolution(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for q in [4usize, 16, 256] {
        let u: Vec<f64> = (0..q).map(|_| rng.gen_range(0.0..1.0)).collect();
        let v: Vec<f64> = (0..q).map(|_| rng.gen_range(0.0..1.0)).collect();
        let fast = fq_convolve(&BeliefVector::new(u.clone()), &BeliefVector::new(v.clone()))
            .map_err(|e| e.to_string())?;
        for g in 0..q {
            let slow: f64 = (0..q).map(|h| u[h] * v[g ^ h]).sum();
            ensure((slow - fast[g]).abs() <= 1e-12, || format!("q={q} g={g}"))?;
        }
    }
    Ok(())
}

fn check_adjoint(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    for kind in [OperatorKind::Gaussian, OperatorKind::Hadamard] {
        let op = SensingOperator::new(kind, 48, 96, rng.gen()).map_err(|e| e.to_string())?;
        let s: Vec<f64> = (0..96).map(|_| StandardNormal.sample(rng)).collect();
        let z: Vec<f64> = (0..48).map(|_| StandardNormal.sample(rng)).collect();
        let lhs: f64 = op.forward(&s).unwrap().iter().zip(&z).map(|(a, b)| a * b).sum();
        let rhs: f64 = op.adjoint(&z).unwrap().iter().zip(&s).map(|(a, b)| a * b).sum();
        let scale = s.iter().map(|x| x * x).sum::<f64>().sqrt() * z.iter().map(|x| x * x).sum::<f64>().sqrt();
        ensure((lhs - rhs).abs() <= 1e-9 * scale, || format!("{kind}: {lhs} vs {rhs}"))?;
    }
    Ok(())
}

fn check_encoding(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let field = GfField::gf256();
    let code = random_code(&field, 76, 3, 2, rng.gen()).map_err(|e| e.to_string())?;
    for _ in 0..100 {
        let info: Vec<GfSymbol> = (0..73).map(|_| GfSymbol::new(rng.gen_range(0..256))).collect();
        let cw = code.encode(&info).map_err(|e| e.to_string())?;
        ensure(code.is_codeword(&cw), || "nonzero syndrome".into())?;
    }
    Ok(())
}

fn check_noiseless_decode(rng: &mut ChaCha8Rng) -> std::result::Result<(), String> {
    let field = GfField::with_degree(4).map_err(|e| e.to_string())?;
    let code = random_code(&field, 16, 4, 2, rng.gen()).map_err(|e| e.to_string())?;
    let op = SensingOperator::gaussian(256, 256, rng.gen()).map_err(|e| e.to_string())?;
    let info: Vec<GfSymbol> = (0..12).map(|_| GfSymbol::new(rng.gen_range(0..16))).collect();
    let msg = SrLdpcEncoder::new(&code, &op, 1.0)
        .and_then(|e| e.encode_symbols(info))
        .map_err(|e| e.to_string())?;
    let ops = [op];
    let dec = AmpBpDecoder::new(&ops, vec![&code], 1.0, DecoderParams::default()).map_err(|e| e.to_string())?;
    let out = dec.decode(&msg.signal, None).map_err(|e| e.to_string())?;
    ensure(out.users[0].symbols == msg.codeword, || "decoded word differs".into())?;
    ensure(out.iterations <= 10, || format!("{} iterations", out.iterations))
}

/// Runs every quick check with a fixed seed.
pub fn run() -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E1F);
    let checks: [(&'static str, fn(&mut ChaCha8Rng) -> std::result::Result<(), String>); 5] = [
        ("fwht matches dense Hadamard", check_fwht),
        ("field convolution matches direct sum", check_convolution),
        ("operator adjoint consistency", check_adjoint),
        ("encode then syndrome is zero", check_encoding),
        ("noiseless decode is exact", check_noiseless_decode),
    ];
    checks
        .into_iter()
        .map(|(name, f)| CheckResult {
            name,
            outcome: f(&mut rng),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        for r in super::run() {
            assert!(r.outcome.is_ok(), "{}: {:?}", r.name, r.outcome);
        }
    }
}
