use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Per-user codeword energy for a target Eb/N0, with `N0 = 2 sigma^2` and
/// `Eb = P / B`.
pub fn ebn0_to_power(ebn0_db: f64, info_bits: usize, sigma: f64) -> f64 {
    2.0 * sigma * sigma * info_bits as f64 * 10f64.powf(ebn0_db / 10.0)
}

/// Inverse of [`ebn0_to_power`].
pub fn power_to_ebn0(power: f64, info_bits: usize, sigma: f64) -> f64 {
    10.0 * (power / (2.0 * sigma * sigma * info_bits as f64)).log10()
}

/// Superimposes the users' signals and adds i.i.d. `N(0, sigma^2)` noise.
pub fn transmit<R: Rng + ?Sized>(signals: &[Vec<f64>], sigma: f64, rng: &mut R) -> Result<Vec<f64>> {
    let n = signals.first().map_or(0, Vec::len);
    let mut y = vec![0.0; n];
    for x in signals {
        if x.len() != n {
            return Err(Error::Length {
                expected: n,
                got: x.len(),
            });
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi += xi;
        }
    }
    if sigma > 0.0 {
        for yi in y.iter_mut() {
            let w: f64 = StandardNormal.sample(rng);
            *yi += sigma * w;
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn power_cases() {
        assert!((ebn0_to_power(0.0, 1, 0.5f64.sqrt()) - 1.0).abs() < 1e-12);
        let p = ebn0_to_power(3.0, 584, 1.0);
        assert!((p - 2330.5).abs() < 0.1, "{p}");
        assert_eq!(ebn0_to_power(f64::NEG_INFINITY, 584, 1.0), 0.0);
        assert!((power_to_ebn0(p, 584, 1.0) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn noiseless_superposition() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = vec![1.0, -2.0, 0.5];
        assert_eq!(transmit(&[x.clone()], 0.0, &mut rng).unwrap(), x);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(transmit(&[x, neg], 0.0, &mut rng).unwrap(), vec![0.0; 3]);
        assert!(transmit(&[vec![0.0; 3], vec![0.0; 2]], 0.0, &mut rng).is_err());
    }

    #[test]
    fn noise_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = transmit(&[vec![0.0; 100_000]], 1.0, &mut rng).unwrap();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (y.len() - 1) as f64;
        assert!((var - 1.0).abs() < 0.03, "{var}");
    }

    #[test]
    fn deterministic_given_rng() {
        let a = transmit(&[vec![0.0; 8]], 1.0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = transmit(&[vec![0.0; 8]], 1.0, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
    }
}
