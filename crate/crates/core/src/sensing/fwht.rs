use crate::error::{Error, Result};

/// In-place unnormalized fast Walsh-Hadamard transform.
///
/// Applying it twice scales the input by `data.len()`.
pub fn fwht(data: &mut [f64]) -> Result<()> {
    let n = data.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    fwht_unchecked(data);
    Ok(())
}

/// Same as [`fwht`] for callers that already know the length is a power of two.
#[inline]
pub(crate) fn fwht_unchecked(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Sylvester construction: H[i][j] = (-1)^popcount(i & j).
    fn dense_hadamard(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn delta_to_ones() {
        let mut v = vec![0.0; 16];
        v[0] = 1.0;
        fwht(&mut v).unwrap();
        assert!(v.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn involution_up_to_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let orig: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut v = orig.clone();
        fwht(&mut v).unwrap();
        fwht(&mut v).unwrap();
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - 64.0 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_order_8() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = dense_hadamard(8);
        let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let expect: Vec<f64> = h
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        let mut got = x.clone();
        fwht(&mut got).unwrap();
        for (a, b) in got.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        let mut v = vec![0.0; 12];
        assert!(matches!(fwht(&mut v), Err(Error::NotPowerOfTwo(12))));
    }
}
