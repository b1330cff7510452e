//! Per-user sensing operators with exact forward/adjoint pairs.
//!
//! Two backings are provided. The dense Gaussian kind draws i.i.d.
//! `N(0, 1/n)` entries and is used where the Gaussian-matrix assumptions of
//! AMP matter. The Hadamard kind is an implicit `n x N` slice of an order-`m`
//! Walsh-Hadamard matrix with random column signs, applied in `O(m log m)`.

mod fwht;

pub use fwht::fwht;
pub(crate) use fwht::fwht_unchecked;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Largest dense matrix we are willing to allocate (entries).
const DENSE_LIMIT: usize = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Gaussian,
    Hadamard,
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(OperatorKind::Gaussian),
            "hadamard" => Ok(OperatorKind::Hadamard),
            other => Err(Error::Config(format!("unknown operator kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OperatorKind::Gaussian => "gaussian",
            OperatorKind::Hadamard => "hadamard",
        })
    }
}

#[derive(Debug, Clone)]
enum Backing {
    /// Row-major `n x N`.
    Dense(Vec<f64>),
    Hadamard {
        order: usize,
        rows: Vec<usize>,
        signs: Vec<f64>,
        scale: f64,
    },
}

/// A linear map `R^N -> R^n` and its transpose.
#[derive(Debug, Clone)]
pub struct SensingOperator {
    rows: usize,
    cols: usize,
    seed: u64,
    backing: Backing,
}

impl SensingOperator {
    /// Dense matrix with i.i.d. `N(0, 1/n)` entries.
    pub fn gaussian(n: usize, cols: usize, seed: u64) -> Result<Self> {
        if n == 0 || cols == 0 {
            return Err(Error::Dimensions(format!("gaussian operator {n}x{cols}")));
        }
        if n.saturating_mul(cols) > DENSE_LIMIT {
            return Err(Error::Dimensions(format!(
                "dense {n}x{cols} operator exceeds {DENSE_LIMIT} entries"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let std = (1.0 / n as f64).sqrt();
        let entries = (0..n * cols)
            .map(|_| {
                let g: f64 = StandardNormal.sample(&mut rng);
                g * std
            })
            .collect();
        Ok(SensingOperator {
            rows: n,
            cols,
            seed,
            backing: Backing::Dense(entries),
        })
    }

    /// Row-subsampled, column-sign-randomized Walsh-Hadamard operator.
    ///
    /// The transform order is the least power of two `m >= max(n + 1, N)`;
    /// `n` distinct rows are drawn from `1..m` so the all-ones row is never
    /// used.
    pub fn hadamard(n: usize, cols: usize, seed: u64) -> Result<Self> {
        if n == 0 || cols == 0 {
            return Err(Error::Dimensions(format!("hadamard operator {n}x{cols}")));
        }
        let order = Self::hadamard_order(n, cols);
        if n >= order {
            return Err(Error::Dimensions(format!(
                "{n} rows requested from a Hadamard matrix of order {order}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows: Vec<usize> = index::sample(&mut rng, order - 1, n)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        rows.sort_unstable();
        let signs = (0..cols)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        Ok(SensingOperator {
            rows: n,
            cols,
            seed,
            backing: Backing::Hadamard {
                order,
                rows,
                signs,
                scale: 1.0 / (n as f64).sqrt(),
            },
        })
    }

    pub fn new(kind: OperatorKind, n: usize, cols: usize, seed: u64) -> Result<Self> {
        match kind {
            OperatorKind::Gaussian => Self::gaussian(n, cols, seed),
            OperatorKind::Hadamard => Self::hadamard(n, cols, seed),
        }
    }

    /// Transform order used by the Hadamard kind for the given shape.
    pub fn hadamard_order(n: usize, cols: usize) -> usize {
        (n + 1).max(cols).next_power_of_two()
    }

    pub fn kind(&self) -> OperatorKind {
        match self.backing {
            Backing::Dense(_) => OperatorKind::Gaussian,
            Backing::Hadamard { .. } => OperatorKind::Hadamard,
        }
    }

    /// Number of measurements `n`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Signal dimension `N`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Transform order for the Hadamard kind, `None` for dense operators.
    pub fn order(&self) -> Option<usize> {
        match &self.backing {
            Backing::Hadamard { order, .. } => Some(*order),
            Backing::Dense(_) => None,
        }
    }

    /// Selected Hadamard rows, if any.
    pub fn row_subset(&self) -> Option<&[usize]> {
        match &self.backing {
            Backing::Hadamard { rows, .. } => Some(rows),
            Backing::Dense(_) => None,
        }
    }

    /// Scratch length needed by [`forward_into`](Self::forward_into) and
    /// [`adjoint_into`](Self::adjoint_into).
    pub fn scratch_len(&self) -> usize {
        self.order().unwrap_or(0)
    }

    pub fn forward(&self, s: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.rows];
        let mut scratch = vec![0.0; self.scratch_len()];
        self.forward_into(s, &mut out, &mut scratch)?;
        Ok(out)
    }

    pub fn adjoint(&self, z: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.cols];
        let mut scratch = vec![0.0; self.scratch_len()];
        self.adjoint_into(z, &mut out, &mut scratch)?;
        Ok(out)
    }

    /// `out = A s`.
    pub fn forward_into(&self, s: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
        check_len(self.cols, s.len())?;
        check_len(self.rows, out.len())?;
        match &self.backing {
            Backing::Dense(a) => {
                for (row, o) in a.chunks_exact(self.cols).zip(out.iter_mut()) {
                    *o = row.iter().zip(s).map(|(x, y)| x * y).sum();
                }
            }
            Backing::Hadamard {
                order,
                rows,
                signs,
                scale,
            } => {
                scratch.clear();
                scratch.resize(*order, 0.0);
                for ((b, &x), &sg) in scratch.iter_mut().zip(s).zip(signs) {
                    *b = x * sg;
                }
                fwht_unchecked(scratch);
                for (o, &r) in out.iter_mut().zip(rows) {
                    *o = scratch[r] * scale;
                }
            }
        }
        Ok(())
    }

    /// `out = A^T z`.
    pub fn adjoint_into(&self, z: &[f64], out: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
        check_len(self.rows, z.len())?;
        check_len(self.cols, out.len())?;
        match &self.backing {
            Backing::Dense(a) => {
                out.fill(0.0);
                for (row, &zi) in a.chunks_exact(self.cols).zip(z) {
                    for (o, &x) in out.iter_mut().zip(row) {
                        *o += x * zi;
                    }
                }
            }
            Backing::Hadamard {
                order,
                rows,
                signs,
                scale,
            } => {
                scratch.clear();
                scratch.resize(*order, 0.0);
                for (&r, &zi) in rows.iter().zip(z) {
                    scratch[r] = zi * scale;
                }
                fwht_unchecked(scratch);
                for ((o, &b), &sg) in out.iter_mut().zip(scratch.iter()).zip(signs) {
                    *o = b * sg;
                }
            }
        }
        Ok(())
    }

    /// Column `j` of the operator.
    pub fn column(&self, j: usize) -> Result<Vec<f64>> {
        if j >= self.cols {
            return Err(Error::Dimensions(format!("column {j} of {}", self.cols)));
        }
        match &self.backing {
            Backing::Dense(a) => Ok((0..self.rows).map(|i| a[i * self.cols + j]).collect()),
            Backing::Hadamard {
                rows, signs, scale, ..
            } => Ok(rows
                .iter()
                .map(|&r| {
                    let h = if (r & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    h * signs[j] * scale
                })
                .collect()),
        }
    }

    /// Materializes the operator as a row-major `n x N` matrix.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        if self.rows.saturating_mul(self.cols) > DENSE_LIMIT {
            return Err(Error::Dimensions("operator too large to densify".into()));
        }
        if let Backing::Dense(a) = &self.backing {
            return Ok(a.clone());
        }
        let mut dense = vec![0.0; self.rows * self.cols];
        for j in 0..self.cols {
            for (i, v) in self.column(j)?.into_iter().enumerate() {
                dense[i * self.cols + j] = v;
            }
        }
        Ok(dense)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Length { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn norm(a: &[f64]) -> f64 {
        dot(a, a).sqrt()
    }

    fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| StandardNormal.sample(rng)).collect()
    }

    #[test]
    fn gaussian_deterministic() {
        let a = SensingOperator::gaussian(4, 4, 9).unwrap().to_dense().unwrap();
        let b = SensingOperator::gaussian(4, 4, 9).unwrap().to_dense().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gaussian_entry_variance() {
        let op = SensingOperator::gaussian(1000, 100, 5).unwrap();
        let m = op.to_dense().unwrap();
        let mean = m.iter().sum::<f64>() / m.len() as f64;
        let var = m.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m.len() - 1) as f64;
        assert!((var * 1000.0 - 1.0).abs() < 0.1, "var*n = {}", var * 1000.0);
    }

    #[test]
    fn gaussian_column_norms() {
        let op = SensingOperator::gaussian(256, 200, 1).unwrap();
        let mean: f64 = (0..200)
            .map(|j| dot(&op.column(j).unwrap(), &op.column(j).unwrap()))
            .sum::<f64>()
            / 200.0;
        assert!((mean - 1.0).abs() < 0.05);
    }

    #[test]
    fn zero_dims_rejected() {
        assert!(SensingOperator::gaussian(0, 4, 0).is_err());
        assert!(SensingOperator::hadamard(0, 4, 0).is_err());
        assert!(SensingOperator::gaussian(100_000, 100_000, 0).is_err());
    }

    #[test]
    fn hadamard_small_structure() {
        let op = SensingOperator::hadamard(2, 2, 0).unwrap();
        assert_eq!(op.order(), Some(4));
        let m = op.to_dense().unwrap();
        for v in m {
            assert!((v.abs() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        }
        assert!(!op.row_subset().unwrap().contains(&0));
    }

    #[test]
    fn hadamard_default_dimensions() {
        assert_eq!(SensingOperator::hadamard_order(1460, 19456), 32768);
        let op = SensingOperator::hadamard(1460, 19456, 1).unwrap();
        assert_eq!(op.order(), Some(32768));
    }

    #[test]
    fn hadamard_too_many_rows() {
        // n = 4 forces m >= 5 -> 8, so only 7 usable rows exist.
        assert!(SensingOperator::hadamard(7, 4, 0).is_ok());
        assert_eq!(SensingOperator::hadamard_order(8, 4), 16);
    }

    #[test]
    fn hadamard_unit_columns() {
        let op = SensingOperator::hadamard(50, 100, 2).unwrap();
        for j in 0..100 {
            let mut e = vec![0.0; 100];
            e[j] = 1.0;
            let col = op.forward(&e).unwrap();
            assert!((dot(&col, &col) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_adjoint_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let op = SensingOperator::hadamard(64, 128, 8).unwrap();
        let dense = op.to_dense().unwrap();
        let s = random_vec(&mut rng, 128);
        let z = random_vec(&mut rng, 64);
        let fwd = op.forward(&s).unwrap();
        let adj = op.adjoint(&z).unwrap();
        for i in 0..64 {
            let expect: f64 = (0..128).map(|j| dense[i * 128 + j] * s[j]).sum();
            assert!((fwd[i] - expect).abs() <= 1e-9);
        }
        for j in 0..128 {
            let expect: f64 = (0..64).map(|i| dense[i * 128 + j] * z[i]).sum();
            assert!((adj[j] - expect).abs() <= 1e-9);
        }
    }

    #[test]
    fn adjoint_consistency_both_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for kind in [OperatorKind::Gaussian, OperatorKind::Hadamard] {
            let op = SensingOperator::new(kind, 32, 64, 3).unwrap();
            for _ in 0..100 {
                let s = random_vec(&mut rng, 64);
                let z = random_vec(&mut rng, 32);
                let lhs = dot(&op.forward(&s).unwrap(), &z);
                let rhs = dot(&s, &op.adjoint(&z).unwrap());
                assert!((lhs - rhs).abs() <= 1e-9 * norm(&s) * norm(&z));
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        for kind in [OperatorKind::Gaussian, OperatorKind::Hadamard] {
            let op = SensingOperator::new(kind, 16, 40, 1).unwrap();
            assert!(op.forward(&[0.0; 40]).unwrap().iter().all(|&x| x == 0.0));
            assert!(op.adjoint(&[0.0; 16]).unwrap().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn shape_mismatch() {
        let op = SensingOperator::hadamard(16, 40, 1).unwrap();
        assert!(matches!(op.forward(&[0.0; 39]), Err(Error::Length { .. })));
        assert!(matches!(op.adjoint(&[0.0; 17]), Err(Error::Length { .. })));
    }

    #[test]
    fn distinct_seeds_low_cross_coherence() {
        let (n, cols) = (512usize, 4096usize);
        let a = SensingOperator::hadamard(n, cols, 100).unwrap();
        let b = SensingOperator::hadamard(n, cols, 200).unwrap();
        assert_ne!(a.row_subset(), b.row_subset());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bound = 5.0 * ((cols as f64).ln() / n as f64).sqrt();
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let i = rng.gen_range(0..cols);
            let j = rng.gen_range(0..cols);
            let (ca, cb) = (a.column(i).unwrap(), b.column(j).unwrap());
            worst = worst.max((dot(&ca, &cb) / (norm(&ca) * norm(&cb))).abs());
        }
        assert!(worst <= bound, "max coherence {worst} > {bound}");
    }
}
