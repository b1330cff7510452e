use crate::error::{Error, Result};
use crate::nbldpc::{BeliefVector, BpWorkspace, NbLdpcCode};

/// Residual RMS `||z|| / sqrt(n)`, floored.
pub fn estimate_tau(z: &[f64], floor: f64) -> f64 {
    if z.is_empty() {
        return floor;
    }
    let ss: f64 = z.iter().map(|x| x * x).sum();
    (ss / z.len() as f64).sqrt().max(floor)
}

/// Section posterior `alpha[g] ~ exp(d r[phi(g)] / tau^2)`.
pub fn posterior_alpha(r_section: &[f64], tau: f64, d: f64) -> BeliefVector {
    let mut out = vec![0.0; r_section.len()];
    posterior_alpha_into(r_section, tau, d, &mut out);
    BeliefVector::new(out)
}

pub(crate) fn posterior_alpha_into(r_section: &[f64], tau: f64, d: f64, out: &mut [f64]) {
    let scale = d / (tau * tau);
    let max = r_section.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &r) in out.iter_mut().zip(r_section) {
        *o = ((r - max) * scale).exp();
        sum += *o;
    }
    // The max entry contributes exp(0) = 1, so sum >= 1.
    let inv = 1.0 / sum;
    out.iter_mut().for_each(|x| *x *= inv);
}

/// Per-user BP denoiser with reusable buffers.
#[derive(Debug, Clone)]
pub struct UserDenoiser {
    bp: BpWorkspace,
    alpha: Vec<f64>,
}

impl UserDenoiser {
    pub fn new(code: &NbLdpcCode) -> Self {
        UserDenoiser {
            bp: BpWorkspace::new(code),
            alpha: vec![0.0; code.len() * code.field().q()],
        }
    }

    /// Writes the next state estimate to `s_next` and returns the
    /// denoiser divergence.
    pub fn denoise(
        &mut self,
        code: &NbLdpcCode,
        r: &[f64],
        tau: f64,
        d: f64,
        bp_rounds: usize,
        s_next: &mut [f64],
    ) -> Result<f64> {
        let q = code.field().q();
        let n = code.len() * q;
        if r.len() != n {
            return Err(Error::Length {
                expected: n,
                got: r.len(),
            });
        }
        if s_next.len() != n {
            return Err(Error::Length {
                expected: n,
                got: s_next.len(),
            });
        }
        for (rs, a) in r.chunks_exact(q).zip(self.alpha.chunks_exact_mut(q)) {
            posterior_alpha_into(rs, tau, d, a);
        }
        self.bp.run(code, &self.alpha, bp_rounds, s_next);
        // s_next now holds normalized beliefs.
        let mut purity = 0.0;
        for sec in s_next.chunks_exact(q) {
            purity += 1.0 - sec.iter().map(|b| b * b).sum::<f64>();
        }
        s_next.iter_mut().for_each(|x| *x *= d);
        Ok(d * d / (tau * tau) * purity)
    }
}

/// One-shot form of [`UserDenoiser::denoise`]: returns `(s_next, div)`.
pub fn denoise_user(
    r: &[f64],
    code: &NbLdpcCode,
    tau: f64,
    d: f64,
    bp_rounds: usize,
) -> Result<(Vec<f64>, f64)> {
    let mut s_next = vec![0.0; r.len()];
    let div = UserDenoiser::new(code).denoise(code, r, tau, d, bp_rounds, &mut s_next)?;
    Ok((s_next, div))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{GfField, GfSymbol};
    use crate::nbldpc::Edge;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn tau_cases() {
        assert_eq!(estimate_tau(&[0.0; 10], 1e-6), 1e-6);
        assert!((estimate_tau(&[-3.0; 7], 1e-6) - 3.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let normal = Normal::new(0.0, 2.5).unwrap();
        let z: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
        assert!((estimate_tau(&z, 1e-6) / 2.5 - 1.0).abs() < 0.02);
    }

    #[test]
    fn posterior_cases() {
        let a = posterior_alpha(&[0.7; 8], 1.3, 2.0);
        assert!(a.as_slice().iter().all(|&x| (x - 0.125).abs() < 1e-15));

        let mut r = vec![0.0; 16];
        r[5] = 1e4;
        let a = posterior_alpha(&r, 1.0, 1.0);
        assert!((a[5] - 1.0).abs() < 1e-12);

        let e = std::f64::consts::E;
        let a = posterior_alpha(&[1.0, 0.0, 0.0, 0.0], 1.0, 1.0);
        let expect = [e / (e + 3.0), 1.0 / (e + 3.0), 1.0 / (e + 3.0), 1.0 / (e + 3.0)];
        for (x, y) in a.as_slice().iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    fn toy_code() -> NbLdpcCode {
        let f = GfField::with_degree(2).unwrap();
        NbLdpcCode::from_checks(
            f,
            2,
            vec![vec![
                Edge { var: 0, weight: GfSymbol::new(1) },
                Edge { var: 1, weight: GfSymbol::new(3) },
            ]],
        )
        .unwrap()
    }

    #[test]
    fn uniform_single_section() {
        // One section, no checks.
        let f = GfField::with_degree(4).unwrap();
        let code = NbLdpcCode::from_checks(f, 1, vec![]).unwrap();
        let (tau, d) = (0.8, 1.7);
        let (s, div) = denoise_user(&[0.4; 16], &code, tau, d, 0).unwrap();
        assert!(s.iter().all(|&x| (x - d / 16.0).abs() < 1e-15));
        let expect = d * d / (tau * tau) * (1.0 - 1.0 / 16.0);
        assert!((div - expect).abs() < 1e-12);
    }

    #[test]
    fn saturated_divergence_vanishes() {
        let code = toy_code();
        let mut r = vec![0.0; 8];
        r[0] = 100.0;
        r[4] = 100.0;
        let (s, div) = denoise_user(&r, &code, 0.5, 1.0, 1).unwrap();
        assert!(div < 1e-12);
        assert!((s[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sections_bounded_by_amplitude() {
        let code = toy_code();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r: Vec<f64> = (0..8).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let d = 2.2;
        let (s, _) = denoise_user(&r, &code, 1.1, d, 1).unwrap();
        for sec in s.chunks_exact(4) {
            assert!(sec.iter().all(|&x| x >= 0.0));
            assert!((sec.iter().sum::<f64>() - d).abs() < 1e-12);
        }
    }
}
