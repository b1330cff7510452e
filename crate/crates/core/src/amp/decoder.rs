use rayon::prelude::*;

use super::denoiser::{estimate_tau, UserDenoiser};
use crate::error::{Error, Result};
use crate::gf::GfSymbol;
use crate::nbldpc::NbLdpcCode;
use crate::sensing::SensingOperator;
use crate::sparc::hard_decision;

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderParams {
    /// AMP iteration cap.
    pub max_iterations: usize,
    /// BP rounds inside each denoiser call.
    pub bp_rounds: usize,
    /// Stop once every user's hard decision satisfies its parity checks.
    pub early_stop: bool,
    pub tau_floor: f64,
    /// Convex mixing weight of the previous state estimate; 0 disables.
    pub damping: f64,
    /// Include the Onsager correction in the residual.
    pub onsager: bool,
}

impl Default for DecoderParams {
    fn default() -> Self {
        DecoderParams {
            max_iterations: 25,
            bp_rounds: 1,
            early_stop: true,
            tau_floor: 1e-6,
            damping: 0.0,
            onsager: true,
        }
    }
}

impl DecoderParams {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::Parameter(format!("damping {} outside [0, 1)", self.damping)));
        }
        if !(self.tau_floor > 0.0) {
            return Err(Error::Parameter("tau_floor must be positive".into()));
        }
        Ok(())
    }
}

/// AMP iterates. After `t` calls to [`AmpBpDecoder::step`], `s` holds
/// `s^(t)`, and `z`, `r`, `div`, `tau` hold the values computed at `t - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderState {
    pub z: Vec<f64>,
    pub r: Vec<Vec<f64>>,
    pub s: Vec<Vec<f64>>,
    pub div: Vec<f64>,
    pub tau: f64,
    pub iteration: usize,
}

/// `A_k s_k - (div_k / n) z_prev`.
pub fn user_contribution(
    op: &SensingOperator,
    s_k: &[f64],
    z_prev: &[f64],
    div_prev: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if z_prev.len() != op.rows() || n != op.rows() {
        return Err(Error::Length {
            expected: op.rows(),
            got: z_prev.len(),
        });
    }
    let mut out = op.forward(s_k)?;
    let c = div_prev / n as f64;
    for (o, &z) in out.iter_mut().zip(z_prev) {
        *o -= c * z;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub tau: f64,
    /// Per-user count of wrong sections, when the truth was supplied.
    pub section_errors: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserEstimate {
    pub symbols: Vec<GfSymbol>,
    /// Hard decision satisfies every parity check.
    pub valid_codeword: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub users: Vec<UserEstimate>,
    pub iterations: usize,
    /// True if decoding ended through the early-stop rule.
    pub converged: bool,
    pub trace: Vec<IterationTrace>,
}

struct UserWork {
    denoiser: UserDenoiser,
    scratch: Vec<f64>,
    contrib: Vec<f64>,
    s_next: Vec<f64>,
}

/// Joint AMP-BP decoder for `K` users sharing one channel.
pub struct AmpBpDecoder<'a> {
    ops: &'a [SensingOperator],
    codes: Vec<&'a NbLdpcCode>,
    amplitude: f64,
    params: DecoderParams,
}

impl<'a> AmpBpDecoder<'a> {
    pub fn new(
        ops: &'a [SensingOperator],
        codes: Vec<&'a NbLdpcCode>,
        amplitude: f64,
        params: DecoderParams,
    ) -> Result<Self> {
        params.validate()?;
        if ops.is_empty() || ops.len() != codes.len() {
            return Err(Error::Dimensions(format!(
                "{} operators for {} codes",
                ops.len(),
                codes.len()
            )));
        }
        let n = ops[0].rows();
        for (k, (op, code)) in ops.iter().zip(&codes).enumerate() {
            if op.rows() != n {
                return Err(Error::Dimensions(format!(
                    "user {k} has {} rows, user 0 has {n}",
                    op.rows()
                )));
            }
            let cols = code.len() * code.field().q();
            if op.cols() != cols {
                return Err(Error::Dimensions(format!(
                    "user {k}: operator has {} columns, code needs {cols}",
                    op.cols()
                )));
            }
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::Parameter(format!("amplitude {amplitude}")));
        }
        if params.bp_rounds > 0 {
            if let Some(g) = codes.iter().filter_map(|c| c.girth()).min() {
                if 2 * params.bp_rounds >= g {
                    log::debug!(
                        "{} BP rounds reach around cycles of length {g}; divergence is approximate",
                        params.bp_rounds
                    );
                }
            }
        }
        Ok(AmpBpDecoder {
            ops,
            codes,
            amplitude,
            params,
        })
    }

    pub fn users(&self) -> usize {
        self.ops.len()
    }

    pub fn channel_uses(&self) -> usize {
        self.ops[0].rows()
    }

    pub fn params(&self) -> &DecoderParams {
        &self.params
    }

    /// Initial conditions: zero estimates, `z = y`, zero divergence.
    pub fn init_state(&self, y: &[f64]) -> Result<DecoderState> {
        if y.len() != self.channel_uses() {
            return Err(Error::Length {
                expected: self.channel_uses(),
                got: y.len(),
            });
        }
        Ok(DecoderState {
            z: y.to_vec(),
            r: self.ops.iter().map(|op| vec![0.0; op.cols()]).collect(),
            s: self.ops.iter().map(|op| vec![0.0; op.cols()]).collect(),
            div: vec![0.0; self.users()],
            tau: 0.0,
            iteration: 0,
        })
    }

    fn workspaces(&self) -> Vec<UserWork> {
        self.ops
            .iter()
            .zip(&self.codes)
            .map(|(op, code)| UserWork {
                denoiser: UserDenoiser::new(code),
                scratch: vec![0.0; op.scratch_len()],
                contrib: vec![0.0; op.rows()],
                s_next: vec![0.0; op.cols()],
            })
            .collect()
    }

    /// One AMP iteration in the per-user form.
    pub fn step(&self, y: &[f64], state: &mut DecoderState) -> Result<()> {
        let mut work = self.workspaces();
        self.step_with(y, state, &mut work)
    }

    fn step_with(&self, y: &[f64], state: &mut DecoderState, work: &mut [UserWork]) -> Result<()> {
        let n = self.channel_uses();
        let onsager = self.params.onsager;
        // Each user's estimated contribution to y.
        {
            let z_prev = &state.z;
            work.par_iter_mut()
                .zip(self.ops.par_iter())
                .zip(state.s.par_iter())
                .zip(state.div.par_iter())
                .try_for_each(|(((w, op), s), &div)| -> Result<()> {
                    op.forward_into(s, &mut w.contrib, &mut w.scratch)?;
                    if onsager {
                        let c = div / n as f64;
                        for (o, &z) in w.contrib.iter_mut().zip(z_prev) {
                            *o -= c * z;
                        }
                    }
                    Ok(())
                })?;
        }
        // Joint residual, summed in user order for reproducibility.
        state.z.copy_from_slice(y);
        for w in work.iter() {
            for (z, &c) in state.z.iter_mut().zip(&w.contrib) {
                *z -= c;
            }
        }
        let tau = estimate_tau(&state.z, self.params.tau_floor);
        state.tau = tau;

        let d = self.amplitude;
        let rounds = self.params.bp_rounds;
        let damping = self.params.damping;
        let z = &state.z;
        work.par_iter_mut()
            .zip(self.ops.par_iter())
            .zip(self.codes.par_iter())
            .zip(state.r.par_iter_mut())
            .zip(state.s.par_iter_mut())
            .zip(state.div.par_iter_mut())
            .try_for_each(|(((((w, op), code), r), s), div)| -> Result<()> {
                op.adjoint_into(z, r, &mut w.scratch)?;
                for (ri, &si) in r.iter_mut().zip(s.iter()) {
                    *ri += si;
                }
                *div = w.denoiser.denoise(code, r, tau, d, rounds, &mut w.s_next)?;
                if damping > 0.0 {
                    for (si, &sn) in s.iter_mut().zip(&w.s_next) {
                        *si = damping * *si + (1.0 - damping) * sn;
                    }
                } else {
                    s.copy_from_slice(&w.s_next);
                }
                Ok(())
            })?;
        state.iteration += 1;
        Ok(())
    }

    /// Per-user hard decisions from the current state.
    pub fn hard_decisions(&self, state: &DecoderState) -> Result<Vec<Vec<GfSymbol>>> {
        state
            .s
            .iter()
            .zip(&self.codes)
            .map(|(s, code)| hard_decision(s, code.field()))
            .collect()
    }

    /// Runs AMP until the iteration cap or the early-stop rule. `truth`
    /// enables per-iteration section error counts in the trace.
    pub fn decode(&self, y: &[f64], truth: Option<&[Vec<GfSymbol>]>) -> Result<DecodeOutcome> {
        if let Some(t) = truth {
            if t.len() != self.users() {
                return Err(Error::Length {
                    expected: self.users(),
                    got: t.len(),
                });
            }
        }
        let mut state = self.init_state(y)?;
        let mut work = self.workspaces();
        let mut trace = Vec::with_capacity(self.params.max_iterations);
        let mut converged = false;
        let mut decisions = Vec::new();
        for _ in 0..self.params.max_iterations {
            self.step_with(y, &mut state, &mut work)?;
            decisions = self.hard_decisions(&state)?;
            let section_errors = truth.map(|t| {
                decisions
                    .iter()
                    .zip(t)
                    .map(|(est, tru)| est.iter().zip(tru).filter(|(a, b)| a != b).count())
                    .collect()
            });
            trace.push(IterationTrace {
                tau: state.tau,
                section_errors,
            });
            if self.params.early_stop
                && decisions
                    .iter()
                    .zip(&self.codes)
                    .all(|(v, code)| code.is_codeword(v))
            {
                converged = true;
                break;
            }
        }
        let users = decisions
            .into_iter()
            .zip(&self.codes)
            .map(|(symbols, code)| UserEstimate {
                valid_codeword: code.is_codeword(&symbols),
                symbols,
            })
            .collect();
        Ok(DecodeOutcome {
            users,
            iterations: state.iteration,
            converged,
            trace,
        })
    }
}
