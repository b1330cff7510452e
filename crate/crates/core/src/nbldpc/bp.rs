//! Belief propagation kernels over GF(2^p).
//!
//! Beliefs are kept in the linear probability domain so check-node
//! convolutions can run through the length-q Walsh-Hadamard transform.

use super::code::NbLdpcCode;
use crate::error::{Error, Result};
use crate::gf::{GfField, GfSymbol};
use crate::sensing::fwht_unchecked;

/// Normalization denominators below this fall back to the uniform vector.
pub const NORM_FLOOR: f64 = 1e-300;

/// A (possibly unnormalized) distribution over the q field elements,
/// indexed by section index.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefVector(Vec<f64>);

impl BeliefVector {
    pub fn new(values: Vec<f64>) -> Self {
        BeliefVector(values)
    }

    pub fn uniform(q: usize) -> Self {
        BeliefVector(vec![1.0 / q as f64; q])
    }

    pub fn delta(q: usize, index: usize) -> Self {
        let mut v = vec![0.0; q];
        v[index] = 1.0;
        BeliefVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// L1-normalizes in place (uniform fallback on a vanishing sum).
    pub fn normalize(&mut self) {
        normalize(&mut self.0);
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }
}

impl std::ops::Index<usize> for BeliefVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[inline]
pub(crate) fn normalize(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    if sum.is_finite() && sum >= NORM_FLOOR {
        let inv = 1.0 / sum;
        v.iter_mut().for_each(|x| *x *= inv);
    } else {
        let u = 1.0 / v.len() as f64;
        v.fill(u);
    }
}

/// Convolution over the additive group of GF(2^p):
/// `out[g] = sum_h u[h] v[g xor h]`.
pub fn fq_convolve(u: &BeliefVector, v: &BeliefVector) -> Result<BeliefVector> {
    if u.len() != v.len() {
        return Err(Error::Length {
            expected: u.len(),
            got: v.len(),
        });
    }
    let q = u.len();
    if !q.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(q));
    }
    let mut a = u.0.clone();
    let mut b = v.0.clone();
    fwht_unchecked(&mut a);
    fwht_unchecked(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fwht_unchecked(&mut a);
    let inv_q = 1.0 / q as f64;
    a.iter_mut().for_each(|x| *x *= inv_q);
    Ok(BeliefVector(a))
}

/// Moves mass from `g` to `weight * g`: `out[phi(w g)] = u[phi(g)]`.
pub fn rotate(field: &GfField, u: &BeliefVector, weight: GfSymbol) -> Result<BeliefVector> {
    if weight.is_zero() {
        return Err(Error::ZeroWeight);
    }
    if u.len() != field.q() {
        return Err(Error::Length {
            expected: field.q(),
            got: u.len(),
        });
    }
    let mut out = vec![0.0; u.len()];
    for g in field.elements() {
        out[field.phi(field.mul(weight, g))] = u.0[field.phi(g)];
    }
    Ok(BeliefVector(out))
}

/// Message from check `check` to its neighbor `target`.
///
/// `incoming` holds `(variable, message)` pairs; one is required for every
/// other neighbor of the check.
pub fn check_to_var(
    code: &NbLdpcCode,
    check: usize,
    target: usize,
    incoming: &[(usize, BeliefVector)],
) -> Result<BeliefVector> {
    let field = code.field();
    let q = field.q();
    let edges = code.check_edges(check);
    let target_edge = edges
        .iter()
        .find(|e| e.var == target)
        .ok_or_else(|| Error::Dimensions(format!("variable {target} not on check {check}")))?;

    // Distribution of the partial sum of weighted neighbor symbols.
    let mut acc = BeliefVector::delta(q, 0);
    for e in edges.iter().filter(|e| e.var != target) {
        let msg = incoming
            .iter()
            .find(|(v, _)| *v == e.var)
            .map(|(_, m)| m)
            .ok_or(Error::MissingMessage { check, var: e.var })?;
        acc = fq_convolve(&acc, &rotate(field, msg, e.weight)?)?;
    }
    // target * w = partial sum, so Pr(target = h) = Pr(sum = w h).
    let inv = field.inv(target_edge.weight)?;
    let mut out = rotate(field, &acc, inv)?;
    out.0.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(out.normalized())
}

/// Message from a variable to one check: its local belief times the
/// messages from every other neighboring check, normalized.
pub fn var_to_check(alpha: &BeliefVector, incoming: &[BeliefVector]) -> Result<BeliefVector> {
    let mut out = alpha.clone();
    for m in incoming {
        if m.len() != out.len() {
            return Err(Error::Length {
                expected: out.len(),
                got: m.len(),
            });
        }
        for (x, y) in out.0.iter_mut().zip(&m.0) {
            *x *= y;
        }
    }
    Ok(out.normalized())
}

/// Flooding BP on the code's factor graph, returning per-section beliefs
/// that combine each local belief with all incoming check messages.
pub fn bp_estimate(code: &NbLdpcCode, alpha: &[BeliefVector], rounds: usize) -> Result<Vec<BeliefVector>> {
    let q = code.field().q();
    if alpha.len() != code.len() {
        return Err(Error::Length {
            expected: code.len(),
            got: alpha.len(),
        });
    }
    let mut flat = Vec::with_capacity(q * code.len());
    for a in alpha {
        if a.len() != q {
            return Err(Error::Length { expected: q, got: a.len() });
        }
        flat.extend_from_slice(&a.0);
    }
    let mut out = vec![0.0; flat.len()];
    BpWorkspace::new(code).run(code, &flat, rounds, &mut out);
    Ok(out.chunks_exact(q).map(|c| BeliefVector(c.to_vec())).collect())
}

/// Reusable message buffers for [`bp_estimate`] on a fixed code.
#[derive(Debug, Clone)]
pub struct BpWorkspace {
    q: usize,
    edge_offset: Vec<usize>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    spectra: Vec<f64>,
    excl: Vec<f64>,
    tmp: Vec<f64>,
    /// `mul_index[w][g] = phi(w * g)` for every weight used by the code.
    mul_index: Vec<Vec<u16>>,
}

impl BpWorkspace {
    pub fn new(code: &NbLdpcCode) -> Self {
        let field = code.field();
        let q = field.q();
        let mut edge_offset = Vec::with_capacity(code.num_checks() + 1);
        let mut total = 0;
        let mut max_deg = 0;
        for row in code.checks() {
            edge_offset.push(total);
            total += row.len();
            max_deg = max_deg.max(row.len());
        }
        edge_offset.push(total);
        let mul_index = (0..q)
            .map(|w| {
                let w = GfSymbol::new(w as u16);
                field.elements().map(|g| field.phi(field.mul(w, g)) as u16).collect()
            })
            .collect();
        BpWorkspace {
            q,
            edge_offset,
            v2c: vec![0.0; total * q],
            c2v: vec![0.0; total * q],
            spectra: vec![0.0; max_deg * q],
            excl: vec![0.0; max_deg * q],
            tmp: vec![0.0; q],
            mul_index,
        }
    }

    /// Runs `rounds` flooding iterations from fresh messages and writes the
    /// normalized output beliefs to `out`. Both `alpha` and `out` are flat
    /// `L * q` buffers.
    pub fn run(&mut self, code: &NbLdpcCode, alpha: &[f64], rounds: usize, out: &mut [f64]) {
        let q = self.q;
        debug_assert_eq!(alpha.len(), code.len() * q);
        debug_assert_eq!(out.len(), alpha.len());
        out.copy_from_slice(alpha);
        if rounds == 0 {
            for sec in out.chunks_exact_mut(q) {
                normalize(sec);
            }
            return;
        }
        for (c, row) in code.checks().iter().enumerate() {
            let base = self.edge_offset[c];
            for (pos, e) in row.iter().enumerate() {
                let dst = (base + pos) * q;
                self.v2c[dst..dst + q].copy_from_slice(&alpha[e.var * q..(e.var + 1) * q]);
            }
        }
        for round in 0..rounds {
            for c in 0..code.num_checks() {
                self.update_check(code, c);
            }
            if round + 1 < rounds {
                self.update_vars(code, alpha);
            }
        }
        for v in 0..code.len() {
            let sec = &mut out[v * q..(v + 1) * q];
            for &(c, pos) in code.var_edges(v) {
                let src = (self.edge_offset[c] + pos) * q;
                for (x, m) in sec.iter_mut().zip(&self.c2v[src..src + q]) {
                    *x *= m;
                }
            }
            normalize(sec);
        }
    }

    fn update_check(&mut self, code: &NbLdpcCode, c: usize) {
        let q = self.q;
        let row = code.check_edges(c);
        let deg = row.len();
        let base = self.edge_offset[c];
        // Spectrum of each weighted incoming message.
        for (pos, e) in row.iter().enumerate() {
            let spec = &mut self.spectra[pos * q..(pos + 1) * q];
            let msg = &self.v2c[(base + pos) * q..(base + pos + 1) * q];
            let perm = &self.mul_index[e.weight.index()];
            for (g, &m) in msg.iter().enumerate() {
                spec[perm[g] as usize] = m;
            }
            fwht_unchecked(spec);
        }
        // Leave-one-out products via prefix then suffix sweeps.
        self.excl[..q].fill(1.0);
        for pos in 1..deg {
            let (done, rest) = self.excl.split_at_mut(pos * q);
            let prev = &done[(pos - 1) * q..];
            let spec = &self.spectra[(pos - 1) * q..pos * q];
            for ((x, &p), &s) in rest[..q].iter_mut().zip(prev).zip(spec) {
                *x = p * s;
            }
        }
        self.tmp.fill(1.0);
        for pos in (0..deg).rev() {
            let ex = &mut self.excl[pos * q..(pos + 1) * q];
            for (x, &s) in ex.iter_mut().zip(&self.tmp) {
                *x *= s;
            }
            let spec = &self.spectra[pos * q..(pos + 1) * q];
            for (s, &w) in self.tmp.iter_mut().zip(spec) {
                *s *= w;
            }
        }
        for (pos, e) in row.iter().enumerate() {
            let ex = &mut self.excl[pos * q..(pos + 1) * q];
            fwht_unchecked(ex);
            let perm = &self.mul_index[e.weight.index()];
            let dst = &mut self.c2v[(base + pos) * q..(base + pos + 1) * q];
            for (h, d) in dst.iter_mut().enumerate() {
                *d = ex[perm[h] as usize].max(0.0);
            }
            normalize(dst);
        }
    }

    fn update_vars(&mut self, code: &NbLdpcCode, alpha: &[f64]) {
        let q = self.q;
        for v in 0..code.len() {
            let edges = code.var_edges(v);
            let a = &alpha[v * q..(v + 1) * q];
            for (i, &(c, pos)) in edges.iter().enumerate() {
                let dst = (self.edge_offset[c] + pos) * q;
                self.tmp.copy_from_slice(a);
                for (j, &(c2, pos2)) in edges.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let src = (self.edge_offset[c2] + pos2) * q;
                    for (x, m) in self.tmp.iter_mut().zip(&self.c2v[src..src + q]) {
                        *x *= m;
                    }
                }
                normalize(&mut self.tmp);
                self.v2c[dst..dst + q].copy_from_slice(&self.tmp);
            }
        }
    }
}
