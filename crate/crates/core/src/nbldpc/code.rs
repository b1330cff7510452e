use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::peg::TannerGraph;
use crate::error::{Error, Result};
use crate::gf::{GfField, GfSymbol};

/// A weighted edge of a check node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub var: usize,
    pub weight: GfSymbol,
}

/// Non-binary LDPC code over GF(2^p) with a systematic encoder.
///
/// Parity check `c` enforces `sum_j w[c][j] * v[var_j] = 0`.
#[derive(Debug, Clone)]
pub struct NbLdpcCode {
    field: GfField,
    graph: TannerGraph,
    checks: Vec<Vec<Edge>>,
    /// For each variable, `(check, position within that check's edge list)`.
    var_edges: Vec<Vec<(usize, usize)>>,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Row `i` gives parity symbol `parity_positions[i]` as a combination of
    /// info symbols, as `(index into info_positions, coefficient)` pairs.
    encoder_rows: Vec<Vec<(usize, GfSymbol)>>,
    girth: Option<usize>,
}

impl NbLdpcCode {
    /// Draws i.i.d. uniform nonzero weights for every edge of `graph`.
    pub fn assign_weights(graph: &TannerGraph, field: &GfField, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = field.q() as u16;
        let checks = (0..graph.checks())
            .map(|c| {
                graph
                    .check_neighbors(c)
                    .iter()
                    .map(|&var| Edge {
                        var,
                        weight: GfSymbol::new(rng.gen_range(1..q)),
                    })
                    .collect()
            })
            .collect();
        Self::from_checks(field.clone(), graph.vars(), checks)
    }

    /// Builds a code from explicit weighted check rows.
    pub fn from_checks(field: GfField, vars: usize, checks: Vec<Vec<Edge>>) -> Result<Self> {
        for row in &checks {
            for e in row {
                if e.weight.is_zero() {
                    return Err(Error::ZeroWeight);
                }
                if e.weight.index() >= field.q() {
                    return Err(Error::SymbolRange {
                        value: e.weight.index(),
                        q: field.q(),
                    });
                }
            }
        }
        let graph = TannerGraph::from_checks(
            vars,
            checks.iter().map(|r| r.iter().map(|e| e.var).collect()).collect(),
        )?;
        let mut var_edges = vec![Vec::new(); vars];
        for (c, row) in checks.iter().enumerate() {
            for (pos, e) in row.iter().enumerate() {
                var_edges[e.var].push((c, pos));
            }
        }
        let (parity_positions, info_positions, encoder_rows) =
            systematic_encoder(&field, vars, &checks)?;
        let girth = graph.girth();
        Ok(NbLdpcCode {
            field,
            graph,
            checks,
            var_edges,
            info_positions,
            parity_positions,
            encoder_rows,
            girth,
        })
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    /// Code length in symbols.
    pub fn len(&self) -> usize {
        self.graph.vars()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Number of information symbols.
    pub fn dimension(&self) -> usize {
        self.info_positions.len()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.len() as f64
    }

    pub fn check_edges(&self, c: usize) -> &[Edge] {
        &self.checks[c]
    }

    pub fn checks(&self) -> &[Vec<Edge>] {
        &self.checks
    }

    pub(crate) fn var_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.var_edges[v]
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    pub fn girth(&self) -> Option<usize> {
        self.girth
    }

    /// Systematic encoding: `info` lands on [`info_positions`](Self::info_positions).
    pub fn encode(&self, info: &[GfSymbol]) -> Result<Vec<GfSymbol>> {
        if info.len() != self.dimension() {
            return Err(Error::Length {
                expected: self.dimension(),
                got: info.len(),
            });
        }
        let mut cw = vec![GfSymbol::ZERO; self.len()];
        for (&pos, &s) in self.info_positions.iter().zip(info) {
            cw[pos] = s;
        }
        for (&pos, row) in self.parity_positions.iter().zip(&self.encoder_rows) {
            cw[pos] = row.iter().fold(GfSymbol::ZERO, |acc, &(i, coeff)| {
                self.field.add(acc, self.field.mul(coeff, info[i]))
            });
        }
        Ok(cw)
    }

    /// Extracts the information symbols from a codeword.
    pub fn extract_info(&self, cw: &[GfSymbol]) -> Vec<GfSymbol> {
        self.info_positions.iter().map(|&p| cw[p]).collect()
    }

    pub fn syndrome(&self, cw: &[GfSymbol]) -> Result<Vec<GfSymbol>> {
        if cw.len() != self.len() {
            return Err(Error::Length {
                expected: self.len(),
                got: cw.len(),
            });
        }
        Ok(self
            .checks
            .iter()
            .map(|row| {
                row.iter().fold(GfSymbol::ZERO, |acc, e| {
                    self.field.add(acc, self.field.mul(e.weight, cw[e.var]))
                })
            })
            .collect())
    }

    pub fn is_codeword(&self, cw: &[GfSymbol]) -> bool {
        self.syndrome(cw)
            .map(|s| s.iter().all(|x| x.is_zero()))
            .unwrap_or(false)
    }
}

type EncoderParts = (Vec<usize>, Vec<usize>, Vec<Vec<(usize, GfSymbol)>>);

/// Reduces H to systematic form over the field, preferring the rightmost
/// columns as parity positions.
fn systematic_encoder(field: &GfField, vars: usize, checks: &[Vec<Edge>]) -> Result<EncoderParts> {
    let m = checks.len();
    let mut h = vec![vec![GfSymbol::ZERO; vars]; m];
    for (c, row) in checks.iter().enumerate() {
        for e in row {
            h[c][e.var] = e.weight;
        }
    }
    let mut pivots: Vec<usize> = Vec::with_capacity(m);
    let mut is_pivot = vec![false; vars];
    for r in 0..m {
        let found = (0..vars)
            .rev()
            .filter(|&col| !is_pivot[col])
            .find_map(|col| (r..m).find(|&row| !h[row][col].is_zero()).map(|row| (col, row)));
        let (col, row) = found.ok_or(Error::RankDeficient { rank: r, checks: m })?;
        h.swap(r, row);
        let inv = field.inv(h[r][col])?;
        for x in h[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for other in 0..m {
            if other != r && !h[other][col].is_zero() {
                let f = h[other][col];
                for j in 0..vars {
                    let delta = field.mul(f, h[r][j]);
                    h[other][j] = field.add(h[other][j], delta);
                }
            }
        }
        is_pivot[col] = true;
        pivots.push(col);
    }
    let info: Vec<usize> = (0..vars).filter(|&c| !is_pivot[c]).collect();
    // Row r reads v[pivot] + sum_info h[r][j] v[j] = 0, and -x = x.
    let rows = (0..m)
        .map(|r| {
            info.iter()
                .enumerate()
                .filter(|(_, &j)| !h[r][j].is_zero())
                .map(|(i, &j)| (i, h[r][j]))
                .collect()
        })
        .collect();
    Ok((pivots, info, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbldpc::peg_construct;

    fn toy(w0: u16, w1: u16) -> NbLdpcCode {
        let f = GfField::gf256();
        NbLdpcCode::from_checks(
            f,
            2,
            vec![vec![
                Edge { var: 0, weight: GfSymbol::new(w0) },
                Edge { var: 1, weight: GfSymbol::new(w1) },
            ]],
        )
        .unwrap()
    }

    #[test]
    fn single_equation_encoder() {
        let code = toy(0x1D, 0x87);
        let f = code.field().clone();
        assert_eq!(code.parity_positions(), &[1]);
        assert_eq!(code.info_positions(), &[0]);
        let ratio = f.div(GfSymbol::new(0x1D), GfSymbol::new(0x87)).unwrap();
        for v0 in f.elements() {
            let cw = code.encode(&[v0]).unwrap();
            assert_eq!(cw, vec![v0, f.mul(ratio, v0)]);
            assert!(code.is_codeword(&cw));
        }
    }

    #[test]
    fn zero_info_zero_codeword() {
        let f = GfField::gf256();
        let g = peg_construct(76, 3, 2, 1).unwrap();
        let code = NbLdpcCode::assign_weights(&g, &f, 2).unwrap();
        assert_eq!(code.dimension(), 73);
        assert!((code.rate() - 73.0 / 76.0).abs() < 1e-15);
        let cw = code.encode(&[GfSymbol::ZERO; 73]).unwrap();
        assert!(cw.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn random_messages_satisfy_checks() {
        let f = GfField::gf256();
        let g = peg_construct(76, 3, 2, 3).unwrap();
        let code = NbLdpcCode::assign_weights(&g, &f, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let info: Vec<GfSymbol> = (0..73).map(|_| GfSymbol::new(rng.gen_range(0..256))).collect();
            let cw = code.encode(&info).unwrap();
            assert!(code.syndrome(&cw).unwrap().iter().all(|s| s.is_zero()));
            assert_eq!(code.extract_info(&cw), info);
        }
    }

    #[test]
    fn perturbation_detected() {
        let f = GfField::gf256();
        let g = peg_construct(76, 3, 2, 3).unwrap();
        let code = NbLdpcCode::assign_weights(&g, &f, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let info: Vec<GfSymbol> = (0..73).map(|_| GfSymbol::new(rng.gen_range(0..256))).collect();
        let cw = code.encode(&info).unwrap();
        for pos in 0..76 {
            let mut bad = cw.clone();
            bad[pos] = f.add(bad[pos], GfSymbol::new(rng.gen_range(1..256)));
            assert!(code.syndrome(&bad).unwrap().iter().any(|s| !s.is_zero()));
        }
    }

    #[test]
    fn weights_uniform_chi_square() {
        let f = GfField::gf256();
        let g = peg_construct(2500, 2, 2, 0).unwrap();
        // 5000 edges per draw, two draws -> 10^4 samples.
        let mut counts = vec![0usize; 256];
        for seed in 0..2 {
            let code = NbLdpcCode::assign_weights(&g, &f, seed).unwrap();
            for row in code.checks() {
                for e in row {
                    counts[e.weight.index()] += 1;
                }
            }
        }
        assert_eq!(counts[0], 0);
        let total: usize = counts.iter().sum();
        let expect = total as f64 / 255.0;
        let sigma = (expect * (1.0 - 1.0 / 255.0)).sqrt();
        for &c in &counts[1..] {
            assert!((c as f64 - expect).abs() < 5.0 * sigma, "count {c} vs {expect}");
        }
        let chi2: f64 = counts[1..].iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
        // 254 dof: mean 254, sd ~22.5.
        assert!(chi2 < 254.0 + 5.0 * 22.5, "chi2 {chi2}");
    }

    #[test]
    fn singular_matrix_rejected() {
        let f = GfField::gf256();
        let one = GfSymbol::ONE;
        let row = vec![Edge { var: 0, weight: one }, Edge { var: 1, weight: one }];
        let err = NbLdpcCode::from_checks(f, 3, vec![row.clone(), row]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, checks: 2 }));
    }

    #[test]
    fn zero_weight_rejected() {
        let f = GfField::gf256();
        let err = NbLdpcCode::from_checks(f, 2, vec![vec![Edge { var: 0, weight: GfSymbol::ZERO }]])
            .unwrap_err();
        assert!(matches!(err, Error::ZeroWeight));
    }

    #[test]
    fn encode_length_mismatch() {
        let code = toy(3, 5);
        assert!(matches!(code.encode(&[]), Err(Error::Length { .. })));
        assert!(matches!(code.syndrome(&[GfSymbol::ZERO]), Err(Error::Length { .. })));
    }
}
