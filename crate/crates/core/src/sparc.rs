//! Mapping between bits, field symbols and block-sparse section vectors.

use crate::error::{Error, Result};
use crate::gf::{GfField, GfSymbol};

/// Packs bits (each 0 or 1) into symbols, `p` bits per symbol, MSB first.
pub fn bits_to_symbols(bits: &[u8], field: &GfField) -> Result<Vec<GfSymbol>> {
    let p = field.p() as usize;
    if bits.len() % p != 0 {
        return Err(Error::BitLength {
            len: bits.len(),
            p: field.p(),
        });
    }
    bits.chunks_exact(p)
        .map(|chunk| {
            let mut v = 0u16;
            for &b in chunk {
                if b > 1 {
                    return Err(Error::Parameter(format!("bit value {b}")));
                }
                v = (v << 1) | b as u16;
            }
            Ok(GfSymbol::new(v))
        })
        .collect()
}

pub fn symbols_to_bits(symbols: &[GfSymbol], field: &GfField) -> Vec<u8> {
    let p = field.p();
    symbols
        .iter()
        .flat_map(|s| (0..p).rev().map(move |i| ((s.value() >> i) & 1) as u8))
        .collect()
}

/// Per-section amplitude for total energy `power` spread evenly over
/// `sections` sections.
pub fn amplitude(power: f64, sections: usize) -> Result<f64> {
    if !(power > 0.0 && power.is_finite()) || sections == 0 {
        return Err(Error::Parameter(format!(
            "amplitude needs P > 0 and L > 0 (P={power}, L={sections})"
        )));
    }
    Ok((power / sections as f64).sqrt())
}

/// Block-sparse vector of `L` sections of length `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionVector {
    q: usize,
    values: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl SectionVector {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sections(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn section(&self, l: usize) -> &[f64] {
        &self.values[l * self.q..(l + 1) * self.q]
    }
}

/// One-hot encodes each symbol at `phi(v_l)` with uniform amplitude `d`.
pub fn symbols_to_indicator(symbols: &[GfSymbol], d: f64, field: &GfField) -> SectionVector {
    symbols_to_indicator_with(symbols, &vec![d; symbols.len()], field)
}

/// As [`symbols_to_indicator`] with an amplitude per section.
pub fn symbols_to_indicator_with(symbols: &[GfSymbol], amps: &[f64], field: &GfField) -> SectionVector {
    assert_eq!(symbols.len(), amps.len(), "one amplitude per section");
    let q = field.q();
    let mut values = vec![0.0; q * symbols.len()];
    for (l, (&s, &a)) in symbols.iter().zip(amps).enumerate() {
        values[l * q + field.phi(s)] = a;
    }
    SectionVector {
        q,
        values,
        amplitudes: amps.to_vec(),
    }
}

/// Per-section argmax, ties to the lowest index.
pub fn hard_decision(estimate: &[f64], field: &GfField) -> Result<Vec<GfSymbol>> {
    let q = field.q();
    if estimate.len() % q != 0 {
        return Err(Error::Length {
            expected: estimate.len().div_ceil(q) * q,
            got: estimate.len(),
        });
    }
    estimate
        .chunks_exact(q)
        .map(|sec| {
            let mut best = 0;
            for (i, &x) in sec.iter().enumerate().skip(1) {
                if x > sec[best] {
                    best = i;
                }
            }
            field.phi_inv(best)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bit_packing_cases() {
        let f = GfField::gf256();
        assert_eq!(bits_to_symbols(&[0; 8], &f).unwrap(), vec![GfSymbol::ZERO]);
        assert_eq!(
            bits_to_symbols(&[0, 0, 0, 0, 0, 0, 0, 1], &f).unwrap(),
            vec![GfSymbol::ONE]
        );
        assert!(matches!(bits_to_symbols(&[0; 7], &f), Err(Error::BitLength { .. })));
    }

    #[test]
    fn default_message_round_trip() {
        let f = GfField::gf256();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bits: Vec<u8> = (0..584).map(|_| rng.gen_range(0..2)).collect();
        let syms = bits_to_symbols(&bits, &f).unwrap();
        assert_eq!(syms.len(), 73);
        assert_eq!(symbols_to_bits(&syms, &f), bits);
    }

    #[test]
    fn amplitude_cases() {
        assert_eq!(amplitude(76.0, 76).unwrap(), 1.0);
        let d = amplitude(2330.5, 76).unwrap();
        assert!((d - 5.5376).abs() < 1e-3, "{d}");
        assert!(amplitude(0.0, 76).is_err());
    }

    #[test]
    fn indicator_layout() {
        let f = GfField::with_degree(4).unwrap();
        let s = symbols_to_indicator(&[GfSymbol::ZERO; 3], 1.0, &f);
        let nz: Vec<usize> = s.as_slice().iter().enumerate().filter(|(_, &x)| x != 0.0).map(|(i, _)| i).collect();
        assert_eq!(nz, vec![0, 16, 32]);
        let s = symbols_to_indicator(&[GfSymbol::ONE], 2.5, &f);
        assert_eq!(s.section(0)[1], 2.5);
        assert_eq!(s.as_slice().iter().filter(|&&x| x != 0.0).count(), 1);
    }

    #[test]
    fn hard_decision_cases() {
        let f = GfField::with_degree(2).unwrap();
        assert_eq!(hard_decision(&[0.2, 0.2, 0.5, 0.1], &f).unwrap(), vec![GfSymbol::new(2)]);
        assert_eq!(hard_decision(&[0.25; 4], &f).unwrap(), vec![GfSymbol::ZERO]);
        assert!(hard_decision(&[0.0; 5], &f).is_err());
    }

    proptest! {
        #[test]
        fn indicator_round_trip(values in prop::collection::vec(0u16..256, 1..80), d in 0.1f64..20.0) {
            let f = GfField::gf256();
            let syms: Vec<GfSymbol> = values.into_iter().map(GfSymbol::new).collect();
            let s = symbols_to_indicator(&syms, d, &f);
            let l1: f64 = s.as_slice().iter().map(|x| x.abs()).sum();
            prop_assert!((l1 - syms.len() as f64 * d).abs() <= 1e-9 * l1);
            prop_assert_eq!(s.as_slice().iter().filter(|&&x| x != 0.0).count(), syms.len());
            prop_assert_eq!(hard_decision(s.as_slice(), &f).unwrap(), syms);
        }

        #[test]
        fn bits_round_trip(bits in prop::collection::vec(0u8..2, 0..64usize).prop_map(|mut b| { b.truncate(b.len() / 4 * 4); b })) {
            let f = GfField::with_degree(4).unwrap();
            let syms = bits_to_symbols(&bits, &f).unwrap();
            prop_assert_eq!(symbols_to_bits(&syms, &f), bits);
        }
    }
}
