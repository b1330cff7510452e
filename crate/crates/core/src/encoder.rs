//! Single-user SR-LDPC transmit chain: bits, outer code, one-hot sections,
//! sensing operator.

use crate::error::{Error, Result};
use crate::gf::GfSymbol;
use crate::nbldpc::NbLdpcCode;
use crate::sensing::SensingOperator;
use crate::sparc::{bits_to_symbols, symbols_to_indicator};

/// Everything a single user produces for one message.
#[derive(Debug, Clone)]
pub struct EncodedMessage {
    pub info: Vec<GfSymbol>,
    pub codeword: Vec<GfSymbol>,
    /// Block-sparse vector `s` with amplitude already applied.
    pub sections: Vec<f64>,
    /// Channel input `x = A s`.
    pub signal: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SrLdpcEncoder<'a> {
    code: &'a NbLdpcCode,
    op: &'a SensingOperator,
    amplitude: f64,
}

impl<'a> SrLdpcEncoder<'a> {
    pub fn new(code: &'a NbLdpcCode, op: &'a SensingOperator, amplitude: f64) -> Result<Self> {
        let cols = code.len() * code.field().q();
        if op.cols() != cols {
            return Err(Error::Dimensions(format!(
                "operator has {} columns, code needs {cols}",
                op.cols()
            )));
        }
        Ok(SrLdpcEncoder {
            code,
            op,
            amplitude,
        })
    }

    /// Number of information bits per message.
    pub fn info_bits(&self) -> usize {
        self.code.dimension() * self.code.field().p() as usize
    }

    pub fn encode_bits(&self, bits: &[u8]) -> Result<EncodedMessage> {
        if bits.len() != self.info_bits() {
            return Err(Error::Length {
                expected: self.info_bits(),
                got: bits.len(),
            });
        }
        let info = bits_to_symbols(bits, self.code.field())?;
        self.encode_symbols(info)
    }

    pub fn encode_symbols(&self, info: Vec<GfSymbol>) -> Result<EncodedMessage> {
        let codeword = self.code.encode(&info)?;
        let sections = symbols_to_indicator(&codeword, self.amplitude, self.code.field()).into_vec();
        let signal = self.op.forward(&sections)?;
        Ok(EncodedMessage {
            info,
            codeword,
            sections,
            signal,
        })
    }
}
