//! Non-binary LDPC codes: graph construction, encoding, and the BP kernels
//! used inside the AMP denoiser.

mod bp;
mod code;
mod nbal;
mod peg;

pub use bp::{
    bp_estimate, check_to_var, fq_convolve, rotate, var_to_check, BeliefVector, BpWorkspace,
    NORM_FLOOR,
};
pub use code::{Edge, NbLdpcCode};
pub use nbal::{from_nbal, load_nbal, save_nbal, to_nbal};
pub use peg::{peg_construct, TannerGraph};

use crate::error::Result;
use crate::gf::GfField;

/// PEG graph plus random nonzero weights in one step. A rank-deficient draw
/// is retried with the next weight seed.
pub fn random_code(field: &GfField, len: usize, checks: usize, dv: usize, seed: u64) -> Result<NbLdpcCode> {
    let graph = peg_construct(len, checks, dv, seed)?;
    let mut last = None;
    for attempt in 0..16u64 {
        match NbLdpcCode::assign_weights(&graph, field, seed.wrapping_add(attempt << 32)) {
            Ok(code) => return Ok(code),
            Err(e @ crate::Error::RankDeficient { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
