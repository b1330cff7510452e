//! Joint AMP-BP decoding of superimposed SR-LDPC codewords.
//!
//! Each iteration every user forms its estimated contribution to the
//! received signal (forward map of its state minus its Onsager term), the
//! contributions are subtracted from `y` to give a joint residual, and each
//! user then denoises its own effective observation `A_k^T z + s_k` by
//! running BP on its outer code. The per-user steps are independent and run
//! on the rayon pool; the residual and the noise estimate `tau` are the only
//! synchronization points.

mod decoder;
mod denoiser;

pub use decoder::{
    user_contribution, AmpBpDecoder, DecodeOutcome, DecoderParams, DecoderState, IterationTrace,
    UserEstimate,
};
pub use denoiser::{denoise_user, estimate_tau, posterior_alpha, UserDenoiser};
