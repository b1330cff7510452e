//! Multi-user SR-LDPC coding for the Gaussian multiple-access channel.
//!
//! Every user encodes its message with a non-binary LDPC code over
//! GF(2^p), maps each coded symbol to a one-hot section of length `q`, and
//! compresses the resulting block-sparse vector with its own sensing
//! operator. The receiver sees the sum of all users' codewords plus noise
//! and recovers every message jointly with an AMP decoder whose denoiser
//! runs belief propagation on each user's outer code.
//!
//! ```
//! use mu_srldpc::gf::GfField;
//! use mu_srldpc::nbldpc::random_code;
//!
//! let field = GfField::gf256();
//! let code = random_code(&field, 76, 3, 2, 1).unwrap();
//! assert_eq!(code.dimension(), 73);
//! ```
//!
//! Module map:
//! - [`gf`]: field arithmetic and the symbol/section-index bijection.
//! - [`nbldpc`]: PEG graphs, systematic encoding and BP kernels.
//! - [`sparc`]: bits, symbols and section vectors.
//! - [`sensing`]: Gaussian and subsampled-Hadamard operators.
//! - [`amp`]: the joint AMP-BP decoder.
//! - [`sim`]: channel model, Monte Carlo engine and CSV output.

pub mod amp;
pub mod encoder;
pub mod error;
pub mod gf;
pub mod nbldpc;
pub mod selftest;
pub mod sensing;
pub mod sim;
pub mod sparc;

pub use error::{Error, Result};
