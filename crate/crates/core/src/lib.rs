//! Two-party synchronization of bit strings that differ in few positions.
//!
//! Alice holds `X`, Bob holds `Y`, and both know `d(X, Y) <= floor(alpha n)`.
//! Each protocol here lets Bob recover `X` while counting every bit sent.
//!
//! - [`bitword`]: words, Hamming distance, ball volumes and entropy bounds.
//! - [`transport`]: party step machines, transcripts, loopback and TCP channels.
//! - [`hashing`]: prime sieving, mod-prime and secondary hashing, NBA protocols.
//! - [`gf2codes`]: GF(2) matrices, linear codes, syndromes, list decoding.
//! - [`gf2k_rs`]: GF(2^k) arithmetic and the Reed-Solomon outer layer.
//! - [`syncdet`]: deterministic synchronization protocols.
//! - [`probproto`]: randomized protocols with permutation mixing.
//! - [`harness`]: experiment runner and CSV/JSON reports.

pub mod bitword;
pub mod error;
pub mod gf2codes;
pub mod gf2k_rs;
pub mod harness;
pub mod hashing;
pub mod probproto;
pub mod syncdet;
pub mod transport;

pub use bitword::{Bounds, Word};
pub use error::{Error, Result};
pub use transport::{ProtocolOutcome, Transcript};
