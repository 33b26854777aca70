//! Sparse matrix coding (SMC) and sparse vector coding (SVC) for short-packet
//! links.
//!
//! Two users' payloads are ranked into sorted index sets, paired into the
//! nonzeros of an `n x n` sparse matrix `X`, spread on both sides by a
//! Bernoulli dictionary and sent as `Y = diag(h) A X A^H + N`. The receiver
//! recovers both index sets with block matching pursuit.
//!
//! - [`dictionary`]: spreading dictionaries and coherence
//! - [`codec`]: payload ranking and codeword construction
//! - [`channel`]: fading, noise and the transmission model
//! - [`decoder`]: block-greedy decoding, dual and fused paths, CoMP
//!   combining, exhaustive ML oracle, SVC matching pursuit
//! - [`analysis`]: closed-form BLER bound and code efficiency
//! - [`harness`]: Monte Carlo sweeps, validation and reporting

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod decoder;
pub mod dictionary;
pub mod error;
pub mod harness;
pub mod rng;

pub use analysis::{
    bler_upper_bound, block_success_prob, chi_sq_exp, efficiency, BoundParams, BoundVariant,
};
pub use channel::{
    sample_channel, snr_to_sigma2, transmit, ChannelMode, ChannelRealization, ReceivedFrame,
};
pub use codec::{
    rank_to_subset, smc_encode, subset_to_rank, svc_encode, Payload, SmcCodeword, SvcCodeword,
};
pub use decoder::{
    block_mp_decode, block_score, comp_combine, dual_decode, fused_decode, ml_oracle_decode,
    svc_mp_decode, vectorize, DecodePath, DecodeResult, DecodeStatus, ScoreRule,
};
pub use dictionary::Dictionary;
pub use error::{Result, SmcError};
pub use harness::{run_sweep, validate, Scheme, SimConfig};

pub use num_complex::Complex64;
