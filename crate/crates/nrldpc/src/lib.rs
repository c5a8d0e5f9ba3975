//! Bit-exact software model of a multi-mode 5G NR LDPC decoder.
//!
//! The crate covers the full path from code construction to error-rate
//! measurement for base graph 1 with lifting sizes up to `Z = 96`:
//!
//! * [`basegraph`] — loading and validating the quasi-cyclic base graph,
//!   lifting it into a sparse parity-check matrix, and deriving frame
//!   lengths and rates (`rate = 22 / (20 + mb)`, from 11/12 down to 1/3).
//! * [`codec`] — systematic encoding (GF(2) core solve plus direct
//!   extension parity) and rate matching (the first `2Z` bits are always
//!   punctured).
//! * [`channel`] — BPSK over AWGN with reproducible ChaCha12 noise streams,
//!   exact channel LLRs, and 5-bit quantization.
//! * [`qllr`] — the saturating fixed-point message format (LSB 0.5,
//!   symmetric range of ±15 units).
//! * [`decoder`] — offset-min-sum flooding decoding with early termination:
//!   tree two-minimum comparator, check/variable node kernels, the degree-1
//!   extension variable node, and multi-frame batch decoding.
//! * [`shiftnet`] — structural model of the 96-lane cyclic shift network
//!   (two rotators plus an output mux stage) and its dual-48 / quad-24
//!   partition modes, with cost formulas for the classic topologies.
//! * [`perfmodel`] — analytical cycle and throughput model, including the
//!   multi-frame throughput restoration at small lifting sizes.
//! * [`sweep`] — deterministic Monte-Carlo BER/FER sweeps with CSV output.
//!
//! The `nrldpc` binary exposes all of it as subcommands (`validate`,
//! `encode`, `ber-sweep`, `shiftnet-verify`, `throughput`).

pub mod basegraph;
pub mod channel;
pub mod codec;
pub mod decoder;
pub mod error;
pub mod perfmodel;
pub mod qllr;
pub mod shiftnet;
pub mod sweep;

pub use basegraph::{BaseGraph, CodeConfig, ParityMatrix};
pub use codec::{Codeword, Encoder, TxFrame};
pub use decoder::{decode, decode_batch, DecodeOutput, DecodeParams};
pub use error::{Error, Result};
pub use qllr::Qllr;
