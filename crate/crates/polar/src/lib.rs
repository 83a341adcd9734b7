//! Polar code construction, encoding, and successive-cancellation decoding.
//!
//! The crate provides:
//!
//! - code construction from polarization weights ([`code::CodeConfig`]),
//! - CRC attachment for CRC-aided list decoding ([`crc::Crc`]),
//! - the f/g/beta update kernel shared by all decoders ([`kernel`]),
//! - QPSK modulation and AWGN LLR demapping ([`channel`]),
//! - SC, SC-list, and node-based list decoders, including partial-selection
//!   list decoding with stair-profile candidate pruning ([`decode`], [`select`]),
//! - path-metric-probability tables and sorter-complexity accounting
//!   ([`analysis`]).
//!
//! LLR arithmetic is generic over the scalar type through the [`Real`] trait,
//! so decoders run in either `f32` or `f64`. Code construction and analysis
//! always use `f64`.

pub mod analysis;
pub mod channel;
pub mod code;
pub mod crc;
pub mod decode;
pub mod error;
pub mod kernel;
pub mod select;

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Scalar type used for LLRs and path metrics.
///
/// Implemented for `f32` and `f64` (and any other float-like type meeting the
/// bounds).
pub trait Real: Float + FromPrimitive + Sum + Debug + Default + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Default + Send + Sync + 'static {}

pub use code::{build_reliability_order, polar_transform, CodeConfig};
pub use crc::Crc;
pub use error::{Error, Result};
pub use kernel::CombineMode;
pub use select::SelectionProfile;

/// Default LLR scalar used by the simulation tooling.
pub type Llr = f64;

/// Single-precision list-decoder output.
pub type ListOutputF32 = decode::ListOutput<f32>;
/// Double-precision list-decoder output.
pub type ListOutputF64 = decode::ListOutput<f64>;
