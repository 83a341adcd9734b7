//! Bit-level CRC for CRC-aided list decoding.
//!
//! The register is zero-initialized and bits are fed most-significant first
//! with no reflection and no final XOR. The default code uses CRC-11 with
//! generator `D^11 + D^10 + D^9 + D^5 + 1`, written `0x621` with the leading
//! `D^11` term implicit.

use crate::error::{Error, Result};

/// Default CRC width used by the control-channel configuration.
pub const CRC11_WIDTH: usize = 11;
/// Default CRC generator (`D^11 + D^10 + D^9 + D^5 + 1`, leading term implicit).
pub const CRC11_POLY: u64 = 0x621;

/// A cyclic redundancy check defined by its width and generator polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crc {
    width: usize,
    poly: u64,
}

impl Crc {
    /// Creates a CRC. `poly` holds the generator's low `width` coefficients;
    /// the leading term is implicit.
    pub fn new(width: usize, poly: u64) -> Result<Self> {
        if width == 0 || width > 63 || poly >> width != 0 || poly == 0 {
            return Err(Error::BadCrc { width, poly });
        }
        Ok(Self { width, poly })
    }

    /// The CRC-11 used by default (`0x621`).
    pub fn crc11() -> Self {
        Self::new(CRC11_WIDTH, CRC11_POLY).expect("valid built-in parameters")
    }

    /// Number of check bits appended.
    pub fn width(&self) -> usize {
        self.width
    }

    /// The generator's low coefficients as passed to [`Crc::new`].
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Remainder of `bits * D^width` modulo the generator, as a register
    /// value with the first-emitted check bit in the highest position.
    fn remainder(&self, bits: &[u8]) -> u64 {
        let mask = (1u64 << self.width) - 1;
        let mut reg = 0u64;
        for &b in bits {
            let feedback = u64::from(b) ^ (reg >> (self.width - 1)) & 1;
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// Returns `payload` with the check bits appended.
    pub fn attach(&self, payload: &[u8]) -> Vec<u8> {
        let reg = self.remainder(payload);
        let mut word = Vec::with_capacity(payload.len() + self.width);
        word.extend_from_slice(payload);
        for i in (0..self.width).rev() {
            word.push(((reg >> i) & 1) as u8);
        }
        word
    }

    /// True if `word` (payload followed by check bits) has zero remainder.
    pub fn check(&self, word: &[u8]) -> bool {
        word.len() >= self.width && self.remainder(word) == 0
    }
}
