//! Code construction and the polar transform.
//!
//! Channel reliabilities come from the polarization-weight construction: index
//! `i` with binary expansion `b_{n-1} .. b_0` gets weight
//! `W(i) = sum_j b_j * beta^j` with `beta = 2^(1/4)`. Sorting indices by
//! ascending weight yields the reliability order; the least reliable `N - K`
//! indices are frozen to zero and the rest carry information bits.

use std::path::Path;

use crate::crc::Crc;
use crate::error::{Error, Result};

/// Returns all channel indices of a length-`n_block` code sorted by ascending
/// reliability (least reliable first).
///
/// Weights are distinct for distinct indices, so the order is unique; ties in
/// the sort key cannot occur but would resolve by ascending index.
pub fn build_reliability_order(n_block: usize) -> Result<Vec<usize>> {
    if !n_block.is_power_of_two() || n_block < 2 {
        return Err(Error::BadBlockLength(n_block));
    }
    let stages = n_block.trailing_zeros() as usize;
    let beta = 2f64.powf(0.25);
    let pow: Vec<f64> = (0..stages).map(|j| beta.powi(j as i32)).collect();
    let weight = |i: usize| -> f64 {
        pow.iter()
            .enumerate()
            .filter(|&(j, _)| (i >> j) & 1 == 1)
            .map(|(_, p)| p)
            .sum()
    };
    let weights: Vec<f64> = (0..n_block).map(weight).collect();
    let mut order: Vec<usize> = (0..n_block).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
    Ok(order)
}

/// Applies the polar transform `x = u * G^(x)n` in place.
///
/// The transform is its own inverse, so calling it twice restores the input.
/// Bits must be 0 or 1.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        let step = half * 2;
        for block in (0..n).step_by(step) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half = step;
    }
}

/// Parses a reliability override file: UTF-8 text, one decimal channel index
/// per line, exactly `n_block` lines forming a permutation of `0..n_block`.
///
/// Line order is ascending reliability, matching [`build_reliability_order`].
pub fn read_reliability_file(path: &Path, n_block: usize) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ReliabilityFile(format!("{}: {e}", path.display())))?;
    parse_reliability_text(&text, n_block)
}

fn parse_reliability_text(text: &str, n_block: usize) -> Result<Vec<usize>> {
    let mut order = Vec::with_capacity(n_block);
    let mut seen = vec![false; n_block];
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            return Err(Error::ReliabilityFile(format!("line {}: empty", lineno + 1)));
        }
        let idx: usize = trimmed.parse().map_err(|_| {
            Error::ReliabilityFile(format!("line {}: not an index: {trimmed:?}", lineno + 1))
        })?;
        if idx >= n_block {
            return Err(Error::ReliabilityFile(format!(
                "line {}: index {idx} out of range for block length {n_block}",
                lineno + 1
            )));
        }
        if seen[idx] {
            return Err(Error::ReliabilityFile(format!(
                "line {}: duplicate index {idx}",
                lineno + 1
            )));
        }
        seen[idx] = true;
        order.push(idx);
    }
    if order.len() != n_block {
        return Err(Error::ReliabilityFile(format!(
            "expected {n_block} lines, got {}",
            order.len()
        )));
    }
    Ok(order)
}

/// A polar code: block length, information set, optional CRC, and the node
/// size used by node-based decoders.
#[derive(Debug, Clone)]
pub struct CodeConfig {
    n_block: usize,
    k_payload: usize,
    node_size: usize,
    crc: Option<Crc>,
    frozen: Vec<bool>,
    info_positions: Vec<usize>,
}

impl CodeConfig {
    /// Builds a code with the polarization-weight reliability order.
    ///
    /// `k_payload` counts payload bits only; the CRC (if any) adds its width
    /// on top, and `k_payload + crc_width` channels carry information.
    pub fn new(
        n_block: usize,
        k_payload: usize,
        crc: Option<Crc>,
        node_size: usize,
    ) -> Result<Self> {
        let order = build_reliability_order(n_block)?;
        Self::with_reliability_order(n_block, k_payload, crc, node_size, &order)
    }

    /// Builds a code from an explicit reliability order (ascending
    /// reliability, a permutation of `0..n_block`).
    pub fn with_reliability_order(
        n_block: usize,
        k_payload: usize,
        crc: Option<Crc>,
        node_size: usize,
        order: &[usize],
    ) -> Result<Self> {
        if !n_block.is_power_of_two() || n_block < 2 {
            return Err(Error::BadBlockLength(n_block));
        }
        if node_size != 4 && node_size != 8 || node_size > n_block {
            return Err(Error::BadNodeSize(node_size));
        }
        if order.len() != n_block {
            return Err(Error::LengthMismatch {
                what: "reliability order",
                expected: n_block,
                got: order.len(),
            });
        }
        let k_total = k_payload + crc.as_ref().map_or(0, Crc::width);
        if k_payload == 0 || k_total > n_block {
            return Err(Error::TooManyInfoBits {
                info: k_total,
                block: n_block,
            });
        }
        let mut frozen = vec![false; n_block];
        for &idx in &order[..n_block - k_total] {
            frozen[idx] = true;
        }
        let info_positions: Vec<usize> = (0..n_block).filter(|&i| !frozen[i]).collect();
        debug_assert_eq!(info_positions.len(), k_total);
        Ok(Self {
            n_block,
            k_payload,
            node_size,
            crc,
            frozen,
            info_positions,
        })
    }

    /// Block length `N`.
    pub fn n_block(&self) -> usize {
        self.n_block
    }

    /// Number of payload bits (excluding CRC).
    pub fn k_payload(&self) -> usize {
        self.k_payload
    }

    /// Number of information channels: payload plus CRC width.
    pub fn k_total(&self) -> usize {
        self.info_positions.len()
    }

    /// Node size used by node-based decoders.
    pub fn node_size(&self) -> usize {
        self.node_size
    }

    /// The CRC attached to the payload, if any.
    pub fn crc(&self) -> Option<&Crc> {
        self.crc.as_ref()
    }

    /// True if channel `i` is frozen to zero.
    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    /// Frozen mask over all channels (`true` = frozen).
    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    /// Information channel indices in ascending order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    /// Places payload (plus CRC, if configured) into the information
    /// channels of a length-`N` input vector, frozen channels zero.
    pub fn assemble_input(&self, payload: &[u8]) -> Result<Vec<u8>> {
        if payload.len() != self.k_payload {
            return Err(Error::LengthMismatch {
                what: "payload",
                expected: self.k_payload,
                got: payload.len(),
            });
        }
        let word = match &self.crc {
            Some(crc) => crc.attach(payload),
            None => payload.to_vec(),
        };
        debug_assert_eq!(word.len(), self.k_total());
        let mut u = vec![0u8; self.n_block];
        for (&pos, &bit) in self.info_positions.iter().zip(&word) {
            u[pos] = bit;
        }
        Ok(u)
    }

    /// Encodes a payload into a codeword: CRC attachment, channel placement,
    /// polar transform.
    pub fn encode(&self, payload: &[u8]) -> Result<Vec<u8>> {
        let mut x = self.assemble_input(payload)?;
        polar_transform(&mut x);
        Ok(x)
    }

    /// Extracts the information word (payload plus CRC) from a decoded input
    /// vector `u`.
    pub fn extract_info(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&i| u[i]).collect()
    }

    /// Extracts just the payload bits from a decoded input vector `u`.
    pub fn extract_payload(&self, u: &[u8]) -> Vec<u8> {
        self.info_positions[..self.k_payload]
            .iter()
            .map(|&i| u[i])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reliability_order_small_blocks() {
        assert_eq!(build_reliability_order(2).unwrap(), vec![0, 1]);
        assert_eq!(build_reliability_order(4).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(
            build_reliability_order(8).unwrap(),
            vec![0, 1, 2, 4, 3, 5, 6, 7]
        );
    }

    #[test]
    fn reliability_order_is_permutation() {
        for n in [16, 64, 128, 1024] {
            let mut order = build_reliability_order(n).unwrap();
            order.sort_unstable();
            assert_eq!(order, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rejects_bad_block_length() {
        assert!(build_reliability_order(0).is_err());
        assert!(build_reliability_order(1).is_err());
        assert!(build_reliability_order(12).is_err());
    }

    #[test]
    fn transform_examples() {
        let mut x = vec![0, 0, 0, 1];
        polar_transform(&mut x);
        assert_eq!(x, vec![1, 1, 1, 1]);

        let mut x = vec![1, 0, 0, 0];
        polar_transform(&mut x);
        assert_eq!(x, vec![1, 0, 0, 0]);
    }

    #[test]
    fn transform_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let n = 1 << rng.gen_range(1..=7);
            let x: Vec<u8> = (0..n).map(|_| rng.gen_range(0u8..=1)).collect();
            let mut y = x.clone();
            polar_transform(&mut y);
            polar_transform(&mut y);
            assert_eq!(x, y);
        }
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let n = 1 << rng.gen_range(1..=7);
            let a: Vec<u8> = (0..n).map(|_| rng.gen_range(0u8..=1)).collect();
            let b: Vec<u8> = (0..n).map(|_| rng.gen_range(0u8..=1)).collect();
            let mut ta = a.clone();
            let mut tb = b.clone();
            polar_transform(&mut ta);
            polar_transform(&mut tb);
            let mut sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            polar_transform(&mut sum);
            let tsum: Vec<u8> = ta.iter().zip(&tb).map(|(x, y)| x ^ y).collect();
            assert_eq!(sum, tsum);
        }
    }

    #[test]
    fn frozen_set_n8_k4() {
        let cfg = CodeConfig::new(8, 4, None, 4).unwrap();
        assert_eq!(cfg.info_positions(), &[3, 5, 6, 7]);
        for i in [0, 1, 2, 4] {
            assert!(cfg.is_frozen(i));
        }
    }

    #[test]
    fn encode_all_ones_input() {
        // Only channel 7 set: u = e7, codeword = last row of the transform.
        let cfg = CodeConfig::new(8, 1, None, 4).unwrap();
        assert_eq!(cfg.info_positions(), &[7]);
        let x = cfg.encode(&[1]).unwrap();
        assert_eq!(x, vec![1; 8]);
    }

    #[test]
    fn encode_round_trips_through_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let cfg = CodeConfig::new(64, 20, None, 4).unwrap();
        for _ in 0..1000 {
            let payload: Vec<u8> = (0..20).map(|_| rng.gen_range(0u8..=1)).collect();
            let mut x = cfg.encode(&payload).unwrap();
            polar_transform(&mut x);
            for i in 0..64 {
                if cfg.is_frozen(i) {
                    assert_eq!(x[i], 0);
                }
            }
            assert_eq!(cfg.extract_payload(&x), payload);
        }
    }

    #[test]
    fn config_validation() {
        assert!(CodeConfig::new(12, 4, None, 4).is_err());
        assert!(CodeConfig::new(64, 0, None, 4).is_err());
        assert!(CodeConfig::new(64, 65, None, 4).is_err());
        assert!(CodeConfig::new(64, 16, None, 5).is_err());
        assert!(CodeConfig::new(4, 2, None, 8).is_err());
        let crc = Crc::new(11, 0x621).unwrap();
        assert!(CodeConfig::new(16, 6, Some(crc), 4).is_err());
    }

    #[test]
    fn reliability_file_round_trip() {
        let order = build_reliability_order(16).unwrap();
        let text: String = order.iter().map(|i| format!("{i}\n")).collect();
        let parsed = parse_reliability_text(&text, 16).unwrap();
        assert_eq!(parsed, order);
    }

    #[test]
    fn reliability_file_rejects_malformed_input() {
        assert!(parse_reliability_text("0\n1\n2\n", 4).is_err());
        assert!(parse_reliability_text("0\n1\n2\nx\n", 4).is_err());
        assert!(parse_reliability_text("0\n1\n2\n9\n", 4).is_err());
        assert!(parse_reliability_text("0\n1\n2\n2\n", 4).is_err());
        assert!(parse_reliability_text("0\n\n2\n3\n", 4).is_err());
    }

    #[test]
    fn override_order_changes_frozen_set() {
        // Reversed order freezes the most reliable channels instead.
        let order: Vec<usize> = (0..8).rev().collect();
        let cfg = CodeConfig::with_reliability_order(8, 4, None, 4, &order).unwrap();
        assert_eq!(cfg.info_positions(), &[0, 1, 2, 3]);
    }
}
