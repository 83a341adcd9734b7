//! Leaf-node segmentation and per-node candidate generation.
//!
//! Node-based decoding cuts the code into contiguous nodes of `node_size`
//! bits and decides each node in one step. A node's frozen/information
//! pattern determines its class, and the class determines how candidate
//! codewords and branch metrics are produced.

use crate::code::{polar_transform, CodeConfig};
use crate::error::Result;
use crate::select::{
    k_smallest_flip_sets, smallest_bms_rate1, smallest_bms_spc, SortedMagnitudes,
};
use crate::Real;

/// Structural class of a node's frozen pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    /// All positions frozen: the only codeword is all-zero.
    Rate0,
    /// No positions frozen: every bit pattern is a codeword.
    Rate1,
    /// Exactly position 0 frozen: codewords are the even-parity patterns.
    Spc,
    /// Any other pattern (including repetition nodes); candidates come from
    /// enumerating the node's codebook.
    Generic,
}

impl NodeClass {
    /// Stable index for per-class tallies.
    pub fn index(self) -> usize {
        match self {
            NodeClass::Rate0 => 0,
            NodeClass::Rate1 => 1,
            NodeClass::Spc => 2,
            NodeClass::Generic => 3,
        }
    }

    /// Class name for reports.
    pub fn name(self) -> &'static str {
        match self {
            NodeClass::Rate0 => "rate0",
            NodeClass::Rate1 => "rate1",
            NodeClass::Spc => "spc",
            NodeClass::Generic => "generic",
        }
    }
}

/// Classifies a node by its information pattern (`true` = information).
pub fn classify_node(info: &[bool]) -> NodeClass {
    let count = info.iter().filter(|&&b| b).count();
    if count == 0 {
        NodeClass::Rate0
    } else if count == info.len() {
        NodeClass::Rate1
    } else if count == info.len() - 1 && !info[0] {
        NodeClass::Spc
    } else {
        NodeClass::Generic
    }
}

/// One decode-tree leaf: a contiguous block of `size` bit channels.
#[derive(Debug, Clone)]
pub struct LeafNode {
    /// Node index along the codeword.
    pub index: usize,
    /// First bit position covered.
    pub start: usize,
    /// Number of bit positions (the node size).
    pub size: usize,
    /// Structural class of the frozen pattern.
    pub class: NodeClass,
    /// Information pattern within the node (`true` = information).
    pub info: Vec<bool>,
    /// Number of information positions.
    pub info_count: usize,
    codewords: Vec<u16>,
}

impl LeafNode {
    /// All valid codewords as bit masks (bit `i` = node position `i`), in
    /// enumeration order of the information assignment.
    pub fn codewords(&self) -> &[u16] {
        &self.codewords
    }
}

/// Cuts the code into `N / node_size` leaf nodes with their codebooks.
pub fn segment_nodes(cfg: &CodeConfig) -> Vec<LeafNode> {
    let size = cfg.node_size();
    (0..cfg.n_block() / size)
        .map(|index| {
            let start = index * size;
            let info: Vec<bool> = (start..start + size).map(|i| !cfg.is_frozen(i)).collect();
            let info_count = info.iter().filter(|&&b| b).count();
            let class = classify_node(&info);
            let info_positions: Vec<usize> = (0..size).filter(|&i| info[i]).collect();
            let mut codewords = Vec::with_capacity(1 << info_count);
            let mut bits = vec![0u8; size];
            for assignment in 0u32..1 << info_count {
                bits.iter_mut().for_each(|b| *b = 0);
                for (bit_idx, &pos) in info_positions.iter().enumerate() {
                    bits[pos] = (assignment >> bit_idx & 1) as u8;
                }
                polar_transform(&mut bits);
                let mask = bits
                    .iter()
                    .enumerate()
                    .fold(0u16, |m, (i, &b)| m | (u16::from(b) << i));
                codewords.push(mask);
            }
            LeafNode {
                index,
                start,
                size,
                class,
                info,
                info_count,
                codewords,
            }
        })
        .collect()
}

/// Hard-decision mask of a node's LLRs (bit `i` set iff `alpha[i] < 0`).
pub(crate) fn hard_mask<R: Real>(alpha: &[R]) -> u16 {
    alpha
        .iter()
        .enumerate()
        .fold(0u16, |m, (i, a)| m | (u16::from(*a < R::zero()) << i))
}

/// Fills `out` with the node's `keep` best candidates as
/// `(branch metric, codeword mask)`, ascending in metric with deterministic
/// tie-breaking.
///
/// Dispatch: rate-0 nodes have a single candidate; rate-1 and
/// single-parity-check nodes use the size-4 closed forms or best-first flip
/// enumeration when `keep` is less than the codebook; everything else (and
/// any full-codebook request) scores the enumerated codebook and partially
/// sorts it.
pub(crate) fn node_candidates<R: Real>(
    node: &LeafNode,
    alpha: &[R],
    keep: usize,
    flips: &mut Vec<R>,
    enumerated: &mut Vec<(R, u16, u16)>,
    out: &mut Vec<(R, u16)>,
) -> Result<()> {
    debug_assert_eq!(alpha.len(), node.size);
    debug_assert!(keep >= 1);
    out.clear();
    let codebook = node.codewords.len();
    match node.class {
        NodeClass::Rate0 => {
            let bm = alpha
                .iter()
                .filter(|a| **a < R::zero())
                .fold(R::zero(), |s, a| s + a.abs());
            out.push((bm, 0));
        }
        NodeClass::Rate1 if keep < codebook => {
            let sm = SortedMagnitudes::new(alpha);
            if node.size == 4 && matches!(keep, 1 | 2 | 4 | 8) {
                out.extend(smallest_bms_rate1(&sm, keep)?);
            } else {
                out.extend(
                    k_smallest_flip_sets(sm.values(), keep, None)?
                        .into_iter()
                        .map(|(bm, rank_mask)| (bm, sm.codeword(rank_mask))),
                );
            }
        }
        NodeClass::Spc if keep < codebook => {
            let sm = SortedMagnitudes::new(alpha);
            if node.size == 4 && matches!(keep, 1 | 2 | 4) {
                out.extend(smallest_bms_spc(&sm, keep)?);
            } else {
                out.extend(
                    k_smallest_flip_sets(sm.values(), keep, Some(sm.syndrome()))?
                        .into_iter()
                        .map(|(bm, rank_mask)| (bm, sm.codeword(rank_mask))),
                );
            }
        }
        _ => {
            score_codebook(node, alpha, keep, flips, enumerated);
            out.extend(enumerated.iter().map(|&(bm, cw, _)| (bm, cw)));
        }
    }
    Ok(())
}

/// Scores every codeword in the node's codebook against the hard decisions
/// and keeps the `keep` smallest, ties broken by enumeration order.
fn score_codebook<R: Real>(
    node: &LeafNode,
    alpha: &[R],
    keep: usize,
    flips: &mut Vec<R>,
    enumerated: &mut Vec<(R, u16, u16)>,
) {
    // flips[mask] = sum of |alpha_i| over the set bits of mask.
    let size = node.size;
    flips.clear();
    flips.resize(1 << size, R::zero());
    for mask in 1usize..1 << size {
        let low = mask.trailing_zeros() as usize;
        flips[mask] = flips[mask & (mask - 1)] + alpha[low].abs();
    }
    let hard = hard_mask(alpha);
    enumerated.clear();
    enumerated.extend(
        node.codewords
            .iter()
            .enumerate()
            .map(|(j, &cw)| (flips[(cw ^ hard) as usize], cw, j as u16)),
    );
    let cmp = |p: &(R, u16, u16), q: &(R, u16, u16)| {
        p.0.partial_cmp(&q.0)
            .expect("finite metrics")
            .then(p.2.cmp(&q.2))
    };
    if keep < enumerated.len() {
        enumerated.select_nth_unstable_by(keep - 1, cmp);
        enumerated.truncate(keep);
    }
    enumerated.sort_unstable_by(cmp);
}
