//! Successive-cancellation decoders: plain SC, bit-level SC list, and
//! node-based SC list with optional partial selection.
//!
//! The list decoders share a path-memory engine that recomputes only the LLR
//! stages invalidated by each decision. The bit-level and node-based list
//! decoders are deliberately independent implementations of the same decoder
//! family so they can cross-validate each other: under min-sum, the sum of
//! bit-level metric penalties inside a node equals the node-level branch
//! metric exactly (up to float rounding).

mod engine;
pub mod node;
pub mod sc;
pub mod scl;
pub mod sscl;

pub use node::{classify_node, segment_nodes, LeafNode, NodeClass};
pub use sc::decode_sc;
pub use scl::{decode_scl, validate_list_size, PruneSchedule, SclDecoder, SclOptions};
pub use sscl::{decode_ps_scl, decode_sscl, NodeSelection, SsclDecoder, SsclOptions};

use crate::Real;

/// Result of a list decode.
#[derive(Debug, Clone)]
pub struct ListOutput<R> {
    /// Input-vector estimate of the selected path (length `N`, frozen bits
    /// included).
    pub u_hat: Vec<u8>,
    /// Final path metrics of all surviving paths, ascending.
    pub path_metrics: Vec<R>,
    /// Index of the selected path within `path_metrics`.
    pub chosen: usize,
    /// True if the selected path passes the configured CRC.
    pub crc_ok: bool,
}

/// Metric penalty of deciding `bit` when the LLR is `alpha`: `|alpha|` iff
/// the decision contradicts the hard decision (zero LLR counts as bit 0).
#[inline]
pub(crate) fn penalty<R: Real>(alpha: R, bit: u8) -> R {
    let hard = u8::from(alpha < R::zero());
    if bit == hard {
        R::zero()
    } else {
        alpha.abs()
    }
}

/// Selects the reported path: the best CRC-passing path if CRC-aided
/// selection is on, otherwise (or as fallback) the lowest-metric path.
pub(crate) fn choose_output<R: Real>(
    cfg: &crate::code::CodeConfig,
    crc_aided: bool,
    paths_u: &[&[u8]],
    pms: &[R],
) -> ListOutput<R> {
    let crc = cfg.crc();
    let mut chosen = 0;
    let mut crc_ok = false;
    if let Some(crc) = crc {
        if crc_aided {
            if let Some(i) = paths_u
                .iter()
                .position(|u| crc.check(&cfg.extract_info(u)))
            {
                chosen = i;
                crc_ok = true;
            }
        } else {
            crc_ok = crc.check(&cfg.extract_info(paths_u[chosen]));
        }
    }
    ListOutput {
        u_hat: paths_u[chosen].to_vec(),
        path_metrics: pms.to_vec(),
        chosen,
        crc_ok,
    }
}
