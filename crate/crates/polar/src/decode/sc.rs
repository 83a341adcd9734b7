//! Plain successive-cancellation decoding.
//!
//! Implemented as a direct recursion over the code tree, independent of the
//! list decoders' incremental path memory, so the two can check each other.

use crate::code::CodeConfig;
use crate::error::{Error, Result};
use crate::kernel::{beta_combine, f_combine, g_combine, CombineMode};
use crate::Real;

/// Decodes one frame with successive cancellation, returning the estimated
/// input vector (length `N`, frozen bits zero).
pub fn decode_sc<R: Real>(cfg: &CodeConfig, llr: &[R], mode: CombineMode) -> Result<Vec<u8>> {
    if llr.len() != cfg.n_block() {
        return Err(Error::LengthMismatch {
            what: "channel LLRs",
            expected: cfg.n_block(),
            got: llr.len(),
        });
    }
    let mut u_hat = Vec::with_capacity(cfg.n_block());
    sc_node(llr, cfg.frozen_mask(), mode, &mut u_hat)?;
    Ok(u_hat)
}

/// Decodes a subtree, appending its input-bit decisions to `u_hat` and
/// returning its partial sums.
fn sc_node<R: Real>(
    llr: &[R],
    frozen: &[bool],
    mode: CombineMode,
    u_hat: &mut Vec<u8>,
) -> Result<Vec<u8>> {
    if llr.len() == 1 {
        let bit = if frozen[0] {
            0
        } else {
            u8::from(llr[0] < R::zero())
        };
        u_hat.push(bit);
        return Ok(vec![bit]);
    }
    let half = llr.len() / 2;
    let left_llr = f_combine(llr, mode)?;
    let beta_left = sc_node(&left_llr, &frozen[..half], mode, u_hat)?;
    let right_llr = g_combine(llr, &beta_left)?;
    let beta_right = sc_node(&right_llr, &frozen[half..], mode, u_hat)?;
    beta_combine(&beta_left, &beta_right)
}
