//! Per-path LLR and partial-sum memory shared by the list decoders.
//!
//! The decode tree is walked leaf by leaf (a leaf is one bit for the
//! bit-level decoder, one node for the node-based decoders). Depth `d` holds
//! `N / 2^d` LLRs; depth 0 is the shared channel vector, so per-path memory
//! starts at depth 1. `beta[d]` stores the left child's partial sums of the
//! current node at depth `d`, which the right child's g update consumes.
//!
//! Moving from leaf `t - 1` to leaf `t` invalidates exactly the stages below
//! the deepest tree edge that flips from a left to a right child: with
//! `j = trailing_zeros(t)`, the path g-updates at depth `D - j` and
//! f-updates below it. Leaf 0 is all f-updates from the channel.

use crate::kernel::{f_pair, g_pair, CombineMode};
use crate::Real;

/// Buffer layout for one decode tree: flat offsets of the per-depth LLR and
/// partial-sum segments.
#[derive(Debug, Clone)]
pub(crate) struct TreeShape {
    n_block: usize,
    depth: usize,
    leaf_size: usize,
    num_leaves: usize,
    alpha_off: Vec<usize>,
    alpha_total: usize,
    beta_off: Vec<usize>,
    beta_total: usize,
}

/// One path's working memory: LLRs for depths `1..=D` and left-child partial
/// sums for depths `0..D`, both flat.
#[derive(Debug, Clone)]
pub(crate) struct PathMem<R> {
    alpha: Box<[R]>,
    beta: Box<[u8]>,
}

impl TreeShape {
    pub fn new(n_block: usize, leaf_size: usize) -> Self {
        debug_assert!(n_block.is_power_of_two() && leaf_size.is_power_of_two());
        debug_assert!(leaf_size <= n_block);
        let num_leaves = n_block / leaf_size;
        let depth = num_leaves.trailing_zeros() as usize;
        let mut alpha_off = vec![0usize; depth + 1];
        let mut alpha_total = 0;
        for d in 1..=depth {
            alpha_off[d] = alpha_total;
            alpha_total += n_block >> d;
        }
        let mut beta_off = vec![0usize; depth];
        let mut beta_total = 0;
        for d in 0..depth {
            beta_off[d] = beta_total;
            beta_total += n_block >> (d + 1);
        }
        Self {
            n_block,
            depth,
            leaf_size,
            num_leaves,
            alpha_off,
            alpha_total,
            beta_off,
            beta_total,
        }
    }

    pub fn num_leaves(&self) -> usize {
        self.num_leaves
    }

    pub fn new_mem<R: Real>(&self) -> PathMem<R> {
        PathMem {
            alpha: vec![R::zero(); self.alpha_total].into_boxed_slice(),
            beta: vec![0u8; self.beta_total].into_boxed_slice(),
        }
    }

    /// Recomputes the LLR stages invalidated by moving to `leaf`, so that the
    /// leaf's LLRs are valid afterwards.
    pub fn refresh<R: Real>(
        &self,
        chan: &[R],
        mem: &mut PathMem<R>,
        leaf: usize,
        mode: CombineMode,
    ) {
        debug_assert_eq!(chan.len(), self.n_block);
        debug_assert!(leaf < self.num_leaves);
        let first = if leaf == 0 {
            1
        } else {
            let j = leaf.trailing_zeros() as usize;
            let flip = self.depth - 1 - j;
            self.g_step(chan, mem, flip + 1);
            flip + 2
        };
        for d in first..=self.depth {
            self.f_step(chan, mem, d, mode);
        }
    }

    /// The current leaf's LLRs (valid after [`TreeShape::refresh`]).
    pub fn leaf_llr<'a, R: Real>(&self, chan: &'a [R], mem: &'a PathMem<R>) -> &'a [R] {
        if self.depth == 0 {
            chan
        } else {
            let off = self.alpha_off[self.depth];
            &mem.alpha[off..off + self.leaf_size]
        }
    }

    fn f_step<R: Real>(&self, chan: &[R], mem: &mut PathMem<R>, d: usize, mode: CombineMode) {
        let len = self.n_block >> d;
        let out = self.alpha_off[d];
        if d == 1 {
            for i in 0..len {
                mem.alpha[out + i] = f_pair(chan[i], chan[i + len], mode);
            }
        } else {
            let src = self.alpha_off[d - 1];
            for i in 0..len {
                let v = f_pair(mem.alpha[src + i], mem.alpha[src + len + i], mode);
                mem.alpha[out + i] = v;
            }
        }
    }

    fn g_step<R: Real>(&self, chan: &[R], mem: &mut PathMem<R>, d: usize) {
        let len = self.n_block >> d;
        let out = self.alpha_off[d];
        let beta = self.beta_off[d - 1];
        if d == 1 {
            for i in 0..len {
                mem.alpha[out + i] = g_pair(chan[i], chan[i + len], mem.beta[beta + i]);
            }
        } else {
            let src = self.alpha_off[d - 1];
            for i in 0..len {
                let v = g_pair(
                    mem.alpha[src + i],
                    mem.alpha[src + len + i],
                    mem.beta[beta + i],
                );
                mem.alpha[out + i] = v;
            }
        }
    }

    /// Records the decided bits of `leaf` and propagates partial sums upward
    /// while the completed subtree is a right child. `s0`/`s1` are scratch.
    pub fn commit_leaf(
        &self,
        mem: &mut PathMem<impl Real>,
        leaf: usize,
        bits: &[u8],
        s0: &mut Vec<u8>,
        s1: &mut Vec<u8>,
    ) {
        debug_assert_eq!(bits.len(), self.leaf_size);
        s0.clear();
        s0.extend_from_slice(bits);
        let mut d = self.depth;
        let mut t = leaf;
        while d > 0 {
            let off = self.beta_off[d - 1];
            let len = s0.len();
            if t & 1 == 0 {
                mem.beta[off..off + len].copy_from_slice(s0);
                return;
            }
            s1.clear();
            s1.extend((0..len).map(|i| mem.beta[off + i] ^ s0[i]));
            s1.extend_from_slice(&s0[..len]);
            std::mem::swap(s0, s1);
            t >>= 1;
            d -= 1;
        }
        // Root reached (last leaf): s0 now holds the re-encoded codeword,
        // which has no parent to feed.
    }
}

/// One list-decoder path: tree memory, input-bit decisions, and path metric.
#[derive(Debug, Clone)]
pub(crate) struct Path<R> {
    pub mem: PathMem<R>,
    pub u: Box<[u8]>,
    pub pm: R,
}

impl<R: Real> Path<R> {
    pub fn fresh(shape: &TreeShape, n_block: usize) -> Self {
        Self {
            mem: shape.new_mem(),
            u: vec![0u8; n_block].into_boxed_slice(),
            pm: R::zero(),
        }
    }
}
