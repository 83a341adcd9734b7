//! Node-based successive-cancellation list decoding, with optional partial
//! selection.
//!
//! The decoder walks size-`node_size` leaf nodes instead of single bits. At
//! each node every path offers candidate codewords with branch metrics (the
//! summed magnitudes of the disagreeing LLRs); the `L` best (path metric +
//! branch metric) combinations survive. Under min-sum this is exactly
//! bit-level list decoding with pruning deferred to node boundaries.
//!
//! Partial selection trims each path's offering before the survivor sort
//! using a stair profile over the paths' metric ranks. While the list is
//! still filling (fewer than `L` live paths) no trimming is applied.

use super::engine::{Path, TreeShape};
use super::node::{node_candidates, segment_nodes, LeafNode};
use super::scl::validate_list_size;
use super::{choose_output, ListOutput};
use crate::analysis::PmpAccumulator;
use crate::code::{polar_transform, CodeConfig};
use crate::error::{Error, Result};
use crate::kernel::CombineMode;
use crate::select::{select_survivors, RowCandidates, SelectionProfile};
use crate::Real;

/// How many candidates each path offers at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSelection {
    /// Every path offers its full (list-capped) candidate set.
    Full,
    /// Stair-profile partial selection over parent-metric ranks.
    Stair(SelectionProfile),
}

/// Options for [`SsclDecoder`].
#[derive(Debug, Clone, Copy)]
pub struct SsclOptions {
    pub list_size: usize,
    pub mode: CombineMode,
    pub crc_aided: bool,
    pub selection: NodeSelection,
}

impl SsclOptions {
    /// Full selection, min-sum, CRC-aided.
    pub fn full(list_size: usize) -> Self {
        Self {
            list_size,
            mode: CombineMode::MinSum,
            crc_aided: true,
            selection: NodeSelection::Full,
        }
    }

    /// Stair-profile partial selection, min-sum, CRC-aided.
    pub fn stair(list_size: usize, profile: SelectionProfile) -> Self {
        Self {
            selection: NodeSelection::Stair(profile),
            ..Self::full(list_size)
        }
    }
}

/// Reusable node-based list decoder for one code.
#[derive(Debug)]
pub struct SsclDecoder<R> {
    cfg: CodeConfig,
    opts: SsclOptions,
    shape: TreeShape,
    nodes: Vec<LeafNode>,
    paths: Vec<Path<R>>,
    old_paths: Vec<Option<Path<R>>>,
    uses: Vec<u32>,
    row_cands: Vec<Vec<(R, u16)>>,
    row_bms: Vec<Vec<R>>,
    flips: Vec<R>,
    enumerated: Vec<(R, u16, u16)>,
    bits_buf: Vec<u8>,
    u_buf: Vec<u8>,
    s0: Vec<u8>,
    s1: Vec<u8>,
}

impl<R: Real> SsclDecoder<R> {
    pub fn new(cfg: &CodeConfig, opts: SsclOptions) -> Result<Self> {
        validate_list_size(opts.list_size)?;
        if let NodeSelection::Stair(profile) = &opts.selection {
            if opts.list_size % 4 != 0 {
                return Err(Error::ListNotDivisibleBy4(opts.list_size));
            }
            if profile.max_keep() > 1 << cfg.node_size() {
                return Err(Error::ProfileTooWide {
                    keep: profile.max_keep(),
                    max: 1 << cfg.node_size(),
                    node: cfg.node_size(),
                });
            }
        }
        let l = opts.list_size;
        Ok(Self {
            cfg: cfg.clone(),
            opts,
            shape: TreeShape::new(cfg.n_block(), cfg.node_size()),
            nodes: segment_nodes(cfg),
            paths: Vec::with_capacity(l),
            old_paths: Vec::with_capacity(l),
            uses: Vec::with_capacity(l),
            row_cands: vec![Vec::new(); l],
            row_bms: vec![Vec::new(); l],
            flips: Vec::new(),
            enumerated: Vec::new(),
            bits_buf: Vec::new(),
            u_buf: Vec::new(),
            s0: Vec::new(),
            s1: Vec::new(),
        })
    }

    /// Decodes one frame.
    pub fn decode(&mut self, llr: &[R]) -> Result<ListOutput<R>> {
        self.decode_inner(llr, None)
    }

    /// Decodes one frame while tallying survivor origins into `acc` at every
    /// node step where the list is already full.
    pub fn decode_observed(
        &mut self,
        llr: &[R],
        acc: &mut PmpAccumulator,
    ) -> Result<ListOutput<R>> {
        self.decode_inner(llr, Some(acc))
    }

    fn decode_inner(
        &mut self,
        llr: &[R],
        mut observer: Option<&mut PmpAccumulator>,
    ) -> Result<ListOutput<R>> {
        let n = self.cfg.n_block();
        if llr.len() != n {
            return Err(Error::LengthMismatch {
                what: "channel LLRs",
                expected: n,
                got: llr.len(),
            });
        }
        let l = self.opts.list_size;
        let stair = match self.opts.selection {
            NodeSelection::Stair(p) => Some(p),
            NodeSelection::Full => None,
        };
        self.paths.clear();
        self.paths.push(Path::fresh(&self.shape, n));

        for t in 0..self.shape.num_leaves() {
            let node = &self.nodes[t];
            let live = self.paths.len();
            let warm = live < l;

            for (row, p) in self.paths.iter_mut().enumerate() {
                self.shape.refresh(llr, &mut p.mem, t, self.opts.mode);
                let alpha = self.shape.leaf_llr(llr, &p.mem);
                // A path contributes at most L survivors, so capping full
                // selection at L per row never changes the outcome.
                let keep = match (&stair, warm) {
                    (Some(profile), false) => profile.keep_count_for_row(row, l)?,
                    _ => l,
                };
                node_candidates(
                    node,
                    alpha,
                    keep,
                    &mut self.flips,
                    &mut self.enumerated,
                    &mut self.row_cands[row],
                )?;
                self.row_bms[row].clear();
                let bms = self.row_cands[row].iter().map(|&(bm, _)| bm);
                self.row_bms[row].extend(bms);
            }

            let survivors = {
                let rows: Vec<RowCandidates<'_, R>> = (0..live)
                    .map(|row| RowCandidates {
                        parent_pm: self.paths[row].pm,
                        bms: &self.row_bms[row],
                    })
                    .collect();
                let profile = if warm { None } else { stair.as_ref() };
                select_survivors(&rows, profile, l)?
            };

            if live == l {
                if let Some(acc) = observer.as_deref_mut() {
                    acc.record_step(node.class, survivors.iter().map(|s| (s.row, s.rank)));
                }
            }

            self.old_paths.clear();
            self.old_paths.extend(self.paths.drain(..).map(Some));
            self.uses.clear();
            self.uses.resize(self.old_paths.len(), 0);
            for s in &survivors {
                self.uses[s.row] += 1;
            }
            for s in &survivors {
                self.uses[s.row] -= 1;
                let mut p = if self.uses[s.row] == 0 {
                    self.old_paths[s.row].take().expect("single take")
                } else {
                    self.old_paths[s.row]
                        .as_ref()
                        .expect("still present")
                        .clone()
                };
                let (_, codeword) = self.row_cands[s.row][s.rank];
                self.bits_buf.clear();
                self.bits_buf
                    .extend((0..node.size).map(|i| (codeword >> i & 1) as u8));
                self.shape
                    .commit_leaf(&mut p.mem, t, &self.bits_buf, &mut self.s0, &mut self.s1);
                // The node's input bits are the transform of its codeword.
                self.u_buf.clear();
                self.u_buf.extend_from_slice(&self.bits_buf);
                polar_transform(&mut self.u_buf);
                p.u[node.start..node.start + node.size].copy_from_slice(&self.u_buf);
                p.pm = s.pm;
                self.paths.push(p);
            }
            debug_assert!(self
                .paths
                .windows(2)
                .all(|w| w[0].pm <= w[1].pm));
        }

        let pms: Vec<R> = self.paths.iter().map(|p| p.pm).collect();
        let paths_u: Vec<&[u8]> = self.paths.iter().map(|p| &*p.u).collect();
        Ok(choose_output(&self.cfg, self.opts.crc_aided, &paths_u, &pms))
    }
}

/// One-shot node-based list decode.
pub fn decode_sscl<R: Real>(
    cfg: &CodeConfig,
    llr: &[R],
    opts: SsclOptions,
) -> Result<ListOutput<R>> {
    SsclDecoder::new(cfg, opts)?.decode(llr)
}

/// One-shot partial-selection list decode (min-sum, CRC-aided).
pub fn decode_ps_scl<R: Real>(
    cfg: &CodeConfig,
    llr: &[R],
    list_size: usize,
    profile: SelectionProfile,
) -> Result<ListOutput<R>> {
    decode_sscl(cfg, llr, SsclOptions::stair(list_size, profile))
}
