//! Bit-level successive-cancellation list decoding.
//!
//! Every path extends by both values of each information bit; the list is
//! pruned back to `L` paths either at every information bit (the standard
//! schedule) or only at node boundaries (which makes this decoder an exact
//! reference for the node-based decoder: between boundaries the fork set
//! matches the node's candidate set, and under min-sum the accumulated bit
//! penalties equal the node branch metrics).

use super::engine::{Path, TreeShape};
use super::{choose_output, penalty, ListOutput};
use crate::code::CodeConfig;
use crate::error::{Error, Result};
use crate::kernel::CombineMode;
use crate::Real;

/// When the path list is pruned back to `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruneSchedule {
    /// After every information bit (standard list decoding).
    #[default]
    EveryInfoBit,
    /// Only after each `node_size` block of bits; the list grows freely in
    /// between. Exponential in the per-node information count, intended for
    /// cross-validation at small sizes.
    NodeBoundary,
}

/// Options for [`SclDecoder`].
#[derive(Debug, Clone, Copy)]
pub struct SclOptions {
    pub list_size: usize,
    pub mode: CombineMode,
    pub crc_aided: bool,
    pub prune: PruneSchedule,
}

impl SclOptions {
    /// Min-sum, CRC-aided, standard pruning.
    pub fn new(list_size: usize) -> Self {
        Self {
            list_size,
            mode: CombineMode::MinSum,
            crc_aided: true,
            prune: PruneSchedule::EveryInfoBit,
        }
    }
}

/// Checks the supported list sizes.
pub fn validate_list_size(list_size: usize) -> Result<()> {
    if matches!(list_size, 1 | 2 | 4 | 8 | 16 | 32) {
        Ok(())
    } else {
        Err(Error::BadListSize(list_size))
    }
}

/// Reusable bit-level list decoder for one code.
#[derive(Debug)]
pub struct SclDecoder<R> {
    cfg: CodeConfig,
    opts: SclOptions,
    shape: TreeShape,
    paths: Vec<Path<R>>,
    old_paths: Vec<Option<Path<R>>>,
    uses: Vec<u32>,
    cands: Vec<(R, usize, u8)>,
    s0: Vec<u8>,
    s1: Vec<u8>,
}

impl<R: Real> SclDecoder<R> {
    pub fn new(cfg: &CodeConfig, opts: SclOptions) -> Result<Self> {
        validate_list_size(opts.list_size)?;
        Ok(Self {
            cfg: cfg.clone(),
            opts,
            shape: TreeShape::new(cfg.n_block(), 1),
            paths: Vec::new(),
            old_paths: Vec::new(),
            uses: Vec::new(),
            cands: Vec::new(),
            s0: Vec::new(),
            s1: Vec::new(),
        })
    }

    pub fn decode(&mut self, llr: &[R]) -> Result<ListOutput<R>> {
        let n = self.cfg.n_block();
        if llr.len() != n {
            return Err(Error::LengthMismatch {
                what: "channel LLRs",
                expected: n,
                got: llr.len(),
            });
        }
        self.paths.clear();
        self.paths.push(Path::fresh(&self.shape, n));

        for bit in 0..n {
            for p in self.paths.iter_mut() {
                self.shape.refresh(llr, &mut p.mem, bit, self.opts.mode);
            }
            if self.cfg.is_frozen(bit) {
                for p in self.paths.iter_mut() {
                    let a = self.shape.leaf_llr(llr, &p.mem)[0];
                    p.pm = p.pm + penalty(a, 0);
                    p.u[bit] = 0;
                    self.shape
                        .commit_leaf(&mut p.mem, bit, &[0], &mut self.s0, &mut self.s1);
                }
            } else {
                self.cands.clear();
                for (idx, p) in self.paths.iter().enumerate() {
                    let a = self.shape.leaf_llr(llr, &p.mem)[0];
                    self.cands.push((p.pm + penalty(a, 0), idx, 0));
                    self.cands.push((p.pm + penalty(a, 1), idx, 1));
                }
                if self.opts.prune == PruneSchedule::EveryInfoBit {
                    // Ties resolve by lower parent index, then bit value 0.
                    self.cands.sort_by(|x, y| {
                        x.0.partial_cmp(&y.0)
                            .expect("finite metrics")
                            .then(x.1.cmp(&y.1))
                            .then(x.2.cmp(&y.2))
                    });
                    self.cands.truncate(self.opts.list_size);
                }
                self.fork(bit);
            }
            if self.opts.prune == PruneSchedule::NodeBoundary
                && (bit + 1) % self.cfg.node_size() == 0
            {
                self.prune_to_list();
            }
        }

        self.paths.sort_by(|p, q| {
            p.pm.partial_cmp(&q.pm).expect("finite metrics")
        });
        let pms: Vec<R> = self.paths.iter().map(|p| p.pm).collect();
        let paths_u: Vec<&[u8]> = self.paths.iter().map(|p| &*p.u).collect();
        Ok(choose_output(&self.cfg, self.opts.crc_aided, &paths_u, &pms))
    }

    /// Replaces the path list with the selected `(pm, parent, bit)` children;
    /// a parent's last child takes its memory, earlier children clone it.
    fn fork(&mut self, bit: usize) {
        self.old_paths.clear();
        self.old_paths.extend(self.paths.drain(..).map(Some));
        self.uses.clear();
        self.uses.resize(self.old_paths.len(), 0);
        for &(_, parent, _) in &self.cands {
            self.uses[parent] += 1;
        }
        for &(pm, parent, b) in &self.cands {
            self.uses[parent] -= 1;
            let mut p = if self.uses[parent] == 0 {
                self.old_paths[parent].take().expect("single take")
            } else {
                self.old_paths[parent].as_ref().expect("still present").clone()
            };
            p.pm = pm;
            p.u[bit] = b;
            self.shape
                .commit_leaf(&mut p.mem, bit, &[b], &mut self.s0, &mut self.s1);
            self.paths.push(p);
        }
    }

    /// Keeps the `L` lowest-metric paths (ties by position), in metric order.
    fn prune_to_list(&mut self) {
        if self.paths.len() <= self.opts.list_size {
            self.paths.sort_by(|p, q| {
                p.pm.partial_cmp(&q.pm).expect("finite metrics")
            });
            return;
        }
        let mut order: Vec<usize> = (0..self.paths.len()).collect();
        order.sort_by(|&i, &j| {
            self.paths[i]
                .pm
                .partial_cmp(&self.paths[j].pm)
                .expect("finite metrics")
                .then(i.cmp(&j))
        });
        order.truncate(self.opts.list_size);
        self.old_paths.clear();
        self.old_paths.extend(self.paths.drain(..).map(Some));
        for &i in &order {
            self.paths
                .push(self.old_paths[i].take().expect("selected once"));
        }
    }
}

/// One-shot bit-level list decode.
pub fn decode_scl<R: Real>(
    cfg: &CodeConfig,
    llr: &[R],
    opts: SclOptions,
) -> Result<ListOutput<R>> {
    SclDecoder::new(cfg, opts)?.decode(llr)
}
