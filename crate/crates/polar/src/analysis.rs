//! Decoder statistics: path-metric-probability tables and sorter complexity.
//!
//! The path-metric-probability table answers, for a running list decoder at
//! full occupancy: how often does the survivor chosen into the next step come
//! from parent-metric rank `row` with branch-metric rank `col` within that
//! parent? Concentration of that mass in the low-rank corner is what makes
//! partial selection nearly lossless, and the box probability of a keep
//! profile measures exactly the mass the profile retains.
//!
//! Sorter complexity counts compare-and-swap (CAS) elements of the bitonic
//! `2 L_in -> L_in` sorter consuming each decoder's candidate stream.

use std::io::Write;

use crate::decode::NodeClass;
use crate::error::{Error, Result};
use crate::select::SelectionProfile;

/// Per-class tallies of survivor origins, gathered while a node-based list
/// decoder runs at full occupancy (`live == L`; warm-up steps are skipped by
/// the decoder).
#[derive(Debug, Clone)]
pub struct PmpAccumulator {
    list_size: usize,
    cols: usize,
    counts: Vec<Vec<u64>>,
    steps: Vec<u64>,
}

impl PmpAccumulator {
    /// Creates an accumulator for list size `L` and `2^node_size` candidate
    /// ranks.
    pub fn new(list_size: usize, node_size: usize) -> Self {
        let cols = 1usize << node_size;
        Self {
            list_size,
            cols,
            counts: vec![vec![0u64; list_size * cols]; 4],
            steps: vec![0u64; 4],
        }
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    /// Number of branch-metric ranks tracked per row.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Records one node step: each survivor as (parent-metric rank,
    /// branch-metric rank within that parent). Exactly `L` survivors.
    pub fn record_step(
        &mut self,
        class: NodeClass,
        survivors: impl IntoIterator<Item = (usize, usize)>,
    ) {
        let c = class.index();
        let mut n = 0usize;
        for (row, rank) in survivors {
            debug_assert!(row < self.list_size, "row {row}");
            debug_assert!(rank < self.cols, "rank {rank}");
            self.counts[c][row * self.cols + rank] += 1;
            n += 1;
        }
        debug_assert_eq!(n, self.list_size, "a full step has L survivors");
        self.steps[c] += 1;
    }

    /// Node steps recorded for a class.
    pub fn steps(&self, class: NodeClass) -> u64 {
        self.steps[class.index()]
    }

    /// Adds another accumulator's tallies (same dimensions required).
    pub fn merge(&mut self, other: &PmpAccumulator) {
        assert_eq!(self.list_size, other.list_size);
        assert_eq!(self.cols, other.cols);
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (m, t) in mine.iter_mut().zip(theirs) {
                *m += *t;
            }
        }
        for (m, t) in self.steps.iter_mut().zip(&other.steps) {
            *m += *t;
        }
    }

    /// Aggregates the given classes into one normalized table.
    pub fn table(&self, classes: &[NodeClass]) -> PmpTable {
        let mut counts = vec![0u64; self.list_size * self.cols];
        let mut steps = 0u64;
        for &class in classes {
            let c = class.index();
            for (dst, src) in counts.iter_mut().zip(&self.counts[c]) {
                *dst += *src;
            }
            steps += self.steps[c];
        }
        PmpTable {
            list_size: self.list_size,
            cols: self.cols,
            counts,
            steps,
        }
    }
}

/// An aggregated survivor-origin table with its normalization.
#[derive(Debug, Clone)]
pub struct PmpTable {
    list_size: usize,
    cols: usize,
    counts: Vec<u64>,
    steps: u64,
}

impl PmpTable {
    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Node steps behind the table.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Probability that a survivor comes from (`row`, `rank`). The whole
    /// table sums to 1 (each step contributes `L` survivors).
    pub fn probability(&self, row: usize, rank: usize) -> f64 {
        if self.steps == 0 {
            return 0.0;
        }
        self.counts[row * self.cols + rank] as f64 / (self.list_size as u64 * self.steps) as f64
    }

    /// The full table, row by row.
    pub fn probabilities(&self) -> Vec<Vec<f64>> {
        (0..self.list_size)
            .map(|r| (0..self.cols).map(|c| self.probability(r, c)).collect())
            .collect()
    }

    /// Mass inside a keep profile's region: the fraction of survivors a
    /// partial selection with this profile would have retained. A profile
    /// covering the whole table gives exactly 1.
    pub fn box_probability(&self, profile: &SelectionProfile) -> Result<f64> {
        let mut hits = 0u64;
        for row in 0..self.list_size {
            let keep = profile
                .keep_count_for_row(row, self.list_size)?
                .min(self.cols);
            for rank in 0..keep {
                hits += self.counts[row * self.cols + rank];
            }
        }
        if self.steps == 0 {
            return Ok(0.0);
        }
        Ok(hits as f64 / (self.list_size as u64 * self.steps) as f64)
    }
}

/// Writes a table as CSV: header `rank_col_0..`, one row per parent rank,
/// six decimal places.
pub fn write_pmp_csv<W: Write>(w: &mut W, table: &PmpTable) -> std::io::Result<()> {
    let header: Vec<String> = (0..table.cols()).map(|c| format!("rank_col_{c}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for row in 0..table.list_size() {
        let cells: Vec<String> = (0..table.cols())
            .map(|c| format!("{:.6}", table.probability(row, c)))
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Compare-and-swap count of a bitonic sorter that reduces `num_inputs`
/// pre-sorted-pair inputs to the best half: for `L_in = num_inputs / 2`,
/// `L_in (log2 L_in + 1)(log2 L_in + 2) / 2`.
pub fn cas_count_bitonic(num_inputs: usize) -> Result<u64> {
    if num_inputs < 2 || !num_inputs.is_power_of_two() {
        return Err(Error::BadSorterInputs(num_inputs));
    }
    let half = (num_inputs / 2) as u64;
    let lg = half.trailing_zeros() as u64;
    Ok(half * (lg + 1) * (lg + 2) / 2)
}

/// Which decoder's candidate stream feeds the sorter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SorterKind {
    /// Bit-level list decoding with node-level candidate flush:
    /// `L * 2^node_size` inputs.
    Scl,
    /// Partial selection: the stair profile's total keep count.
    PsScl,
    /// Node-based decoding with per-path pruning to the list size:
    /// `L * min(L, node_size)` inputs.
    FastSscl,
}

/// Candidates entering the survivor sorter per node step.
pub fn sorter_inputs(
    kind: SorterKind,
    node_size: usize,
    list_size: usize,
    profile: Option<&SelectionProfile>,
) -> Result<usize> {
    match kind {
        SorterKind::Scl => Ok(list_size << node_size),
        SorterKind::FastSscl => Ok(list_size * list_size.min(node_size)),
        SorterKind::PsScl => profile
            .ok_or(Error::MissingProfile)?
            .total_kept(list_size),
    }
}

/// CAS count of the sorter for a decoder configuration, rounding the input
/// count up to the next power of two when the stream is not one already.
pub fn cas_for_decoder(
    kind: SorterKind,
    node_size: usize,
    list_size: usize,
    profile: Option<&SelectionProfile>,
) -> Result<u64> {
    let inputs = sorter_inputs(kind, node_size, list_size, profile)?;
    cas_count_bitonic(inputs.next_power_of_two().max(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitonic_counts() {
        assert_eq!(cas_count_bitonic(2).unwrap(), 1);
        assert_eq!(cas_count_bitonic(8).unwrap(), 24);
        assert_eq!(cas_count_bitonic(64).unwrap(), 672);
        assert!(cas_count_bitonic(0).is_err());
        assert!(cas_count_bitonic(6).is_err());
        assert!(cas_count_bitonic(3).is_err());
    }

    #[test]
    fn sorter_complexity_table() {
        let p421 = SelectionProfile::new(4, 2, 1).unwrap();
        let p842 = SelectionProfile::new(8, 4, 2).unwrap();
        let rows: [(usize, [u64; 6]); 4] = [
            (4, [24, 80, 672, 28160, 80, 80]),
            (8, [80, 240, 1792, 67584, 240, 672]),
            (16, [240, 672, 4608, 159744, 672, 1792]),
            (32, [672, 1792, 11520, 372736, 1792, 4608]),
        ];
        for (l, expect) in rows {
            let got = [
                cas_for_decoder(SorterKind::PsScl, 4, l, Some(&p421)).unwrap(),
                cas_for_decoder(SorterKind::PsScl, 8, l, Some(&p842)).unwrap(),
                cas_for_decoder(SorterKind::Scl, 4, l, None).unwrap(),
                cas_for_decoder(SorterKind::Scl, 8, l, None).unwrap(),
                cas_for_decoder(SorterKind::FastSscl, 4, l, None).unwrap(),
                cas_for_decoder(SorterKind::FastSscl, 8, l, None).unwrap(),
            ];
            assert_eq!(got, expect, "L = {l}");
        }
    }

    #[test]
    fn partial_selection_never_costs_more() {
        let p421 = SelectionProfile::new(4, 2, 1).unwrap();
        let p842 = SelectionProfile::new(8, 4, 2).unwrap();
        for l in [4usize, 8, 16, 32] {
            for (nv, p) in [(4usize, &p421), (8, &p842)] {
                let ps = cas_for_decoder(SorterKind::PsScl, nv, l, Some(p)).unwrap();
                let fast = cas_for_decoder(SorterKind::FastSscl, nv, l, None).unwrap();
                let full = cas_for_decoder(SorterKind::Scl, nv, l, None).unwrap();
                assert!(ps <= fast && fast <= full, "nv={nv} l={l}");
            }
        }
    }

    #[test]
    fn ps_sizing_requires_profile() {
        assert!(matches!(
            sorter_inputs(SorterKind::PsScl, 4, 8, None),
            Err(Error::MissingProfile)
        ));
    }

    #[test]
    fn accumulator_counts_and_boxes() {
        let mut acc = PmpAccumulator::new(4, 4);
        // Two rate-1 steps: survivors concentrated at low ranks.
        acc.record_step(NodeClass::Rate1, vec![(0, 0), (0, 1), (1, 0), (2, 0)]);
        acc.record_step(NodeClass::Rate1, vec![(0, 0), (1, 0), (1, 1), (3, 0)]);
        acc.record_step(NodeClass::Rate0, vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(acc.steps(NodeClass::Rate1), 2);
        assert_eq!(acc.steps(NodeClass::Rate0), 1);

        let t = acc.table(&[NodeClass::Rate1]);
        assert_eq!(t.steps(), 2);
        let sum: f64 = t.probabilities().iter().flatten().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!((t.probability(0, 0) - 0.25).abs() < 1e-12);

        // Full box is exactly 1; the (1,1,1) stair keeps 6 of 8 survivors.
        let full = SelectionProfile::rectangle(16).unwrap();
        assert_eq!(t.box_probability(&full).unwrap(), 1.0);
        let narrow = SelectionProfile::rectangle(1).unwrap();
        assert!((t.box_probability(&narrow).unwrap() - 0.75).abs() < 1e-12);

        // Wider profiles never lose mass.
        let p421 = SelectionProfile::new(4, 2, 1).unwrap();
        let p842 = SelectionProfile::new(8, 4, 2).unwrap();
        let b1 = t.box_probability(&p421).unwrap();
        let b2 = t.box_probability(&p842).unwrap();
        assert!(b1 <= b2);

        // Merging doubles every count.
        let mut merged = acc.clone();
        merged.merge(&acc);
        assert_eq!(merged.steps(NodeClass::Rate1), 4);
        let tm = merged.table(&[NodeClass::Rate1, NodeClass::Rate0]);
        let sum: f64 = tm.probabilities().iter().flatten().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_format_is_stable() {
        let mut acc = PmpAccumulator::new(2, 4);
        // Build a 2-row table by hand (list size 2 is below the supported
        // decoder sizes but fine for the accumulator itself).
        acc.record_step(NodeClass::Generic, vec![(0, 0), (1, 2)]);
        let t = acc.table(&[NodeClass::Generic]);
        let mut buf = Vec::new();
        write_pmp_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("rank_col_0,rank_col_1,"));
        assert_eq!(header.split(',').count(), 16);
        assert_eq!(lines.next().unwrap().split(',').next().unwrap(), "0.500000");
    }
}
