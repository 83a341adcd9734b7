//! Candidate selection for partial-selection list decoding.
//!
//! A size-`N_v` node offers each decoder path a set of candidate codewords,
//! each scored by a branch metric: the sum of `|alpha_i|` over positions
//! where the candidate disagrees with the hard decisions. Partial selection
//! keeps only the best few candidates per path before the survivor sort, with
//! the per-path keep count shaped like a stair over the paths' metric ranks:
//! strong paths keep more candidates, weak paths fewer.
//!
//! For size-4 nodes the smallest branch metrics have closed forms in the
//! sorted magnitudes (no enumeration); for larger nodes and other keep counts
//! a best-first search lists the smallest subset sums directly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::Real;

/// Stair-shaped keep profile `(x, y, z)`: with paths ranked by ascending
/// metric, rows `0..L/4` keep `x` candidates, rows `L/4..L/2` keep `y`, and
/// rows `L/2..L` keep `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionProfile {
    x: usize,
    y: usize,
    z: usize,
}

impl SelectionProfile {
    /// Creates a profile; requires `x >= y >= z >= 1`.
    pub fn new(x: usize, y: usize, z: usize) -> Result<Self> {
        if x >= y && y >= z && z >= 1 {
            Ok(Self { x, y, z })
        } else {
            Err(Error::BadProfile { x, y, z })
        }
    }

    /// A flat profile keeping `w` candidates in every row.
    pub fn rectangle(w: usize) -> Result<Self> {
        Self::new(w, w, w)
    }

    /// Keep count for the top band of rows.
    pub fn x(&self) -> usize {
        self.x
    }

    /// Keep count for the middle band of rows.
    pub fn y(&self) -> usize {
        self.y
    }

    /// Keep count for the bottom band of rows.
    pub fn z(&self) -> usize {
        self.z
    }

    /// Largest per-row keep count.
    pub fn max_keep(&self) -> usize {
        self.x
    }

    /// Candidates kept by the row with metric rank `row` out of `list_size`.
    ///
    /// `list_size` must be divisible by 4 so the bands are well defined.
    pub fn keep_count_for_row(&self, row: usize, list_size: usize) -> Result<usize> {
        if list_size == 0 || list_size % 4 != 0 {
            return Err(Error::ListNotDivisibleBy4(list_size));
        }
        assert!(row < list_size, "row {row} out of range for list {list_size}");
        Ok(if row < list_size / 4 {
            self.x
        } else if row < list_size / 2 {
            self.y
        } else {
            self.z
        })
    }

    /// Total candidates entering the survivor sort:
    /// `(L/4) x + (L/4) y + (L/2) z`.
    pub fn total_kept(&self, list_size: usize) -> Result<usize> {
        if list_size == 0 || list_size % 4 != 0 {
            return Err(Error::ListNotDivisibleBy4(list_size));
        }
        Ok(list_size / 4 * (self.x + self.y) + list_size / 2 * self.z)
    }
}

/// Node input magnitudes sorted ascending, with the permutation back to
/// original positions, the hard-decision mask, and its parity.
///
/// Hard decision: bit `i` is 1 iff `alpha[i] < 0` (zero maps to bit 0).
#[derive(Debug, Clone)]
pub struct SortedMagnitudes<R> {
    values: Vec<R>,
    permutation: Vec<usize>,
    hard_mask: u16,
    syndrome: u8,
}

impl<R: Real> SortedMagnitudes<R> {
    /// Sorts `|alpha|` ascending; ties keep ascending original position.
    /// Supports up to 16 positions.
    pub fn new(alpha: &[R]) -> Self {
        assert!(alpha.len() <= 16, "node too large for mask arithmetic");
        let mags: Vec<R> = alpha.iter().map(|a| a.abs()).collect();
        let mut permutation: Vec<usize> = (0..alpha.len()).collect();
        permutation.sort_by(|&i, &j| {
            mags[i]
                .partial_cmp(&mags[j])
                .expect("LLRs must be finite")
                .then(i.cmp(&j))
        });
        let values = permutation.iter().map(|&i| mags[i]).collect();
        let mut hard_mask = 0u16;
        for (i, a) in alpha.iter().enumerate() {
            if *a < R::zero() {
                hard_mask |= 1 << i;
            }
        }
        let syndrome = (hard_mask.count_ones() & 1) as u8;
        Self {
            values,
            permutation,
            hard_mask,
            syndrome,
        }
    }

    /// Number of positions.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True for an empty node (never produced by the decoders).
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Magnitudes in ascending order.
    pub fn values(&self) -> &[R] {
        &self.values
    }

    /// `permutation[rank]` is the original position of the rank-th smallest
    /// magnitude.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Hard-decision mask over original positions.
    pub fn hard_mask(&self) -> u16 {
        self.hard_mask
    }

    /// Parity of the hard decisions (0 = even).
    pub fn syndrome(&self) -> u8 {
        self.syndrome
    }

    /// Maps a flip set over magnitude ranks to original positions.
    pub fn flip_positions(&self, rank_mask: u16) -> u16 {
        let mut out = 0u16;
        let mut m = rank_mask;
        while m != 0 {
            let rank = m.trailing_zeros() as usize;
            out |= 1 << self.permutation[rank];
            m &= m - 1;
        }
        out
    }

    /// The candidate codeword reached by flipping the given magnitude ranks
    /// in the hard decisions.
    pub fn codeword(&self, rank_mask: u16) -> u16 {
        self.hard_mask ^ self.flip_positions(rank_mask)
    }

    /// Branch metric of a flip set: the sum of the flipped magnitudes.
    pub fn flip_sum(&self, rank_mask: u16) -> R {
        let mut sum = R::zero();
        let mut m = rank_mask;
        while m != 0 {
            sum = sum + self.values[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        sum
    }
}

/// A candidate codeword with its branch metric.
pub type Candidate<R> = (R, u16);

fn min2<R: Real>(first: (R, u16), second: (R, u16)) -> (R, u16) {
    // First argument wins ties, matching the listing order of the closed
    // forms.
    if second.0 < first.0 {
        second
    } else {
        first
    }
}

/// The `k` smallest branch metrics of a size-4 rate-1 node (all 16 codewords
/// allowed), in closed form over the sorted magnitudes. `k` must be 1, 2, 4,
/// or 8. Returns `(branch metric, codeword mask)` ascending in metric.
pub fn smallest_bms_rate1<R: Real>(
    sm: &SortedMagnitudes<R>,
    k: usize,
) -> Result<Vec<Candidate<R>>> {
    if sm.len() != 4 {
        return Err(Error::LengthMismatch {
            what: "rate-1 closed form (size-4 nodes only)",
            expected: 4,
            got: sm.len(),
        });
    }
    let a = sm.values();
    let z = R::zero();
    let flips: Vec<(R, u16)> = match k {
        1 => vec![(z, 0b0000)],
        2 => vec![(z, 0b0000), (a[0], 0b0001)],
        4 => vec![
            (z, 0b0000),
            (a[0], 0b0001),
            (a[1], 0b0010),
            min2((a[0] + a[1], 0b0011), (a[2], 0b0100)),
        ],
        8 => {
            let mut out = vec![
                (z, 0b0000),
                (a[0], 0b0001),
                (a[1], 0b0010),
                (a[0] + a[1], 0b0011),
                (a[2], 0b0100),
                (a[0] + a[2], 0b0101),
            ];
            // Seventh and eighth smallest: the two best of these four, which
            // cover every remaining contender.
            let mut tail = [
                (a[3], 0b1000),
                (a[0] + a[3], 0b1001),
                (a[1] + a[2], 0b0110),
                (a[0] + a[1] + a[2], 0b0111),
            ];
            tail.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite metrics"));
            out.extend_from_slice(&tail[..2]);
            out
        }
        _ => return Err(Error::BadClosedFormK(k)),
    };
    Ok(finish_candidates(sm, flips))
}

/// The `k` smallest branch metrics of a size-4 single-parity-check node
/// (even-parity codewords), in closed form. `k` must be 1, 2, or 4.
///
/// The usable flip sets depend on the hard-decision parity: an even syndrome
/// needs even-size flips, an odd syndrome odd-size flips.
pub fn smallest_bms_spc<R: Real>(sm: &SortedMagnitudes<R>, k: usize) -> Result<Vec<Candidate<R>>> {
    if sm.len() != 4 {
        return Err(Error::LengthMismatch {
            what: "spc closed form (size-4 nodes only)",
            expected: 4,
            got: sm.len(),
        });
    }
    let a = sm.values();
    let z = R::zero();
    let flips: Vec<(R, u16)> = match (sm.syndrome(), k) {
        (0, 1) => vec![(z, 0b0000)],
        (0, 2) => vec![(z, 0b0000), (a[0] + a[1], 0b0011)],
        (0, 4) => vec![
            (z, 0b0000),
            (a[0] + a[1], 0b0011),
            (a[0] + a[2], 0b0101),
            min2((a[0] + a[3], 0b1001), (a[1] + a[2], 0b0110)),
        ],
        (1, 1) => vec![(a[0], 0b0001)],
        (1, 2) => vec![(a[0], 0b0001), (a[1], 0b0010)],
        (1, 4) => vec![
            (a[0], 0b0001),
            (a[1], 0b0010),
            (a[2], 0b0100),
            min2((a[3], 0b1000), (a[0] + a[1] + a[2], 0b0111)),
        ],
        _ => return Err(Error::BadClosedFormK(k)),
    };
    Ok(finish_candidates(sm, flips))
}

/// Maps rank-space flip sets to codewords and re-sorts ascending by metric
/// (the closed-form listing order is not always ascending).
fn finish_candidates<R: Real>(
    sm: &SortedMagnitudes<R>,
    mut flips: Vec<(R, u16)>,
) -> Vec<Candidate<R>> {
    flips.sort_by(|p, q| p.0.partial_cmp(&q.0).expect("finite metrics"));
    flips
        .into_iter()
        .map(|(bm, rank_mask)| (bm, sm.codeword(rank_mask)))
        .collect()
}

/// Best-first enumeration state: a subset of magnitude ranks with its sum and
/// highest rank. Ordered by (sum, mask) so equal sums pop deterministically.
struct SubsetNode<R> {
    sum: R,
    mask: u16,
    max: i32,
}

impl<R: Real> PartialEq for SubsetNode<R> {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
    }
}

impl<R: Real> Eq for SubsetNode<R> {}

impl<R: Real> Ord for SubsetNode<R> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest sum.
        other
            .sum
            .partial_cmp(&self.sum)
            .expect("finite sums")
            .then(other.mask.cmp(&self.mask))
    }
}

impl<R: Real> PartialOrd for SubsetNode<R> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` smallest subset sums of non-negative ascending magnitudes,
/// optionally restricted to subsets of a fixed size parity.
///
/// Returns `(sum, rank mask)` pairs in ascending order of sum (ties by mask).
/// Runs best-first over a tree in which every subset is generated exactly
/// once from a subset with a no-larger sum: the children of a set with
/// maximum rank `e` either append rank `e + 1` or shift `e` up to `e + 1`, so
/// the heap pops sums in globally ascending order without materializing all
/// `2^m` subsets.
pub fn k_smallest_flip_sets<R: Real>(
    sorted_mags: &[R],
    k: usize,
    parity: Option<u8>,
) -> Result<Vec<(R, u16)>> {
    let m = sorted_mags.len();
    assert!(m <= 16, "supports up to 16 magnitudes");
    debug_assert!(
        sorted_mags.windows(2).all(|w| w[0] <= w[1]),
        "magnitudes must be sorted ascending"
    );
    let available = match parity {
        None => 1usize << m,
        Some(p) => {
            if m == 0 {
                usize::from(p == 0)
            } else {
                1usize << (m - 1)
            }
        }
    };
    if k > available {
        return Err(Error::TooManySums { k, available });
    }

    let mut out = Vec::with_capacity(k);
    let mut heap = BinaryHeap::new();
    heap.push(SubsetNode {
        sum: R::zero(),
        mask: 0u16,
        max: -1,
    });
    while out.len() < k {
        let node = match heap.pop() {
            Some(n) => n,
            None => break,
        };
        let keep = match parity {
            None => true,
            Some(p) => node.mask.count_ones() & 1 == u32::from(p),
        };
        if keep {
            out.push((node.sum, node.mask));
        }
        let next = (node.max + 1) as usize;
        if next < m {
            heap.push(SubsetNode {
                sum: node.sum + sorted_mags[next],
                mask: node.mask | 1 << next,
                max: next as i32,
            });
            if node.max >= 0 {
                heap.push(SubsetNode {
                    sum: node.sum - sorted_mags[node.max as usize] + sorted_mags[next],
                    mask: (node.mask & !(1 << node.max)) | 1 << next,
                    max: next as i32,
                });
            }
        }
    }
    debug_assert_eq!(out.len(), k);
    Ok(out)
}

/// The `k` smallest subset sums of non-negative ascending magnitudes.
pub fn k_smallest_subset_sums<R: Real>(sorted_mags: &[R], k: usize) -> Result<Vec<R>> {
    Ok(k_smallest_flip_sets(sorted_mags, k, None)?
        .into_iter()
        .map(|(sum, _)| sum)
        .collect())
}

/// One path's offering to the survivor sort: its metric and its candidates'
/// branch metrics in ascending order, already truncated to its keep count.
#[derive(Debug, Clone, Copy)]
pub struct RowCandidates<'a, R> {
    pub parent_pm: R,
    pub bms: &'a [R],
}

/// A selected survivor: the row it came from, the candidate's rank within
/// that row, and the resulting path metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Survivor<R> {
    pub row: usize,
    pub rank: usize,
    pub pm: R,
}

/// Keeps the `list_size` smallest `parent_pm + bm` combinations over all
/// rows; if fewer candidates than `list_size` are offered, keeps all.
///
/// Ties resolve by lower row, then lower candidate rank, and the result is
/// sorted in that selection order, so the output rows are ranked by ascending
/// new path metric. When a `profile` is given, each row must offer at most
/// its keep count for the profile.
pub fn select_survivors<R: Real>(
    rows: &[RowCandidates<'_, R>],
    profile: Option<&SelectionProfile>,
    list_size: usize,
) -> Result<Vec<Survivor<R>>> {
    if let Some(p) = profile {
        for (row, rc) in rows.iter().enumerate() {
            let keep = p.keep_count_for_row(row, list_size)?;
            if rc.bms.len() > keep {
                return Err(Error::ProfileTooWide {
                    keep: rc.bms.len(),
                    max: keep,
                    node: rows.len(),
                });
            }
        }
    }
    let mut all: Vec<Survivor<R>> = Vec::with_capacity(rows.iter().map(|r| r.bms.len()).sum());
    for (row, rc) in rows.iter().enumerate() {
        debug_assert!(rc.bms.windows(2).all(|w| w[0] <= w[1]));
        for (rank, &bm) in rc.bms.iter().enumerate() {
            all.push(Survivor {
                row,
                rank,
                pm: rc.parent_pm + bm,
            });
        }
    }
    all.sort_by(|p, q| {
        p.pm.partial_cmp(&q.pm)
            .expect("finite metrics")
            .then(p.row.cmp(&q.row))
            .then(p.rank.cmp(&q.rank))
    });
    all.truncate(list_size);
    Ok(all)
}
