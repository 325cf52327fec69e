//! Upgrading alphabet reduction.
//!
//! A window of `M` consecutive pairs is reduced to its two boundary pairs:
//! interior symbols are folded together by alternating sums and moves onto
//! the next likelihood ratio, and the folded symbol is finally split onto the
//! two boundaries. `M = 2` moves the lower symbol onto the upper one and
//! `M = 3` is the plain three-symbol split.

mod window;
mod witness;

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::channel::{lr_equal, BmsChannel, SymbolPair};
use crate::list::{Candidate, PairList, NIL};
use crate::{Error, MergeEvent, MergeObserver, NoObserver};

pub use window::{move_onto, schedule_for, split_onto, ScheduleStep, UpgradeAdjustment, NEGATIVE_CLAMP};
pub use witness::{verify_upgrade_witness, verify_window_witness, witness_matrix, WitnessMatrix, WitnessReport};

use window::{merge_window, WindowMerge};

/// Default ratio threshold for the preliminary two-symbol merges.
pub const DEFAULT_EPSILON: f64 = 1e-3;

/// How windows are ranked when reducing a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Merge the window whose capacity gain is smallest.
    #[default]
    MinGain,
    /// Merge the window whose resulting capacity is largest.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpgradeParams {
    /// Output alphabet bound in symbols; at most `mu / 2` pairs remain.
    pub mu: usize,
    /// Window size `M`.
    pub merge_order: usize,
    /// Neighbours whose likelihood ratios differ by a factor below `1 + epsilon`
    /// are merged first with the two-symbol move.
    pub epsilon: f64,
    pub objective: Objective,
}

impl UpgradeParams {
    pub fn new(mu: usize, merge_order: usize) -> Self {
        UpgradeParams { mu, merge_order, epsilon: DEFAULT_EPSILON, objective: Objective::MinGain }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.mu < 2 {
            return Err(Error::InvalidAlphabetBound(self.mu));
        }
        if self.merge_order < 3 {
            return Err(Error::InvalidMergeOrder(self.merge_order));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter("epsilon"));
        }
        Ok(())
    }
}

/// One executed upgrading merge.
#[derive(Debug, Clone, PartialEq)]
pub struct UpgradeMergeRecord {
    /// Position of the first window pair in the channel before the merge.
    pub window_start: usize,
    pub window_len: usize,
    /// Adjustment of the lower boundary; `None` for two-pair windows, where
    /// the lower pair is removed.
    pub left: Option<UpgradeAdjustment>,
    /// Adjustment of the upper boundary.
    pub right: UpgradeAdjustment,
    pub schedule: Vec<ScheduleStep>,
}

impl UpgradeMergeRecord {
    fn from_merge(window_start: usize, window_len: usize, m: WindowMerge) -> Self {
        UpgradeMergeRecord { window_start, window_len, left: m.left, right: m.right, schedule: m.schedule }
    }

    /// Total mass moved onto the boundaries.
    pub fn moved_mass(&self) -> f64 {
        self.left.map_or(0.0, |l| l.mass()) + self.right.mass()
    }
}

fn apply_window(ch: &BmsChannel, i: usize, len: usize) -> Result<(BmsChannel, UpgradeMergeRecord), Error> {
    let n = ch.pair_count();
    if len < 2 {
        return Err(Error::InvalidMergeOrder(len));
    }
    if i + len > n {
        return Err(Error::IndexOutOfRange { index: i + len - 1, len: n });
    }
    let pairs = ch.pairs();
    let win = &pairs[i..i + len];
    let merge = merge_window(win)?;
    let (surv, k) = merge.survivors(win);
    let mut out = Vec::with_capacity(n + k - len);
    out.extend_from_slice(&pairs[..i]);
    out.extend_from_slice(&surv[..k]);
    out.extend_from_slice(&pairs[i + len..]);
    Ok((BmsChannel::from_sorted_unchecked(out), UpgradeMergeRecord::from_merge(i, len, merge)))
}

/// Moves pair `i` onto the likelihood ratio of pair `i + 1`.
pub fn merge_upgrade_2(ch: &BmsChannel, i: usize) -> Result<BmsChannel, Error> {
    apply_window(ch, i, 2).map(|r| r.0)
}

/// Splits pair `i + 1` onto pairs `i` and `i + 2`.
pub fn merge_upgrade_3(ch: &BmsChannel, i: usize) -> Result<BmsChannel, Error> {
    apply_window(ch, i, 3).map(|r| r.0)
}

/// Merges the `len` pairs starting at `i` onto the two boundary pairs.
pub fn merge_upgrade_window(
    ch: &BmsChannel,
    i: usize,
    len: usize,
) -> Result<(BmsChannel, UpgradeMergeRecord), Error> {
    apply_window(ch, i, len)
}

fn ratio_close(lo: f64, hi: f64, epsilon: f64) -> bool {
    lr_equal(lo, hi) || (hi.is_finite() && hi < lo * (1.0 + epsilon))
}

/// Reduces the channel to at most `params.mu` output symbols by upgrading merges.
pub fn upgrading_merge(ch: &BmsChannel, params: &UpgradeParams) -> Result<BmsChannel, Error> {
    upgrading_merge_observed(ch, params, &mut NoObserver)
}

pub fn upgrading_merge_observed(
    ch: &BmsChannel,
    params: &UpgradeParams,
    observer: &mut dyn MergeObserver,
) -> Result<BmsChannel, Error> {
    params.validate()?;
    let target = params.mu / 2;
    if ch.pair_count() <= target {
        return Ok(ch.clone());
    }

    let mut count = ch.pair_count();
    let mut kept: Vec<SymbolPair> = Vec::with_capacity(count);
    for p in ch.pairs() {
        let at = kept.len().wrapping_sub(1);
        let Some(last) = kept.last_mut() else {
            kept.push(*p);
            continue;
        };
        if count > target && ratio_close(last.lr(), p.lr(), params.epsilon) {
            let before = [*last, *p];
            let merge = merge_window(&before)?;
            let (surv, _) = merge.survivors(&before);
            let record = UpgradeMergeRecord::from_merge(at, 2, merge);
            *last = surv[0];
            count -= 1;
            observer.on_merge(&MergeEvent::Upgrade { record: &record, before: &before, after: &surv[..1] });
        } else {
            kept.push(*p);
        }
    }
    if kept.len() <= target {
        return Ok(BmsChannel::from_sorted_unchecked(kept));
    }

    let mut list = PairList::new(kept);
    let mut heap: BinaryHeap<Candidate> = BinaryHeap::new();
    let mut ids = Vec::with_capacity(params.merge_order);
    let mut window = Vec::with_capacity(params.merge_order);
    let mut width = 0;

    let key_of = |list: &PairList, ids: &mut Vec<usize>, window: &mut Vec<SymbolPair>, start: usize, width: usize| {
        if !list.window(start, width, ids) {
            return Ok(None);
        }
        window.clear();
        window.extend(ids.iter().map(|&id| list.pairs[id]));
        let merge = merge_window(window)?;
        let gain = merge.gain(window);
        let key = match params.objective {
            Objective::MinGain => gain,
            Objective::PaperLiteral => -gain,
        };
        Ok::<_, Error>(Some((key, merge)))
    };

    while list.len() > target {
        let w = params.merge_order.min(list.len() - target + 2).min(list.len());
        if w != width {
            width = w;
            heap.clear();
            let mut id = list.head();
            while id != NIL {
                if let Some((key, _)) = key_of(&list, &mut ids, &mut window, id, width)? {
                    heap.push(Candidate { key, id, gen: list.gen[id] });
                }
                id = list.next(id);
            }
        }
        let Some(c) = heap.pop() else { break };
        if !list.is_alive(c.id) || list.gen[c.id] != c.gen {
            continue;
        }
        let Some((_, merge)) = key_of(&list, &mut ids, &mut window, c.id, width)? else { continue };

        let start = list.position(c.id);
        let (surv, k) = merge.survivors(&window);
        let record = UpgradeMergeRecord::from_merge(start, width, merge);
        let last = ids[width - 1];
        if k == 2 {
            list.pairs[c.id] = surv[0];
            list.pairs[last] = surv[1];
            for &id in &ids[1..width - 1] {
                list.remove(id);
            }
        } else {
            list.pairs[last] = surv[0];
            list.remove(c.id);
        }
        observer.on_merge(&MergeEvent::Upgrade { record: &record, before: &window, after: &surv[..k] });

        // every window touching a survivor changed
        let first_survivor = if k == 2 { c.id } else { last };
        let mut touched = Vec::with_capacity(width + 1);
        let mut id = first_survivor;
        for _ in 0..width {
            if id == NIL {
                break;
            }
            touched.push(id);
            id = list.prev(id);
        }
        if k == 2 {
            touched.push(last);
        }
        for id in touched {
            list.bump(id);
            if list.len() - target + 2 >= width {
                if let Some((key, _)) = key_of(&list, &mut ids, &mut window, id, width)? {
                    heap.push(Candidate { key, id, gen: list.gen[id] });
                }
            }
        }
    }
    Ok(BmsChannel::from_sorted_unchecked(list.live_pairs()))
}

/// Capacity excess of window merges over the channel they act on, summed
/// over a common set of window positions, one entry per window size.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowExcess {
    pub orders: Vec<usize>,
    /// Number of end positions at which every window size was valid.
    pub positions: usize,
    pub total: Vec<f64>,
}

impl WindowExcess {
    pub fn new(orders: &[usize]) -> Self {
        WindowExcess { orders: orders.to_vec(), positions: 0, total: alloc::vec![0.0; orders.len()] }
    }

    /// Mean excess per window size; `None` when no position qualified.
    pub fn mean(&self) -> Vec<Option<f64>> {
        self.total
            .iter()
            .map(|t| (self.positions > 0).then(|| t / self.positions as f64))
            .collect()
    }

    /// Adds the windows of `ch`.
    ///
    /// For every end position, the windows of each size ending there are
    /// merged in isolation. Positions where any of the windows violates its
    /// ratio preconditions are skipped so that all sizes see the same
    /// positions.
    pub fn accumulate(&mut self, ch: &BmsChannel) -> Result<(), Error> {
        if let Some(&m) = self.orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidMergeOrder(m));
        }
        let Some(widest) = self.orders.iter().copied().max() else { return Ok(()) };
        let pairs = ch.pairs();
        let mut gains = alloc::vec![0.0; self.orders.len()];
        for end in widest - 1..pairs.len() {
            let ok = self.orders.iter().zip(gains.iter_mut()).all(|(&m, g)| {
                let win = &pairs[end + 1 - m..=end];
                merge_window(win).map(|merge| *g = merge.gain(win)).is_ok()
            });
            if ok {
                self.positions += 1;
                self.total.iter_mut().zip(&gains).for_each(|(t, g)| *t += g);
            }
        }
        Ok(())
    }
}

/// Mean capacity excess of window merges of each size in `orders` over `ch`.
pub fn fixed_window_excess(ch: &BmsChannel, orders: &[usize]) -> Result<Vec<Option<f64>>, Error> {
    let mut acc = WindowExcess::new(orders);
    acc.accumulate(ch)?;
    Ok(acc.mean())
}
