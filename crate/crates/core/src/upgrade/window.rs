//! Arithmetic of a single upgrading merge over a window of consecutive pairs.

// negated comparisons also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use alloc::vec::Vec;

use crate::channel::{lr_equal, SymbolPair};
use crate::Error;

/// Negative adjustments at most this large in magnitude are rounding noise.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Mass `t(alpha, beta | x)` added to a surviving pair: `alpha` to its
/// `x = 0` entry and `beta` to its `x = 1` entry.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UpgradeAdjustment {
    pub alpha: f64,
    pub beta: f64,
}

impl UpgradeAdjustment {
    pub fn mass(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn apply(&self, p: &SymbolPair) -> SymbolPair {
        SymbolPair::new(p.a + self.alpha, p.b + self.beta)
    }
}

/// One step of the interior schedule of a window merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleStep {
    /// Sum the running interior symbol with the next one.
    Degrade,
    /// Move the running interior symbol onto the next symbol's likelihood ratio.
    Upgrade,
    /// Split the last interior symbol onto the two window boundaries.
    Split,
}

impl ScheduleStep {
    pub fn is_upgrade(self) -> bool {
        !matches!(self, ScheduleStep::Degrade)
    }
}

/// Interior schedule for a window of `len` pairs.
///
/// Even windows start with a degrade, odd ones with an upgrade; the two
/// alternate and the last interior step is always a degrade, after which the
/// three remaining symbols are merged by a split. A window of two is a single
/// move of the lower symbol onto the upper one.
pub fn schedule_for(len: usize) -> Vec<ScheduleStep> {
    let mut steps = Vec::with_capacity(len.saturating_sub(2).max(1));
    if len == 2 {
        steps.push(ScheduleStep::Upgrade);
        return steps;
    }
    let interior = len - 2;
    for s in 1..interior {
        let degrade = (s % 2 == 1) == (len % 2 == 0);
        steps.push(if degrade { ScheduleStep::Degrade } else { ScheduleStep::Upgrade });
    }
    steps.push(ScheduleStep::Split);
    steps
}

/// Moves `mass` onto likelihood ratio `target_lr`.
pub fn move_onto(mass: f64, target_lr: f64) -> UpgradeAdjustment {
    if target_lr.is_infinite() {
        UpgradeAdjustment { alpha: mass, beta: 0.0 }
    } else {
        UpgradeAdjustment {
            alpha: target_lr * mass / (target_lr + 1.0),
            beta: mass / (target_lr + 1.0),
        }
    }
}

fn clamp(v: f64) -> Result<f64, Error> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -NEGATIVE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeAdjustment(v))
    }
}

/// Splits the pair `(a, b)` onto likelihood ratios `lo < hi`, preserving
/// both entries.
pub fn split_onto(lo: f64, hi: f64, a: f64, b: f64) -> Result<(UpgradeAdjustment, UpgradeAdjustment), Error> {
    if !(lo < hi) {
        return Err(Error::DegenerateWindow);
    }
    if hi.is_infinite() {
        let left = UpgradeAdjustment { alpha: clamp(lo * b)?, beta: clamp(b)? };
        let right = UpgradeAdjustment { alpha: clamp(a - lo * b)?, beta: 0.0 };
        return Ok((left, right));
    }
    let d = hi - lo;
    let left = UpgradeAdjustment {
        alpha: clamp(lo * (hi * b - a) / d)?,
        beta: clamp((hi * b - a) / d)?,
    };
    let right = UpgradeAdjustment {
        alpha: clamp(hi * (a - lo * b) / d)?,
        beta: clamp((a - lo * b) / d)?,
    };
    Ok((left, right))
}

/// Validates the likelihood-ratio preconditions of a window merge.
pub(crate) fn check_window(window: &[SymbolPair]) -> Result<Vec<f64>, Error> {
    let len = window.len();
    if len < 2 {
        return Err(Error::InvalidMergeOrder(len));
    }
    let lrs: Vec<f64> = window.iter().map(SymbolPair::lr).collect();
    for (j, (p, &l)) in window.iter().zip(&lrs).enumerate() {
        if p.a < p.b || !(p.a > 0.0) {
            return Err(Error::LrOrderViolation { position: j });
        }
        if j > 0 && lrs[j - 1] > l {
            return Err(Error::LrOrderViolation { position: j });
        }
    }
    if len >= 3 && !(lrs[0] < lrs[len - 1]) {
        return Err(Error::DegenerateWindow);
    }
    if len >= 4 && !(lrs[0] < lrs[1] && lrs[len - 2] < lrs[len - 1]) {
        return Err(Error::DegenerateWindow);
    }
    Ok(lrs)
}

/// Outcome of merging one window: adjustments for the surviving boundary
/// pairs. `left` is `None` for two-pair windows, which keep only the upper pair.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct WindowMerge {
    pub(crate) left: Option<UpgradeAdjustment>,
    pub(crate) right: UpgradeAdjustment,
    pub(crate) schedule: Vec<ScheduleStep>,
}

impl WindowMerge {
    pub(crate) fn survivors(&self, window: &[SymbolPair]) -> ([SymbolPair; 2], usize) {
        let right = self.right.apply(&window[window.len() - 1]);
        match &self.left {
            Some(l) => ([l.apply(&window[0]), right], 2),
            None => ([right, right], 1),
        }
    }

    /// Capacity of the survivors minus capacity of the window.
    pub(crate) fn gain(&self, window: &[SymbolPair]) -> f64 {
        let (surv, k) = self.survivors(window);
        let after: f64 = surv[..k].iter().map(SymbolPair::capacity_term).sum();
        let before: f64 = window.iter().map(SymbolPair::capacity_term).sum();
        after - before
    }
}

pub(crate) fn merge_window(window: &[SymbolPair]) -> Result<WindowMerge, Error> {
    let lrs = check_window(window)?;
    let len = window.len();
    let schedule = schedule_for(len);
    if len == 2 {
        return Ok(WindowMerge {
            left: None,
            right: move_onto(window[0].mass(), lrs[1]),
            schedule,
        });
    }
    let mut acc = window[1];
    for (s, step) in schedule[..len - 3].iter().enumerate() {
        let next = &window[s + 2];
        acc = match step {
            ScheduleStep::Degrade => SymbolPair::new(acc.a + next.a, acc.b + next.b),
            _ => move_onto(acc.mass(), lrs[s + 2]).apply(next),
        };
    }
    let (left, right) = split_onto(lrs[0], lrs[len - 1], acc.a, acc.b)?;
    Ok(WindowMerge { left: Some(left), right, schedule })
}

/// Likelihood ratio each window member is carried to before the final split.
///
/// Interior members that pass through an upgrade step take the ratio of
/// that step's target; the rest keep their own. Index 0 and `len - 1` are the
/// boundaries and keep their ratios. For two-pair windows the lower pair is
/// carried to the upper pair's ratio.
pub(crate) fn carried_lrs(window: &[SymbolPair], schedule: &[ScheduleStep]) -> Vec<f64> {
    let len = window.len();
    let mut carried: Vec<f64> = window.iter().map(SymbolPair::lr).collect();
    if len == 2 {
        carried[0] = carried[1];
        return carried;
    }
    for (s, step) in schedule[..len - 3].iter().enumerate() {
        if *step == ScheduleStep::Upgrade {
            let target = carried[s + 2];
            for c in &mut carried[1..s + 2] {
                *c = target;
            }
        }
    }
    carried
}

/// Probabilities `(p, q)` with which a symbol carried to ratio `to` maps back
/// onto the original symbol and its conjugate. `p + q = 1`.
pub(crate) fn relabel_back(pair: &SymbolPair, to: f64) -> (f64, f64) {
    let m = pair.mass();
    if lr_equal(pair.lr(), to) {
        return (1.0, 0.0);
    }
    if to.is_infinite() {
        return (pair.a / m, pair.b / m);
    }
    let big = m * to / (to + 1.0);
    let small = m / (to + 1.0);
    let det = big * big - small * small;
    ((big * pair.a - small * pair.b) / det, (big * pair.b - small * pair.a) / det)
}
