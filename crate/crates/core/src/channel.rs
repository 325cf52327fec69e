//! Canonical representation of binary-input memoryless symmetric channels.
//!
//! Every output symbol `y` has a conjugate `y'` with `W(y|1) = W(y'|0)`, so a
//! channel is fully described by the list of pairs `(a, b) = (W(y|0), W(y'|0))`.
//! The canonical form flips each pair so that `a >= b` (likelihood ratio at
//! least one) and sorts the list by ascending likelihood ratio.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::Error;

/// Absolute tolerance for mass bookkeeping.
pub const MASS_TOL: f64 = 1e-12;
/// Relative tolerance under which two likelihood ratios count as equal.
pub const LR_REL_TOL: f64 = 1e-9;
/// Tolerance on the total mass accepted from user input.
pub const INPUT_MASS_TOL: f64 = 1e-9;

/// One conjugate output pair `(W(y|0), W(y'|0))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolPair {
    pub a: f64,
    pub b: f64,
}

impl SymbolPair {
    pub const fn new(a: f64, b: f64) -> Self {
        SymbolPair { a, b }
    }

    pub fn mass(&self) -> f64 {
        self.a + self.b
    }

    /// Likelihood ratio `a / b`, infinite when `b = 0`.
    ///
    /// Callers must ensure the pair is not empty; see [`lr`] for the checked
    /// variant.
    pub fn lr(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            self.a / self.b
        }
    }

    /// The representative with likelihood ratio at least one.
    pub fn flipped_canonical(self) -> Self {
        if self.a >= self.b {
            self
        } else {
            SymbolPair::new(self.b, self.a)
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if !(self.a.is_finite() && self.b.is_finite()) || self.a < 0.0 || self.b < 0.0 {
            return Err(Error::NegativeMass { a: self.a, b: self.b });
        }
        if self.a == 0.0 && self.b == 0.0 {
            return Err(Error::EmptySymbol);
        }
        Ok(())
    }

    /// Capacity contribution of both members of the pair, in bits.
    pub fn capacity_term(&self) -> f64 {
        capacity_term(self.a, self.b)
    }

    /// Bhattacharyya contribution of both members of the pair.
    pub fn bhattacharyya_term(&self) -> f64 {
        2.0 * libm::sqrt(self.a * self.b)
    }

    /// ML error contribution of both members of the pair.
    pub fn error_term(&self) -> f64 {
        if (self.a - self.b).abs() <= MASS_TOL * (self.a + self.b) {
            0.5 * (self.a + self.b)
        } else {
            self.a.min(self.b)
        }
    }
}

/// Likelihood ratio of a pair; rejects the empty pair.
pub fn lr(pair: &SymbolPair) -> Result<f64, Error> {
    pair.validate()?;
    Ok(pair.lr())
}

/// `x log2(2x / (x + y)) + y log2(2y / (x + y))` with `0 log 0 = 0`.
pub(crate) fn capacity_term(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    if a > 0.0 {
        acc += a * libm::log2(2.0 * a / s);
    }
    if b > 0.0 {
        acc += b * libm::log2(2.0 * b / s);
    }
    acc
}

/// Equality of likelihood ratios up to [`LR_REL_TOL`]; infinities compare equal.
pub fn lr_equal(l1: f64, l2: f64) -> bool {
    if l1.is_infinite() || l2.is_infinite() {
        return l1.is_infinite() && l2.is_infinite();
    }
    (l1 - l2).abs() <= LR_REL_TOL * l1.max(l2)
}

fn lr_cmp(x: &SymbolPair, y: &SymbolPair) -> Ordering {
    x.lr().total_cmp(&y.lr())
}

/// Error probability, Bhattacharyya parameter and capacity of a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelFunctionals {
    pub error_prob: f64,
    pub bhattacharyya: f64,
    pub capacity: f64,
}

/// A BMS channel in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct BmsChannel {
    pairs: Vec<SymbolPair>,
}

impl BmsChannel {
    /// Validates raw pairs and brings them into canonical form.
    ///
    /// Pairs are flipped so that `a >= b` and sorted by likelihood ratio.
    /// With `merge_equal_lr`, neighbours whose ratios agree within
    /// [`LR_REL_TOL`] are summed, which leaves the channel equivalent.
    pub fn canonicalize(raw: &[SymbolPair], merge_equal_lr: bool) -> Result<Self, Error> {
        if raw.is_empty() {
            return Err(Error::EmptyChannel);
        }
        let mut total = 0.0;
        for p in raw {
            p.validate()?;
            total += p.mass();
        }
        if (total - 1.0).abs() > INPUT_MASS_TOL {
            return Err(Error::MassMismatch { total });
        }
        Ok(Self::build(raw.iter().copied(), merge_equal_lr))
    }

    /// Like [`canonicalize`](Self::canonicalize) but drops empty pairs and
    /// skips validation; for outputs of internal computations.
    pub(crate) fn from_raw_unchecked(raw: Vec<SymbolPair>, merge_equal_lr: bool) -> Self {
        Self::build(
            raw.into_iter().filter(|p| p.a > 0.0 || p.b > 0.0),
            merge_equal_lr,
        )
    }

    /// Wraps pairs that are already canonical and sorted.
    pub(crate) fn from_sorted_unchecked(pairs: Vec<SymbolPair>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].lr() <= w[1].lr()));
        BmsChannel { pairs }
    }

    fn build(raw: impl Iterator<Item = SymbolPair>, merge_equal_lr: bool) -> Self {
        let mut pairs = sort_pairs(raw, merge_equal_lr);
        let total: f64 = pairs.iter().map(SymbolPair::mass).sum();
        if (total - 1.0).abs() > 4.0 * f64::EPSILON {
            for p in &mut pairs {
                p.a /= total;
                p.b /= total;
            }
        }
        BmsChannel { pairs }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter("BSC crossover probability must lie in [0, 1]"));
        }
        Self::canonicalize(&[SymbolPair::new(1.0 - p, p)], false)
    }

    /// Binary erasure channel with erasure probability `e`.
    ///
    /// The self-conjugate erasure symbol is split into a conjugate pair of
    /// mass `e / 2` each.
    pub fn bec(e: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::InvalidParameter("BEC erasure probability must lie in [0, 1]"));
        }
        let raw = [SymbolPair::new(0.5 * e, 0.5 * e), SymbolPair::new(1.0 - e, 0.0)];
        let kept: Vec<SymbolPair> = raw.into_iter().filter(|p| p.mass() > 0.0).collect();
        Self::canonicalize(&kept, false)
    }

    pub fn pairs(&self) -> &[SymbolPair] {
        &self.pairs
    }

    pub fn into_pairs(self) -> Vec<SymbolPair> {
        self.pairs
    }

    /// Number of conjugate pairs; the output alphabet has twice as many symbols.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn alphabet_size(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.pairs.iter().map(SymbolPair::mass).sum()
    }

    pub fn capacity(&self) -> f64 {
        self.pairs.iter().map(SymbolPair::capacity_term).sum()
    }

    pub fn bhattacharyya(&self) -> f64 {
        self.pairs.iter().map(SymbolPair::bhattacharyya_term).sum()
    }

    pub fn error_prob(&self) -> f64 {
        self.pairs.iter().map(SymbolPair::error_term).sum()
    }

    pub fn functionals(&self) -> ChannelFunctionals {
        ChannelFunctionals {
            error_prob: self.error_prob(),
            bhattacharyya: self.bhattacharyya(),
            capacity: self.capacity(),
        }
    }

    /// Checks the canonical-form invariants.
    pub fn check_invariants(&self) -> Result<(), Error> {
        if self.pairs.is_empty() {
            return Err(Error::EmptyChannel);
        }
        for (i, p) in self.pairs.iter().enumerate() {
            p.validate()?;
            if p.a < p.b {
                return Err(Error::LrOrderViolation { position: i });
            }
        }
        if let Some(i) = self.pairs.windows(2).position(|w| w[0].lr() > w[1].lr()) {
            return Err(Error::LrOrderViolation { position: i + 1 });
        }
        let total = self.total_mass();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::MassMismatch { total });
        }
        Ok(())
    }
}

/// Flips and sorts pairs without touching their total mass.
pub(crate) fn sort_pairs(raw: impl Iterator<Item = SymbolPair>, merge_equal_lr: bool) -> Vec<SymbolPair> {
    let mut pairs: Vec<SymbolPair> = raw.map(SymbolPair::flipped_canonical).collect();
    pairs.sort_by(lr_cmp);
    if merge_equal_lr {
        pairs = merge_equal_neighbours(pairs);
    }
    pairs
}

/// Sums runs of neighbours with equal likelihood ratio.
pub(crate) fn merge_equal_neighbours(pairs: Vec<SymbolPair>) -> Vec<SymbolPair> {
    let mut out: Vec<SymbolPair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        match out.last_mut() {
            Some(last) if lr_equal(last.lr(), p.lr()) => {
                last.a += p.a;
                last.b += p.b;
            }
            _ => out.push(p),
        }
    }
    out
}
