//! Bit-channel approximation along the index path and frozen-set selection.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{BmsChannel, ChannelFunctionals};
use crate::degrade::degrading_merge_observed;
use crate::transform::{transform, TransformKind};
use crate::upgrade::{upgrading_merge_observed, Objective, UpgradeParams, DEFAULT_EPSILON};
use crate::{Error, MergeObserver, NoObserver};

/// Alphabet bound that disables merging altogether.
pub const NO_MERGING: usize = usize::MAX;

/// Largest supported number of polarization stages.
pub const MAX_STAGES: u32 = 24;

/// Index `i` of a bit-channel at length `2^m` together with its bits
/// `b_1 .. b_m`, most significant first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitIndexPath {
    m: u32,
    index: usize,
}

impl BitIndexPath {
    pub fn new(m: u32, index: usize) -> Result<Self, Error> {
        if m > MAX_STAGES {
            return Err(Error::InvalidParameter("m"));
        }
        if index >> m != 0 {
            return Err(Error::IndexOutOfRange { index, len: 1 << m });
        }
        Ok(BitIndexPath { m, index })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, Error> {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        BitIndexPath::new(bits.len() as u32, index)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// `b_1 .. b_m`; `b_1` selects the first transform.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.m).rev().map(move |k| (self.index >> k) & 1 == 1)
    }
}

/// Which side of the true bit-channel to approximate from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApproxMode {
    Degrade,
    Upgrade,
}

/// Parameters of a code design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignParams {
    pub m: u32,
    pub mu: usize,
    pub merge_order: usize,
    pub target_bler: f64,
    pub epsilon: f64,
    pub objective: Objective,
}

impl DesignParams {
    pub fn new(m: u32, mu: usize, merge_order: usize, target_bler: f64) -> Self {
        DesignParams { m, mu, merge_order, target_bler, epsilon: DEFAULT_EPSILON, objective: Objective::MinGain }
    }

    pub fn upgrade_params(&self) -> UpgradeParams {
        UpgradeParams { mu: self.mu, merge_order: self.merge_order, epsilon: self.epsilon, objective: self.objective }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.m > MAX_STAGES {
            return Err(Error::InvalidParameter("m"));
        }
        if !(self.target_bler > 0.0 && self.target_bler < 1.0) {
            return Err(Error::InvalidTargetBler(self.target_bler));
        }
        self.upgrade_params().validate()
    }

    pub fn block_length(&self) -> usize {
        1 << self.m
    }
}

fn reduce(
    ch: &BmsChannel,
    mode: ApproxMode,
    params: &UpgradeParams,
    observer: &mut dyn MergeObserver,
) -> Result<BmsChannel, Error> {
    if params.mu == NO_MERGING {
        return Ok(ch.clone());
    }
    match mode {
        ApproxMode::Degrade => degrading_merge_observed(ch, params.mu, observer),
        ApproxMode::Upgrade => upgrading_merge_observed(ch, params, observer),
    }
}

/// Approximates bit-channel `path` of `w`: merge, then for each bit apply
/// the matching transform and merge again. With `params.mu == NO_MERGING`
/// the true bit-channel is returned (up to lossless merging of equal ratios).
pub fn approx_bit_channel(
    w: &BmsChannel,
    path: &BitIndexPath,
    mode: ApproxMode,
    params: &UpgradeParams,
) -> Result<BmsChannel, Error> {
    approx_bit_channel_observed(w, path, mode, params, &mut NoObserver)
}

pub fn approx_bit_channel_observed(
    w: &BmsChannel,
    path: &BitIndexPath,
    mode: ApproxMode,
    params: &UpgradeParams,
    observer: &mut dyn MergeObserver,
) -> Result<BmsChannel, Error> {
    params.validate()?;
    let mut q = reduce(w, mode, params, observer)?;
    for bit in path.bits() {
        q = reduce(&transform(&q, TransformKind::from_bit(bit)), mode, params, observer)?;
    }
    Ok(q)
}

/// All `2^m` approximations at once, sharing every intermediate stage.
pub fn approx_all_bit_channels(
    w: &BmsChannel,
    m: u32,
    mode: ApproxMode,
    params: &UpgradeParams,
) -> Result<Vec<BmsChannel>, Error> {
    params.validate()?;
    if m > MAX_STAGES {
        return Err(Error::InvalidParameter("m"));
    }
    let mut level = vec![reduce(w, mode, params, &mut NoObserver)?];
    for _ in 0..m {
        let mut next = Vec::with_capacity(2 * level.len());
        for q in &level {
            for kind in [TransformKind::Minus, TransformKind::Plus] {
                next.push(reduce(&transform(q, kind), mode, params, &mut NoObserver)?);
            }
        }
        level = next;
    }
    Ok(level)
}

/// Result of a code design.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeDesign {
    pub m: u32,
    pub mu: usize,
    pub merge_order: usize,
    pub target_bler: f64,
    /// Upper bounds on each bit-channel's misdecoding probability.
    pub pe_degraded: Vec<f64>,
    /// Lower bounds on each bit-channel's misdecoding probability.
    pub pe_upgraded: Vec<f64>,
    pub capacity_degraded: Vec<f64>,
    pub capacity_upgraded: Vec<f64>,
    /// Selected indices, ascending.
    pub info_set: Vec<usize>,
    pub rate_degraded: f64,
    pub rate_upgraded: f64,
    pub rate_exact: Option<f64>,
}

/// Greedy selection: indices by ascending `pe` (ties to the smaller index)
/// while the running sum stays within `budget`. Returned ascending.
pub fn select_info_set(pe: &[f64], budget: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pe.len()).collect();
    order.sort_by(|&i, &j| pe[i].total_cmp(&pe[j]).then(i.cmp(&j)));
    let mut sum = 0.0;
    let mut chosen = Vec::new();
    for i in order {
        if sum + pe[i] > budget {
            break;
        }
        sum += pe[i];
        chosen.push(i);
    }
    chosen.sort_unstable();
    chosen
}

/// Builds a [`CodeDesign`] from the functionals of both approximations.
pub fn assemble_design(
    params: &DesignParams,
    degraded: &[ChannelFunctionals],
    upgraded: &[ChannelFunctionals],
) -> Result<CodeDesign, Error> {
    let n = params.block_length();
    for len in [degraded.len(), upgraded.len()] {
        if len != n {
            return Err(Error::DimensionMismatch { expected: n, found: len });
        }
    }
    let pe_degraded: Vec<f64> = degraded.iter().map(|f| f.error_prob).collect();
    let pe_upgraded: Vec<f64> = upgraded.iter().map(|f| f.error_prob).collect();
    let info_set = select_info_set(&pe_degraded, params.target_bler);
    let upgraded_count = select_info_set(&pe_upgraded, params.target_bler).len();
    Ok(CodeDesign {
        m: params.m,
        mu: params.mu,
        merge_order: params.merge_order,
        target_bler: params.target_bler,
        capacity_degraded: degraded.iter().map(|f| f.capacity).collect(),
        capacity_upgraded: upgraded.iter().map(|f| f.capacity).collect(),
        pe_degraded,
        pe_upgraded,
        rate_degraded: info_set.len() as f64 / n as f64,
        rate_upgraded: upgraded_count as f64 / n as f64,
        info_set,
        rate_exact: None,
    })
}

/// Designs a code by approximating every bit-channel independently.
pub fn design_code(w: &BmsChannel, params: &DesignParams) -> Result<CodeDesign, Error> {
    params.validate()?;
    let up = params.upgrade_params();
    let mut degraded = Vec::with_capacity(params.block_length());
    let mut upgraded = Vec::with_capacity(params.block_length());
    for i in 0..params.block_length() {
        let path = BitIndexPath::new(params.m, i)?;
        degraded.push(approx_bit_channel(w, &path, ApproxMode::Degrade, &up)?.functionals());
        upgraded.push(approx_bit_channel(w, &path, ApproxMode::Upgrade, &up)?.functionals());
    }
    assemble_design(params, &degraded, &upgraded)
}

/// Same as [`design_code`], computing each stage once for all indices.
pub fn design_code_shared(w: &BmsChannel, params: &DesignParams) -> Result<CodeDesign, Error> {
    params.validate()?;
    let up = params.upgrade_params();
    let f = |mode| -> Result<Vec<ChannelFunctionals>, Error> {
        Ok(approx_all_bit_channels(w, params.m, mode, &up)?.iter().map(BmsChannel::functionals).collect())
    };
    assemble_design(params, &f(ApproxMode::Degrade)?, &f(ApproxMode::Upgrade)?)
}

impl CodeDesign {
    pub fn block_length(&self) -> usize {
        1 << self.m
    }

    /// Checks the structural guarantees of a design.
    pub fn check_invariants(&self) -> Result<(), Error> {
        let n = self.block_length();
        for len in [self.pe_degraded.len(), self.pe_upgraded.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        let used: f64 = self.info_set.iter().map(|&i| self.pe_degraded[i]).sum();
        if used > self.target_bler {
            return Err(Error::InvalidParameter("info set exceeds the block error budget"));
        }
        if self.info_set.windows(2).any(|w| w[0] >= w[1]) || self.info_set.iter().any(|&i| i >= n) {
            return Err(Error::InvalidParameter("info set"));
        }
        if self.rate_degraded > self.rate_upgraded + 1e-12 {
            return Err(Error::InvalidParameter("rate order"));
        }
        if let Some(r) = self.rate_exact {
            if self.rate_degraded > r + 1e-12 || r > self.rate_upgraded + 1e-12 {
                return Err(Error::InvalidParameter("rate order"));
            }
        }
        if self.pe_upgraded.iter().zip(&self.pe_degraded).any(|(u, d)| *u > d + 1e-12) {
            return Err(Error::InvalidParameter("error probability order"));
        }
        Ok(())
    }

    pub fn generator_rows(&self) -> Result<GeneratorRows, Error> {
        generator_rows(self.m, &self.info_set)
    }

    /// Codeword for `info_bits` placed on the information set.
    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>, Error> {
        self.generator_rows()?.encode(info_bits)
    }
}

/// Rows of `B_m G^{⊗m}` over GF(2) for selected indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRows {
    pub m: u32,
    pub rows: Vec<Vec<u8>>,
}

/// Row `i` of `B_m G^{⊗m}` with kernel `G = [[1, 0], [1, 1]]`.
///
/// `B_m` reverses the `m` bits of the row index and `G^{⊗m}` has a one at
/// `(r, c)` exactly when the bits of `c` are a subset of the bits of `r`.
pub fn generator_row(m: u32, i: usize) -> Vec<u8> {
    let r = reverse_bits(i, m);
    (0..1usize << m).map(|c| u8::from(c & r == c)).collect()
}

fn reverse_bits(i: usize, m: u32) -> usize {
    if m == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - m)
    }
}

pub fn generator_rows(m: u32, info_set: &[usize]) -> Result<GeneratorRows, Error> {
    if m > MAX_STAGES {
        return Err(Error::InvalidParameter("m"));
    }
    let n = 1usize << m;
    if let Some(&i) = info_set.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(GeneratorRows { m, rows: info_set.iter().map(|&i| generator_row(m, i)).collect() })
}

impl GeneratorRows {
    /// XOR of the rows selected by ones in `info_bits`.
    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>, Error> {
        if info_bits.len() != self.rows.len() {
            return Err(Error::DimensionMismatch { expected: self.rows.len(), found: info_bits.len() });
        }
        let mut x = vec![0u8; 1 << self.m];
        for (row, &bit) in self.rows.iter().zip(info_bits) {
            match bit {
                0 => {}
                1 => x.iter_mut().zip(row).for_each(|(xi, r)| *xi ^= r),
                _ => return Err(Error::InvalidParameter("info bits must be 0 or 1")),
            }
        }
        Ok(x)
    }
}
