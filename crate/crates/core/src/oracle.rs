//! Ground truth for tiny code lengths: brute-force bit-channels and the
//! closed-form erasure recursion.
//!
//! The bit-channel `W_i` at length `n = 2^m` has outputs `(y, u_0 .. u_{i-1})`
//! and
//!
//! ```text
//! W_i(y, u_0^{i-1} | u_i) = 2^{-(n-1)} Σ_v W^n(y | (u_0^{i-1}, u_i, v) B_m G^{⊗m})
//! ```
//!
//! with `v` ranging over `{0,1}^{n-i-1}`, which normalizes every conditional
//! distribution to one.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{sort_pairs, BmsChannel, SymbolPair};
use crate::construct::{generator_row, select_info_set, MAX_STAGES};
use crate::Error;

/// Bound on `|Y|^n 2^n`, the number of terms enumerated.
pub const WORK_LIMIT: u128 = 1 << 32;

/// Erasure probability of bit-channel `i` of BEC(`e`) at length `2^m`.
pub fn bec_recursion(e: f64, m: u32, i: usize) -> f64 {
    (0..m).rev().fold(e, |z, k| if (i >> k) & 1 == 1 { z * z } else { 2.0 * z - z * z })
}

/// Codewords `u B_m G^{⊗m}` for every `u`, bit `j` of the index holding `u_j`.
fn codeword_table(m: u32) -> Vec<u32> {
    let n = 1usize << m;
    let rows: Vec<u32> = (0..n)
        .map(|j| generator_row(m, j).iter().enumerate().fold(0u32, |acc, (k, &b)| acc | (u32::from(b) << k)))
        .collect();
    let mut table = vec![0u32; 1 << n];
    for u in 1..table.len() {
        let low = u.trailing_zeros() as usize;
        table[u] = table[u & (u - 1)] ^ rows[low];
    }
    table
}

struct Enumerator {
    n: usize,
    i: usize,
    symbols: usize,
    /// `W(s|0)` and `W(s|1)` for output symbol `s`; conjugates at odd positions.
    probs: Vec<[f64; 2]>,
    codewords: Vec<u32>,
    scale: f64,
}

impl Enumerator {
    fn new(w: &BmsChannel, m: u32, i: usize) -> Result<Self, Error> {
        if m > MAX_STAGES {
            return Err(Error::InvalidParameter("m"));
        }
        let n = 1usize << m;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let symbols = 2 * w.pair_count();
        let work = (symbols as u128).checked_pow(n as u32).and_then(|y| y.checked_mul(1u128 << n.min(127)));
        match work {
            Some(work) if work <= WORK_LIMIT && n <= 32 => {}
            _ => return Err(Error::OracleTooLarge { work: work.unwrap_or(u128::MAX), limit: WORK_LIMIT }),
        }
        let probs = w.pairs().iter().flat_map(|p| [[p.a, p.b], [p.b, p.a]]).collect();
        Ok(Enumerator {
            n,
            i,
            symbols,
            probs,
            codewords: codeword_table(m),
            scale: 1.0 / (1u64 << (n - 1)) as f64,
        })
    }

    fn outputs(&self) -> usize {
        self.symbols.pow(self.n as u32)
    }

    /// Fills `out[prefix] = [W_i(y, prefix | 0), W_i(y, prefix | 1)]` for output `y`.
    fn channel_output(&self, y: usize, f: &mut Vec<f64>, out: &mut [[f64; 2]]) {
        // f[x] = W^n(y | x) with bit k of x holding x_k
        f.clear();
        f.push(1.0);
        let mut rest = y;
        for _ in 0..self.n {
            let s = rest % self.symbols;
            rest /= self.symbols;
            let len = f.len();
            f.extend_from_within(..len);
            for x in 0..len {
                f[x] *= self.probs[s][0];
                f[x + len] *= self.probs[s][1];
            }
        }
        out.iter_mut().for_each(|o| *o = [0.0, 0.0]);
        let prefix_mask = (1usize << self.i) - 1;
        for (u, &x) in self.codewords.iter().enumerate() {
            out[u & prefix_mask][(u >> self.i) & 1] += f[x as usize];
        }
        out.iter_mut().for_each(|o| {
            o[0] *= self.scale;
            o[1] *= self.scale;
        });
    }
}

/// Exact bit-channel `i` of `w` at length `2^m`, as a canonical channel.
///
/// Each output contributes half of its pair; its conjugate output supplies
/// the other half, so conjugates never need to be identified explicitly.
pub fn exact_bit_channel(w: &BmsChannel, m: u32, i: usize) -> Result<BmsChannel, Error> {
    let e = Enumerator::new(w, m, i)?;
    let mut f = Vec::with_capacity(e.n.max(1) << 1);
    let mut out = vec![[0.0; 2]; 1 << e.i];
    let mut raw: Vec<SymbolPair> = Vec::new();
    for y in 0..e.outputs() {
        e.channel_output(y, &mut f, &mut out);
        for &[p0, p1] in &out {
            if p0 + p1 > 0.0 {
                raw.push(SymbolPair::new(p0.max(p1) / 2.0, p0.min(p1) / 2.0));
            }
        }
        if raw.len() >= 1 << 16 {
            raw = sort_pairs(raw.into_iter(), true);
        }
    }
    Ok(BmsChannel::from_raw_unchecked(raw, true))
}

/// Full output table of a bit-channel, for inspecting tiny cases.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBitChannel {
    pub m: u32,
    pub i: usize,
    /// `table[y * 2^i + prefix] = [P(y, prefix | 0), P(y, prefix | 1)]`, with
    /// `y` the output word in base `2|pairs|`, first position least significant.
    pub table: Vec<[f64; 2]>,
}

impl ExactBitChannel {
    pub fn new(w: &BmsChannel, m: u32, i: usize) -> Result<Self, Error> {
        let e = Enumerator::new(w, m, i)?;
        let mut f = Vec::new();
        let per = 1usize << e.i;
        let mut table = vec![[0.0; 2]; e.outputs() * per];
        for y in 0..e.outputs() {
            e.channel_output(y, &mut f, &mut table[y * per..(y + 1) * per]);
        }
        Ok(ExactBitChannel { m, i, table })
    }

    /// Total probability of each conditional distribution.
    pub fn conditional_sums(&self) -> [f64; 2] {
        self.table.iter().fold([0.0, 0.0], |s, p| [s[0] + p[0], s[1] + p[1]])
    }

    pub fn to_channel(&self) -> BmsChannel {
        let raw = self
            .table
            .iter()
            .filter(|p| p[0] + p[1] > 0.0)
            .map(|p| SymbolPair::new(p[0].max(p[1]) / 2.0, p[0].min(p[1]) / 2.0))
            .collect();
        BmsChannel::from_raw_unchecked(raw, true)
    }
}

/// Rate of the design selected from exact misdecoding probabilities.
pub fn exact_design_rate(w: &BmsChannel, m: u32, target_bler: f64) -> Result<f64, Error> {
    if !(target_bler > 0.0 && target_bler < 1.0) {
        return Err(Error::InvalidTargetBler(target_bler));
    }
    let n = 1usize << m;
    let pe = (0..n)
        .map(|i| exact_bit_channel(w, m, i).map(|c| c.error_prob()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(select_info_set(&pe, target_bler).len() as f64 / n as f64)
}
