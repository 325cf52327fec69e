//! Explicit intermediate channels certifying upgrading merges.
//!
//! For a merged window `y_1 .. y_M` with survivors `z_1` (ratio `λ_1`) and
//! `z_M` (ratio `λ_M`), the witness `P` maps `z_1, z_1', z_M, z_M'` back onto
//! the `2M` window outputs so that `W(y|x) = Σ_z Q'(z|x) P(y|z)`. It is
//! assembled from two elementary pieces: every interior symbol is first
//! carried to the ratio its schedule moved it to and then split onto the
//! boundaries. The split part sends `z_1` to each interior symbol with the
//! share of mass that symbol contributed; the carry part sends a carried
//! symbol back onto `y` and `y'` in the proportions returned by
//! [`relabel_back`].

use alloc::vec;
use alloc::vec::Vec;

use super::window::{carried_lrs, move_onto, relabel_back, schedule_for, split_onto, ScheduleStep};
use super::UpgradeMergeRecord;
use crate::channel::{BmsChannel, SymbolPair};
use crate::Error;

pub const ENTRY_TOL: f64 = 1e-12;
pub const ROW_TOL: f64 = 1e-10;
pub const FACTOR_TOL: f64 = 1e-10;

/// Result of checking a witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub passed: bool,
    /// Largest of all residuals below.
    pub max_residual: f64,
    pub min_entry: f64,
    pub max_row_error: f64,
    pub factorization_residual: f64,
    /// Largest difference among pairs outside the merged window.
    pub outside_residual: f64,
}

/// Row-stochastic matrix from survivor outputs to window outputs.
///
/// Rows are `z_1, z_1', z_M, z_M'` (only `z_M, z_M'` for two-pair windows);
/// columns are `y_1 .. y_M` followed by `y_1' .. y_M'`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessMatrix {
    pub rows: Vec<Vec<f64>>,
}

/// Builds the witness from the window as it was before the merge.
pub fn witness_matrix(window: &[SymbolPair], schedule: &[ScheduleStep]) -> Result<WitnessMatrix, Error> {
    let len = window.len();
    if len < 2 || schedule != schedule_for(len).as_slice() {
        return Err(Error::RecordMismatch);
    }
    let carried = carried_lrs(window, schedule);
    let (lo, hi) = (window[0].lr(), window[len - 1].lr());

    // mass each window member hands to the lower and upper survivor
    let mut to_lo = vec![0.0; len];
    let mut to_hi = vec![0.0; len];
    to_lo[0] = window[0].a;
    to_hi[len - 1] = window[len - 1].a;
    let interior = if len == 2 { 0..1 } else { 1..len - 1 };
    for j in interior.clone() {
        let moved = move_onto(window[j].mass(), carried[j]);
        if len == 2 {
            to_hi[j] = moved.alpha;
        } else {
            let (l, h) = split_onto(lo, hi, moved.alpha, moved.beta)?;
            to_lo[j] = l.alpha;
            to_hi[j] = h.alpha;
        }
    }

    let row_for = |share: &[f64], keep: usize| -> (Vec<f64>, Vec<f64>) {
        let denom: f64 = share.iter().sum();
        let mut row = vec![0.0; 2 * len];
        let mut conj = vec![0.0; 2 * len];
        for j in 0..len {
            if share[j] == 0.0 {
                continue;
            }
            let w = share[j] / denom;
            let (p, q) = if j == keep { (1.0, 0.0) } else { relabel_back(&window[j], carried[j]) };
            row[j] = w * p;
            row[len + j] = w * q;
            conj[len + j] = w * p;
            conj[j] = w * q;
        }
        (row, conj)
    };

    let mut rows = Vec::with_capacity(4);
    if len > 2 {
        let (r, c) = row_for(&to_lo, 0);
        rows.push(r);
        rows.push(c);
    }
    let (r, c) = row_for(&to_hi, len - 1);
    rows.push(r);
    rows.push(c);
    Ok(WitnessMatrix { rows })
}

/// Checks `W = Q' P` on one window.
///
/// `survivors` are the merged pairs as they appear in `Q'`: two for windows
/// of three or more pairs, one for two-pair windows.
pub fn verify_window_witness(
    window: &[SymbolPair],
    survivors: &[SymbolPair],
    schedule: &[ScheduleStep],
) -> Result<WitnessReport, Error> {
    let len = window.len();
    let expected = if len == 2 { 1 } else { 2 };
    if survivors.len() != expected {
        return Err(Error::RecordMismatch);
    }
    let p = witness_matrix(window, schedule)?;

    // Q'(z|x) for rows z, z' of each survivor
    let mut q_rows: Vec<[f64; 2]> = Vec::with_capacity(4);
    for s in survivors {
        q_rows.push([s.a, s.b]);
        q_rows.push([s.b, s.a]);
    }

    let mut min_entry = f64::INFINITY;
    let mut max_row_error: f64 = 0.0;
    for row in &p.rows {
        for &v in row {
            min_entry = min_entry.min(v);
        }
        max_row_error = max_row_error.max((row.iter().sum::<f64>() - 1.0).abs());
    }

    let mut factorization_residual: f64 = 0.0;
    for col in 0..2 * len {
        let pair = &window[col % len];
        let w = if col < len { [pair.a, pair.b] } else { [pair.b, pair.a] };
        for x in 0..2 {
            let reconstructed: f64 = q_rows.iter().zip(&p.rows).map(|(q, r)| q[x] * r[col]).sum();
            factorization_residual = factorization_residual.max((reconstructed - w[x]).abs());
        }
    }

    // a stochastic P preserves the mass of each input
    for x in 0..2 {
        let total_q: f64 = q_rows.iter().map(|q| q[x]).sum();
        let total_w: f64 = window.iter().map(|p| p.a + p.b).sum();
        factorization_residual = factorization_residual.max((total_q - total_w).abs());
    }

    Ok(report(min_entry, max_row_error, factorization_residual, 0.0))
}

fn report(min_entry: f64, max_row_error: f64, factorization_residual: f64, outside: f64) -> WitnessReport {
    let negative = (-min_entry).max(0.0);
    let max_residual = negative.max(max_row_error).max(factorization_residual).max(outside);
    WitnessReport {
        passed: min_entry >= -ENTRY_TOL
            && max_row_error <= ROW_TOL
            && factorization_residual <= FACTOR_TOL
            && outside <= FACTOR_TOL,
        max_residual,
        min_entry,
        max_row_error,
        factorization_residual,
        outside_residual: outside,
    }
}

/// Checks that `qp` is upgraded with respect to `w` through the merge in `record`.
pub fn verify_upgrade_witness(
    w: &BmsChannel,
    qp: &BmsChannel,
    record: &UpgradeMergeRecord,
) -> Result<WitnessReport, Error> {
    let (wp, qpp) = (w.pairs(), qp.pairs());
    let (s, len) = (record.window_start, record.window_len);
    let kept = if len == 2 { 1 } else { 2 };
    if len < 2 || s + len > wp.len() || qpp.len() + len != wp.len() + kept {
        return Err(Error::RecordMismatch);
    }
    let mut outside: f64 = 0.0;
    let mut cmp = |x: &SymbolPair, y: &SymbolPair| {
        outside = outside.max((x.a - y.a).abs()).max((x.b - y.b).abs());
    };
    for k in 0..s {
        cmp(&wp[k], &qpp[k]);
    }
    for k in s + len..wp.len() {
        cmp(&wp[k], &qpp[k + kept - len]);
    }
    let local = verify_window_witness(&wp[s..s + len], &qpp[s..s + kept], &record.schedule)?;
    Ok(report(
        local.min_entry,
        local.max_row_error,
        local.factorization_residual,
        outside,
    ))
}
