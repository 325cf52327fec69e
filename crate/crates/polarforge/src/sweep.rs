//! Parameter sweeps: rate gap against `mu` and upgrade fidelity against `M`.

use std::io::Write;

use polarforge_core::{
    approx_all_bit_channels, transform, ApproxMode, BmsChannel, DesignParams, TransformKind, WindowExcess,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::runner::{design, DesignOptions};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuRow {
    pub mu: usize,
    pub rate_degraded: f64,
    pub rate_upgraded: f64,
    /// `rate_upgraded - rate_degraded`.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderRow {
    pub merge_order: usize,
    pub rate_upgraded: f64,
    /// Mean over indices of upgraded minus degraded bit-channel capacity.
    pub mean_capacity_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowRow {
    pub merge_order: usize,
    /// Mean capacity gained by merging one window, over common window positions.
    pub mean_capacity_excess: f64,
    pub windows: usize,
}

fn nonempty<T>(values: &[T], what: &str) -> Result<(), Error> {
    if values.is_empty() {
        return Err(Error::Invalid(format!("empty {what} range")));
    }
    Ok(())
}

pub fn sweep_mu(w: &BmsChannel, base: &DesignParams, mus: &[usize], opts: DesignOptions) -> Result<Vec<MuRow>, Error> {
    nonempty(mus, "mu")?;
    mus.iter()
        .map(|&mu| {
            let d = design(w, &DesignParams { mu, ..*base }, opts)?;
            Ok(MuRow { mu, rate_degraded: d.rate_degraded, rate_upgraded: d.rate_upgraded, gap: d.rate_upgraded - d.rate_degraded })
        })
        .collect()
}

pub fn compare_merge_orders(
    w: &BmsChannel,
    base: &DesignParams,
    orders: &[usize],
    opts: DesignOptions,
) -> Result<Vec<OrderRow>, Error> {
    nonempty(orders, "merge order")?;
    orders
        .iter()
        .map(|&merge_order| {
            let d = design(w, &DesignParams { merge_order, ..*base }, opts)?;
            let n = d.block_length() as f64;
            let gap: f64 = d.capacity_upgraded.iter().zip(&d.capacity_degraded).map(|(u, g)| u - g).sum();
            Ok(OrderRow { merge_order, rate_upgraded: d.rate_upgraded, mean_capacity_gap: gap / n })
        })
        .collect()
}

/// Channels the last merge stage of an upgraded construction acts on: the
/// upgraded bit-channels at length `2^(m-1)` with both transforms applied.
pub fn last_stage_inputs(w: &BmsChannel, base: &DesignParams) -> Result<Vec<BmsChannel>, Error> {
    base.validate()?;
    if base.m == 0 {
        return Err(Error::Invalid("fixed-window mode needs m >= 1".into()));
    }
    let parents = approx_all_bit_channels(w, base.m - 1, ApproxMode::Upgrade, &base.upgrade_params())?;
    Ok(parents
        .par_iter()
        .flat_map_iter(|q| [transform(q, TransformKind::Minus), transform(q, TransformKind::Plus)])
        .collect())
}

/// Fixed-window comparison of merge orders on the given channels.
pub fn fixed_window_orders(channels: &[BmsChannel], orders: &[usize]) -> Result<Vec<WindowRow>, Error> {
    nonempty(orders, "merge order")?;
    let parts = channels
        .par_iter()
        .map(|ch| {
            let mut acc = WindowExcess::new(orders);
            acc.accumulate(ch)?;
            Ok(acc)
        })
        .collect::<Result<Vec<_>, polarforge_core::Error>>()?;
    let mut total = WindowExcess::new(orders);
    for p in parts {
        total.positions += p.positions;
        total.total.iter_mut().zip(&p.total).for_each(|(t, x)| *t += x);
    }
    if total.positions == 0 {
        return Err(Error::Invalid("no window position satisfies every merge order".into()));
    }
    Ok(orders
        .iter()
        .zip(total.mean())
        .map(|(&merge_order, mean)| WindowRow {
            merge_order,
            mean_capacity_excess: mean.unwrap_or(f64::NAN),
            windows: total.positions,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn write_rows<T: Serialize>(rows: &[T], format: Format, out: &mut dyn Write) -> Result<(), Error> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
            }
            w.flush().map_err(|source| Error::Io { path: "<output>".into(), source })?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out).map_err(|source| Error::Io { path: "<output>".into(), source })?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_row() {
        let rows = [MuRow { mu: 8, rate_degraded: 0.25, rate_upgraded: 0.5, gap: 0.25 }];
        let mut out = Vec::new();
        write_rows(&rows, Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "mu,rate_degraded,rate_upgraded,gap\n8,0.25,0.5,0.25\n");
    }

    #[test]
    fn empty_ranges_are_rejected() {
        let w = BmsChannel::bsc(0.11).unwrap();
        let p = DesignParams::new(3, 8, 4, 1e-2);
        assert!(sweep_mu(&w, &p, &[], DesignOptions::default()).is_err());
        assert!(compare_merge_orders(&w, &p, &[], DesignOptions::default()).is_err());
        assert!(fixed_window_orders(&[w], &[]).is_err());
    }

    #[test]
    fn rows_follow_designs() {
        let w = BmsChannel::bec(0.5).unwrap();
        let p = DesignParams::new(2, 64, 4, 0.1);
        let rows = sweep_mu(&w, &p, &[8, 64], DesignOptions::default()).unwrap();
        assert_eq!(rows[1], MuRow { mu: 64, rate_degraded: 0.25, rate_upgraded: 0.25, gap: 0.0 });
        let rows = compare_merge_orders(&w, &p, &[3, 5], DesignOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.mean_capacity_gap.abs() < 1e-12));
    }
}
