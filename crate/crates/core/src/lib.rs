//! Degrading and upgrading approximations of polar-code bit-channels.
//!
//! A binary-input memoryless symmetric (BMS) channel is stored as a list of
//! conjugate output pairs `(a, b) = (W(y|0), W(y'|0))`, flipped so `a >= b` and
//! sorted by likelihood ratio. On top of that representation this crate
//! provides
//!
//! * the three channel functionals (error probability, Bhattacharyya
//!   parameter, capacity),
//! * the two one-step polarization transforms,
//! * greedy alphabet reduction by degrading merges and by upgrading merges of
//!   `M` consecutive symbols (alternating degrade/upgrade interior schedule),
//!   together with explicit witnesses for every upgrade,
//! * per-bit-channel approximation along the index path and frozen-set
//!   selection against a target block error rate,
//! * brute-force ground truth for tiny code lengths.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod construct;
pub mod degrade;
mod error;
mod list;
pub mod oracle;
pub mod transform;
pub mod upgrade;

pub use channel::{BmsChannel, ChannelFunctionals, SymbolPair};
pub use construct::{
    approx_all_bit_channels, approx_bit_channel, assemble_design, design_code, design_code_shared,
    generator_rows, select_info_set, ApproxMode, BitIndexPath, CodeDesign, DesignParams,
    GeneratorRows, NO_MERGING,
};
pub use degrade::{degrading_merge, merge_degrade_pair, DegradeMergeRecord};
pub use error::Error;
pub use transform::{transform, TransformKind};
pub use upgrade::{
    fixed_window_excess, merge_upgrade_2, merge_upgrade_3, merge_upgrade_window, upgrading_merge,
    verify_upgrade_witness, Objective, WindowExcess, ScheduleStep, UpgradeAdjustment, UpgradeMergeRecord, UpgradeParams, WitnessReport,
};

/// Events emitted by the merge engines, one per executed merge.
///
/// `before` holds the merged window as it was in the input channel and
/// `after` the surviving pairs that replaced it.
#[derive(Debug)]
pub enum MergeEvent<'a> {
    Degrade {
        record: &'a DegradeMergeRecord,
        before: [SymbolPair; 2],
        after: SymbolPair,
    },
    Upgrade {
        record: &'a UpgradeMergeRecord,
        before: &'a [SymbolPair],
        after: &'a [SymbolPair],
    },
}

/// Sink for [`MergeEvent`]s.
pub trait MergeObserver {
    fn on_merge(&mut self, event: &MergeEvent<'_>);
}

impl<F: FnMut(&MergeEvent<'_>)> MergeObserver for F {
    fn on_merge(&mut self, event: &MergeEvent<'_>) {
        self(event)
    }
}

/// Observer that drops every event.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl MergeObserver for NoObserver {
    fn on_merge(&mut self, _event: &MergeEvent<'_>) {}
}
