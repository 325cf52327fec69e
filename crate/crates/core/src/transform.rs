//! One-step polarization transforms of a BMS channel.

use alloc::vec::Vec;

use crate::channel::{BmsChannel, SymbolPair};

/// Which half of the polarization step to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// Check-node transform, producing the worse channel `W_{2i}`.
    Minus,
    /// Bit-node transform, producing the better channel `W_{2i+1}`.
    Plus,
}

impl TransformKind {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            TransformKind::Plus
        } else {
            TransformKind::Minus
        }
    }
}

/// Applies one polarization step.
///
/// For every ordered pair of input pairs `(a, b)`, `(c, d)`:
///
/// * minus: outputs `(y1, y2)` pair up as `(y1, y2) ~ (y1', y2)`, giving the
///   pair `(ac + bd, ad + bc)` once both conjugate classes are summed;
/// * plus: outputs `(y1, y2, u1)` give the pairs `(ac, bd)` and `(ad, bc)`.
///
/// The result is canonicalized with equal likelihood ratios merged and empty
/// pairs dropped.
pub fn transform(ch: &BmsChannel, kind: TransformKind) -> BmsChannel {
    let pairs = ch.pairs();
    let k = pairs.len();
    let raw = match kind {
        TransformKind::Minus => {
            let mut raw = Vec::with_capacity(k * k);
            for p in pairs {
                for q in pairs {
                    raw.push(SymbolPair::new(p.a * q.a + p.b * q.b, p.a * q.b + p.b * q.a));
                }
            }
            raw
        }
        TransformKind::Plus => {
            let mut raw = Vec::with_capacity(2 * k * k);
            for p in pairs {
                for q in pairs {
                    raw.push(SymbolPair::new(p.a * q.a, p.b * q.b));
                    raw.push(SymbolPair::new(p.a * q.b, p.b * q.a));
                }
            }
            raw
        }
    };
    BmsChannel::from_raw_unchecked(raw, true)
}
