//! Degrading alphabet reduction: pairwise merges of neighbouring symbols.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;

use crate::channel::{capacity_term, BmsChannel, SymbolPair};
use crate::list::{Candidate, PairList, NIL};
use crate::{Error, MergeEvent, MergeObserver, NoObserver};

/// One executed degrading merge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradeMergeRecord {
    /// Position of the first of the two merged neighbours.
    pub index: usize,
    pub pre_capacity: f64,
    pub post_capacity: f64,
}

/// Capacity lost by summing two pairs into one.
pub fn merge_loss(p: &SymbolPair, q: &SymbolPair) -> f64 {
    p.capacity_term() + q.capacity_term() - capacity_term(p.a + q.a, p.b + q.b)
}

/// Replaces pairs `i` and `i + 1` by their component-wise sum.
pub fn merge_degrade_pair(ch: &BmsChannel, i: usize) -> Result<BmsChannel, Error> {
    let n = ch.pair_count();
    if i + 1 >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    let pairs = ch.pairs();
    let mut out = Vec::with_capacity(n - 1);
    out.extend_from_slice(&pairs[..i]);
    out.push(SymbolPair::new(pairs[i].a + pairs[i + 1].a, pairs[i].b + pairs[i + 1].b));
    out.extend_from_slice(&pairs[i + 2..]);
    Ok(BmsChannel::from_raw_unchecked(out, false))
}

/// Greedily merges neighbours until at most `mu` output symbols remain.
///
/// `mu` counts symbols, so the result has at most `mu / 2` pairs. Each step
/// merges the neighbours whose merge loses the least capacity; ties go to
/// the leftmost position.
pub fn degrading_merge(ch: &BmsChannel, mu: usize) -> Result<BmsChannel, Error> {
    degrading_merge_observed(ch, mu, &mut NoObserver)
}

pub fn degrading_merge_observed(
    ch: &BmsChannel,
    mu: usize,
    observer: &mut dyn MergeObserver,
) -> Result<BmsChannel, Error> {
    if mu < 2 {
        return Err(Error::InvalidAlphabetBound(mu));
    }
    let target = mu / 2;
    if ch.pair_count() <= target {
        return Ok(ch.clone());
    }

    let mut list = PairList::new(ch.pairs().to_vec());
    let mut heap = BinaryHeap::with_capacity(2 * list.len());
    let push = |list: &PairList, heap: &mut BinaryHeap<Candidate>, id: usize| {
        let nx = list.next(id);
        if nx != NIL {
            heap.push(Candidate {
                key: merge_loss(&list.pairs[id], &list.pairs[nx]),
                id,
                gen: list.gen[id],
            });
        }
    };
    for id in 0..list.len() {
        push(&list, &mut heap, id);
    }

    let mut capacity = ch.capacity();
    while list.len() > target {
        let Some(c) = heap.pop() else { break };
        if !list.is_alive(c.id) || list.gen[c.id] != c.gen || list.next(c.id) == NIL {
            continue;
        }
        let left = c.id;
        let right = list.next(left);
        let before = [list.pairs[left], list.pairs[right]];
        let index = list.position(left);
        let merged = SymbolPair::new(before[0].a + before[1].a, before[0].b + before[1].b);
        list.pairs[left] = merged;
        list.remove(right);
        list.bump(left);
        let record = DegradeMergeRecord {
            index,
            pre_capacity: capacity,
            post_capacity: capacity - c.key,
        };
        capacity = record.post_capacity;
        observer.on_merge(&MergeEvent::Degrade { record: &record, before, after: merged });

        push(&list, &mut heap, left);
        let p = list.prev(left);
        if p != NIL {
            list.bump(p);
            push(&list, &mut heap, p);
        }
    }
    Ok(BmsChannel::from_sorted_unchecked(list.live_pairs()))
}

/// Checks a degrading merge against its deterministic witness: pair
/// `index` of `q` must be the sum of pairs `index`, `index + 1` of `w`, and
/// all other pairs must carry over unchanged. Returns the maximum residual.
pub fn verify_degrade_witness(
    w: &BmsChannel,
    q: &BmsChannel,
    record: &DegradeMergeRecord,
) -> Result<f64, Error> {
    let (wp, qp) = (w.pairs(), q.pairs());
    let i = record.index;
    if qp.len() + 1 != wp.len() || i + 1 >= wp.len() {
        return Err(Error::RecordMismatch);
    }
    let mut residual: f64 = 0.0;
    let mut check = |x: &SymbolPair, y: &SymbolPair| {
        residual = residual.max((x.a - y.a).abs()).max((x.b - y.b).abs());
    };
    for k in 0..i {
        check(&wp[k], &qp[k]);
    }
    let sum = SymbolPair::new(wp[i].a + wp[i + 1].a, wp[i].b + wp[i + 1].b);
    check(&sum, &qp[i]);
    for k in i + 1..qp.len() {
        check(&wp[k + 1], &qp[k]);
    }
    Ok(residual)
}
