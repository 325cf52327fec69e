//! Doubly linked list over a fixed slab of pairs, used by the greedy merge
//! engines. Node ids follow the original order, so comparing ids compares
//! list positions; a Fenwick tree over live nodes recovers the current index.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::channel::SymbolPair;

pub(crate) const NIL: usize = usize::MAX;

pub(crate) struct PairList {
    pub(crate) pairs: Vec<SymbolPair>,
    prev: Vec<usize>,
    next: Vec<usize>,
    alive: Vec<bool>,
    /// Generation stamp per node; heap entries carrying an older stamp are stale.
    pub(crate) gen: Vec<u32>,
    fenwick: Vec<i64>,
    head: usize,
    len: usize,
}

impl PairList {
    pub(crate) fn new(pairs: Vec<SymbolPair>) -> Self {
        let n = pairs.len();
        let prev = (0..n).map(|i| if i == 0 { NIL } else { i - 1 }).collect();
        let next = (0..n).map(|i| if i + 1 == n { NIL } else { i + 1 }).collect();
        let mut fenwick = vec![0i64; n + 1];
        for i in 0..n {
            let mut j = i + 1;
            while j <= n {
                fenwick[j] += 1;
                j += j & j.wrapping_neg();
            }
        }
        PairList {
            pairs,
            prev,
            next,
            alive: vec![true; n],
            gen: vec![0; n],
            fenwick,
            head: if n == 0 { NIL } else { 0 },
            len: n,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn head(&self) -> usize {
        self.head
    }

    pub(crate) fn is_alive(&self, id: usize) -> bool {
        self.alive[id]
    }

    pub(crate) fn next(&self, id: usize) -> usize {
        self.next[id]
    }

    pub(crate) fn prev(&self, id: usize) -> usize {
        self.prev[id]
    }

    /// Ids of `count` consecutive nodes starting at `start`, if that many exist.
    pub(crate) fn window(&self, start: usize, count: usize, out: &mut Vec<usize>) -> bool {
        out.clear();
        let mut id = start;
        while out.len() < count {
            if id == NIL {
                return false;
            }
            out.push(id);
            id = self.next[id];
        }
        true
    }

    /// Current zero-based position of a live node.
    pub(crate) fn position(&self, id: usize) -> usize {
        let mut j = id;
        let mut sum = 0i64;
        while j > 0 {
            sum += self.fenwick[j];
            j -= j & j.wrapping_neg();
        }
        sum as usize
    }

    pub(crate) fn remove(&mut self, id: usize) {
        debug_assert!(self.alive[id]);
        let (p, n) = (self.prev[id], self.next[id]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p] = n;
        }
        if n != NIL {
            self.prev[n] = p;
        }
        self.alive[id] = false;
        self.len -= 1;
        let size = self.alive.len();
        let mut j = id + 1;
        while j <= size {
            self.fenwick[j] -= 1;
            j += j & j.wrapping_neg();
        }
    }

    pub(crate) fn bump(&mut self, id: usize) {
        self.gen[id] = self.gen[id].wrapping_add(1);
    }

    pub(crate) fn live_pairs(&self) -> Vec<SymbolPair> {
        let mut out = Vec::with_capacity(self.len);
        let mut id = self.head;
        while id != NIL {
            out.push(self.pairs[id]);
            id = self.next[id];
        }
        out
    }
}

/// Heap entry for a merge candidate: smallest key first, ties to the
/// smallest node id (leftmost position).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub(crate) key: f64,
    pub(crate) id: usize,
    pub(crate) gen: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed so that `BinaryHeap` pops the minimum
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.id.cmp(&self.id))
    }
}
