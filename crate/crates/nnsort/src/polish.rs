//! Final-phase polish: compact the sparse runs produced by the mapping
//! iterations, correct mis-ordered keys by insertion, and merge everything
//! with the sorted conflict array into the exact output.

use crate::types::{Key, OpCounters};

/// A run with the empty slots removed.
///
/// `out_of_order_count` is the number of keys that sit below the running
/// maximum of the keys before them; those are exactly the keys the merge has
/// to correct by insertion instead of appending.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactedRun {
    pub keys: Vec<Key>,
    pub out_of_order_count: u64,
}

impl CompactedRun {
    /// Mis-ordered fraction of the run (0 for an empty run).
    pub fn out_of_order_rate(&self) -> f64 {
        self.out_of_order_count as f64 / self.keys.len().max(1) as f64
    }
}

/// Drops empty slots, preserving slot order. One move per kept key.
pub fn compact(slots: &[Option<Key>], counters: &mut OpCounters) -> CompactedRun {
    let mut keys = Vec::new();
    let mut out_of_order = 0u64;
    let mut running_max: Option<Key> = None;
    for slot in slots {
        if let Some(key) = slot {
            counters.record_moves(1);
            match running_max {
                Some(max) if *key < max => out_of_order += 1,
                _ => running_max = Some(*key),
            }
            keys.push(*key);
        }
    }
    CompactedRun { keys, out_of_order_count: out_of_order }
}

/// Count of keys below the running maximum of their predecessors.
/// Same rule as `compact`, usable on any dense key sequence.
pub fn count_out_of_order(keys: &[Key]) -> u64 {
    let mut count = 0u64;
    let mut running_max: Option<Key> = None;
    for key in keys {
        match running_max {
            Some(max) if *key < max => count += 1,
            _ => running_max = Some(*key),
        }
    }
    count
}

/// Merges one roughly-ordered run with an already-sorted array.
///
/// Keys that keep up with the run's running maximum are consumed by the
/// ordinary two-finger merge (one comparison, one move each); keys that fall
/// behind it are placed by binary-search insertion into the result built so
/// far. Ties between the run and `w` take from `w` first.
///
/// Returns the sorted union and the number of insertions performed.
pub fn merge_one(run: &CompactedRun, w: &[Key], counters: &mut OpCounters) -> (Vec<Key>, u64) {
    let keys = &run.keys;
    let mut result: Vec<Key> = Vec::with_capacity(keys.len() + w.len());
    let mut insertions = 0u64;
    let mut broom: Option<Key> = None;
    let mut i = 0;
    let mut j = 0;

    let is_in_order = |key: Key, broom: &Option<Key>, counters: &mut OpCounters| match broom {
        None => true,
        Some(max) => {
            counters.record_comparisons(1);
            key >= *max
        }
    };

    while i < keys.len() && j < w.len() {
        let a = keys[i];
        if !is_in_order(a, &broom, counters) {
            insert_sorted(&mut result, a, counters);
            insertions += 1;
            i += 1;
            continue;
        }
        counters.record_comparisons(1);
        if w[j] <= a {
            counters.record_moves(1);
            result.push(w[j]);
            j += 1;
        } else {
            counters.record_moves(1);
            result.push(a);
            broom = Some(a);
            i += 1;
        }
    }
    while i < keys.len() {
        let a = keys[i];
        if is_in_order(a, &broom, counters) {
            counters.record_moves(1);
            result.push(a);
            broom = Some(a);
        } else {
            insert_sorted(&mut result, a, counters);
            insertions += 1;
        }
        i += 1;
    }
    while j < w.len() {
        counters.record_moves(1);
        result.push(w[j]);
        j += 1;
    }

    (result, insertions)
}

/// Folds `merge_one` over the runs in order, threading the result as the
/// sorted side of the next merge. `w` must be sorted.
pub fn merge(
    runs: &[Vec<Option<Key>>],
    w: Vec<Key>,
    counters: &mut OpCounters,
) -> (Vec<Key>, u64) {
    let mut acc = w;
    let mut insertions = 0u64;
    for slots in runs {
        let run = compact(slots, counters);
        let (next, ins) = merge_one(&run, &acc, counters);
        insertions += ins;
        acc = next;
    }
    (acc, insertions)
}

// Binary-search insertion; the block move is charged as insert shifts.
fn insert_sorted(result: &mut Vec<Key>, key: Key, counters: &mut OpCounters) {
    let mut lo = 0;
    let mut hi = result.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        counters.record_comparisons(1);
        if result[mid] <= key {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    counters.record_insert_shifts((result.len() - lo) as u64);
    counters.record_moves(1);
    result.insert(lo, key);
}
