//! Reference sorters. They serve two roles: correctness oracles for the
//! model-guided path, and instrumented comparison subjects for the benchmark
//! matrix. A comparison is one unit, a moved key is one unit (so a swap
//! charges two moves).

use crate::model::Predictor;
use crate::polish;
use crate::sort::map_iteration;
use crate::types::{Key, OpCounters};

const QUICKSORT_SMALL_CUTOFF: usize = 12;

/// In-place quicksort, median-of-three pivot, insertion sort below a small
/// cutoff, recursion always on the smaller side.
pub fn quicksort(keys: &mut [Key], counters: &mut OpCounters) {
    let mut lo = 0usize;
    let mut hi = keys.len();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    loop {
        while hi - lo > QUICKSORT_SMALL_CUTOFF {
            let p = partition(keys, lo, hi, counters);
            // Recurse into the smaller half, loop on the larger one.
            if p - lo < hi - p {
                stack.push((p, hi));
                hi = p;
            } else {
                stack.push((lo, p));
                lo = p;
            }
        }
        insertion_sort(&mut keys[lo..hi], counters);
        match stack.pop() {
            Some((l, h)) => {
                lo = l;
                hi = h;
            }
            None => break,
        }
    }
}

// Hoare partition over keys[lo..hi); returns the split point in (lo, hi).
fn partition(keys: &mut [Key], lo: usize, hi: usize, counters: &mut OpCounters) -> usize {
    let mid = lo + (hi - lo) / 2;
    let pivot = median_of_three(keys[lo], keys[mid], keys[hi - 1], counters);
    let mut i = lo.wrapping_sub(1);
    let mut j = hi;
    loop {
        loop {
            i = i.wrapping_add(1);
            counters.record_comparisons(1);
            if keys[i] >= pivot {
                break;
            }
        }
        loop {
            j -= 1;
            counters.record_comparisons(1);
            if keys[j] <= pivot {
                break;
            }
        }
        if i >= j {
            return j + 1;
        }
        keys.swap(i, j);
        counters.record_moves(2);
    }
}

fn median_of_three(a: Key, b: Key, c: Key, counters: &mut OpCounters) -> Key {
    counters.record_comparisons(3);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if c <= lo {
        lo
    } else if c >= hi {
        hi
    } else {
        c
    }
}

fn insertion_sort(keys: &mut [Key], counters: &mut OpCounters) {
    for i in 1..keys.len() {
        let current = keys[i];
        let mut j = i;
        while j > 0 {
            counters.record_comparisons(1);
            if keys[j - 1] <= current {
                break;
            }
            keys[j] = keys[j - 1];
            counters.record_moves(1);
            j -= 1;
        }
        if j != i {
            keys[j] = current;
            counters.record_moves(1);
        }
    }
}

/// Heapsort with bottom-up sift-down.
pub fn heapsort(keys: &mut [Key], counters: &mut OpCounters) {
    let n = keys.len();
    if n < 2 {
        return;
    }
    for i in (0..n / 2).rev() {
        sift_down(keys, i, n, counters);
    }
    for end in (1..n).rev() {
        keys.swap(0, end);
        counters.record_moves(2);
        sift_down(keys, 0, end, counters);
    }
}

fn sift_down(keys: &mut [Key], start: usize, end: usize, counters: &mut OpCounters) {
    let mut root = start;
    loop {
        let left = 2 * root + 1;
        if left >= end {
            break;
        }
        let mut child = left;
        if left + 1 < end {
            counters.record_comparisons(1);
            if keys[left + 1] > keys[left] {
                child = left + 1;
            }
        }
        counters.record_comparisons(1);
        if keys[root] >= keys[child] {
            break;
        }
        keys.swap(root, child);
        counters.record_moves(2);
        root = child;
    }
}

/// Top-down mergesort with one scratch buffer.
pub fn mergesort(keys: &mut [Key], counters: &mut OpCounters) {
    if keys.len() < 2 {
        return;
    }
    let mut scratch = keys.to_vec();
    counters.record_moves(keys.len() as u64);
    msort(keys, &mut scratch, counters);
}

fn msort(keys: &mut [Key], scratch: &mut [Key], counters: &mut OpCounters) {
    let n = keys.len();
    if n < 2 {
        return;
    }
    let mid = n / 2;
    msort(&mut scratch[..mid], &mut keys[..mid], counters);
    msort(&mut scratch[mid..], &mut keys[mid..], counters);
    let (mut i, mut j) = (0, mid);
    for slot in keys.iter_mut() {
        let take_left = if i < mid && j < n {
            counters.record_comparisons(1);
            scratch[i] <= scratch[j]
        } else {
            i < mid
        };
        if take_left {
            *slot = scratch[i];
            i += 1;
        } else {
            *slot = scratch[j];
            j += 1;
        }
        counters.record_moves(1);
    }
}

/// One mapping pass through the predictor, quicksort on whatever collided,
/// then the usual polish merge. The comparison-point baseline for the
/// iterative sort: same model, exactly one shot.
pub fn single_pass_learned_sort(
    input: &[Key],
    predictor: &dyn Predictor,
    m: f64,
) -> (Vec<Key>, f64, OpCounters) {
    let mut counters = OpCounters::default();
    if input.is_empty() {
        return (Vec::new(), 0.0, counters);
    }
    let (run, mut conflicts, metrics) = map_iteration(input, predictor, m, 0, &mut counters);
    quicksort(&mut conflicts, &mut counters);
    let (sorted, _) = polish::merge(&[run], conflicts, &mut counters);
    (sorted, metrics.sigma, counters)
}
