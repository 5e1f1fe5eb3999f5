//! Wall-clock comparison of the model-guided sort against the comparison
//! baselines, per distribution.
//!
//! `cargo bench -p nnsort-bench` for full measurements; sizes are desk-scale
//! so the suite stays in the seconds range.

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use nnsort::baselines::{heapsort, mergesort, quicksort, single_pass_learned_sort};
use nnsort::sort::nn_sort;
use nnsort::types::{OpCounters, SortConfig};
use nnsort_bench::{dataset, distributions, fitted_model};
use std::hint::black_box;

const SIZES: &[usize] = &[10_000, 100_000];

fn bench_sorters(c: &mut Criterion) {
    for (dist_name, dist) in distributions() {
        let model = fitted_model(dist, 50_000);
        let mut group = c.benchmark_group(format!("sort/{dist_name}"));
        group.sample_size(10);
        for &n in SIZES {
            let input = dataset(dist, n);
            group.throughput(Throughput::Elements(n as u64));

            group.bench_with_input(BenchmarkId::new("quicksort", n), &input, |b, input| {
                b.iter_batched_ref(
                    || input.clone(),
                    |data| {
                        let mut counters = OpCounters::default();
                        quicksort(data, &mut counters);
                        black_box(counters);
                    },
                    BatchSize::LargeInput,
                )
            });
            group.bench_with_input(BenchmarkId::new("heapsort", n), &input, |b, input| {
                b.iter_batched_ref(
                    || input.clone(),
                    |data| {
                        let mut counters = OpCounters::default();
                        heapsort(data, &mut counters);
                        black_box(counters);
                    },
                    BatchSize::LargeInput,
                )
            });
            group.bench_with_input(BenchmarkId::new("mergesort", n), &input, |b, input| {
                b.iter_batched_ref(
                    || input.clone(),
                    |data| {
                        let mut counters = OpCounters::default();
                        mergesort(data, &mut counters);
                        black_box(counters);
                    },
                    BatchSize::LargeInput,
                )
            });
            group.bench_with_input(BenchmarkId::new("single_pass", n), &input, |b, input| {
                b.iter(|| black_box(single_pass_learned_sort(black_box(input), &model, 2.0)))
            });
            group.bench_with_input(BenchmarkId::new("nn_sort", n), &input, |b, input| {
                let cfg = SortConfig::default();
                b.iter(|| black_box(nn_sort(black_box(input), &model, &cfg)))
            });
        }
        group.finish();
    }
}

criterion_group!(benches, bench_sorters);
criterion_main!(benches);
