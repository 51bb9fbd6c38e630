//! Criterion benchmarks for `rpq-core`. See `benches/`.
