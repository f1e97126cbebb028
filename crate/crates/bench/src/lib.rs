//! Criterion benchmarks for body assembly live in `benches/`.
