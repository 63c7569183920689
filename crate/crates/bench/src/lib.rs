//! Criterion benchmarks for `mlia`; see `benches/`.
