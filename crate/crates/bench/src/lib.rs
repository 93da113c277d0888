//! Criterion benchmarks for `cohent-core`; see `benches/`.
