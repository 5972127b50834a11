//! Criterion benchmarks for circunit-core live under `benches/`.
