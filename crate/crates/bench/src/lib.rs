//! Criterion benchmarks for the `ahomotopy` kernels live in `benches/`.
