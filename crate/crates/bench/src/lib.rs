//! Criterion benchmarks for the simulation kernels live under `benches/`.
