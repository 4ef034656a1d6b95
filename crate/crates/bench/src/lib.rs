//! Benchmarks for the twosample crate live under `benches/`.
