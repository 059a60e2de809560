//! Criterion benchmarks for `mdconv`; see `benches/`.
