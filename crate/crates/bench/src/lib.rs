//! Criterion benchmarks for the `trisplit` crate; see `benches/`.
