//! Criterion benchmarks for `ssloc-core` live in `benches/`.
//!
//! Run them with `cargo bench -p ssloc-bench`.
