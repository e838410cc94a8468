//! Benchmarks for `laminar-core` live in `benches/`; run them with
//! `cargo bench -p laminar-bench`.
