//! Benchmark-only crate; see `benches/quotients.rs`.
