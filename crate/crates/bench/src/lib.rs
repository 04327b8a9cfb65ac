//! Benchmark-only crate; see `benches/resolution.rs`.
