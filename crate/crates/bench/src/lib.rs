//! Benchmarks live in `benches/`; run them with `cargo bench -p sl2rep-bench`.
