//! Criterion benchmarks for reconstruction, right-hand-side evaluation and the
//! steady sweep. Run with `cargo bench -p gfweno-bench`.
