//! Criterion benchmarks for the transform, kernel and Hermite hot paths;
//! run with `cargo bench -p pharmonic-bench`.
