//! Criterion benchmarks for the Riemann and GRP kernels and for single
//! time steps; run with `cargo bench -p radgrp-bench`.
