//! Shared inputs for the criterion benchmarks.

use gmlife_core::{Age, GmParams, Rate};

/// Mortality basis with `α = 0.001`, `β = 0.000012`, `γ = 0.101314`.
pub fn reference_basis() -> GmParams {
    GmParams::new(0.001, 0.000_012, 0.101_314).expect("valid basis")
}

pub fn reference_rate() -> Rate {
    Rate::new(0.026_559).expect("valid rate")
}

/// Integer ages `0..=100`.
pub fn age_grid() -> Vec<Age> {
    (0..=100)
        .map(|x| Age::new(x as f64).expect("valid age"))
        .collect()
}
