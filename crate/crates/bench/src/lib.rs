//! Benchmark fixtures.

use raman_core::RamanParams;

/// Weak-coupling point near the two-photon resonance.
pub fn weak() -> RamanParams {
    RamanParams::new(0.2, 0.5, 1.05, 1.0).unwrap()
}

/// Strong-coupling point, couplings comparable to the detuning.
pub fn strong() -> RamanParams {
    RamanParams::new(0.5, 0.5, 1.1, 1.0).unwrap()
}

/// Uniform `delta1` grid over `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
