//! Structural (minimum splitting) and dynamical (maximum transfer) resonance
//! loci of the `delta1 ~ delta2` avoided crossing, and the shift between them.
//!
//! Numerical finders search `delta1` in `[delta2/2, 3 delta2/2]`, which holds
//! the `delta1 = delta2` crossing and excludes the one at `delta1 = 0`.

use crate::dynamics::transfer_supremum;
use crate::error::{Error, Result};
use crate::hamiltonian::{gap32, RamanParams};
use crate::optimize::{bracketed_maximize, bracketed_minimize};

/// Default locus tolerance, in units of `delta2`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Search interval for the numerical finders.
pub fn search_bracket(p: &RamanParams) -> (f64, f64) {
    (0.5 * p.delta2, 1.5 * p.delta2)
}

fn check_couplings(p: &RamanParams) -> Result<()> {
    p.validate()?;
    if p.omega1 * p.omega2 <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega1*omega2",
            reason: "both couplings must be positive to open an avoided crossing".into(),
        });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "tol", reason: format!("{tol} must be positive") })
    }
}

/// `delta1` minimizing the exact splitting `eps3 - eps2`.
pub fn structural_exact(p: &RamanParams, tol: f64) -> Result<f64> {
    check_couplings(p)?;
    check_tol(tol)?;
    let (lo, hi) = search_bracket(p);
    let min = bracketed_minimize(|d1| gap32(&p.with_delta1(d1)), lo, hi, tol * p.delta2)?;
    Ok(min.x)
}

/// Fourth-order expansion of the minimum-splitting locus of the reduced model.
pub fn structural_approx(p: &RamanParams) -> f64 {
    dynamical_approx(p) + shift_approx(p)
}

/// Zero of `delta_eff`: `(delta2 + sqrt(delta2^2 + omega2^2 - omega1^2)) / 2`.
pub fn dynamical_exact_effective(p: &RamanParams) -> Result<f64> {
    let disc = p.delta2 * p.delta2 + p.omega2 * p.omega2 - p.omega1 * p.omega1;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    Ok(0.5 * (p.delta2 + disc.sqrt()))
}

/// `delta1` maximizing the largest attainable `|1> -> |3>` transfer of the full model.
pub fn dynamical_exact_full(p: &RamanParams, tol: f64) -> Result<f64> {
    check_couplings(p)?;
    check_tol(tol)?;
    let (lo, hi) = search_bracket(p);
    let max = bracketed_maximize(|d1| transfer_supremum(&p.with_delta1(d1)), lo, hi, tol * p.delta2)?;
    Ok(max.x)
}

/// Second-plus-fourth order expansion of the `delta_eff = 0` locus.
pub fn dynamical_approx(p: &RamanParams) -> f64 {
    let d2 = p.delta2;
    let diff = p.omega2 * p.omega2 - p.omega1 * p.omega1;
    d2 + diff / (4.0 * d2) - diff * diff / (16.0 * d2 * d2 * d2)
}

/// Lowest-order dynamical shift `omega1^2 omega2^2 / (4 delta2^3)`.
pub fn shift_approx(p: &RamanParams) -> f64 {
    // squaring the product keeps the result exactly symmetric in the couplings
    let prod = p.omega1 * p.omega2;
    prod * prod / (4.0 * p.delta2 * p.delta2 * p.delta2)
}

/// `(structural_exact - dynamical_exact_full, shift_approx)`.
pub fn dynamical_shift(p: &RamanParams, tol: f64) -> Result<(f64, f64)> {
    let s = structural_exact(p, tol)?;
    let d = dynamical_exact_full(p, tol)?;
    Ok((s - d, shift_approx(p)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceReport {
    pub structural_exact: f64,
    pub structural_approx: f64,
    pub dynamical_exact_effective: f64,
    pub dynamical_exact_full: f64,
    pub dynamical_approx: f64,
    pub shift_exact: f64,
    pub shift_approx: f64,
}

impl ResonanceReport {
    pub fn rows(&self) -> [(&'static str, f64); 7] {
        [
            ("structural_exact", self.structural_exact),
            ("structural_approx", self.structural_approx),
            ("dynamical_exact_effective", self.dynamical_exact_effective),
            ("dynamical_exact_full", self.dynamical_exact_full),
            ("dynamical_approx", self.dynamical_approx),
            ("shift_exact", self.shift_exact),
            ("shift_approx", self.shift_approx),
        ]
    }
}

pub fn resonance_report(p: &RamanParams, tol: f64) -> Result<ResonanceReport> {
    let structural_exact = structural_exact(p, tol)?;
    let dynamical_exact_full = dynamical_exact_full(p, tol)?;
    Ok(ResonanceReport {
        structural_exact,
        structural_approx: structural_approx(p),
        dynamical_exact_effective: dynamical_exact_effective(p)?,
        dynamical_exact_full,
        dynamical_approx: dynamical_approx(p),
        shift_exact: structural_exact - dynamical_exact_full,
        shift_approx: shift_approx(p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRow {
    pub ratio: f64,
    pub shift_exact: f64,
    pub shift_approx: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShiftScan {
    pub rows: Vec<ShiftRow>,
    /// Grid points whose loci could not be located, with the reason.
    pub skipped: Vec<(f64, Error)>,
}

/// Exact and lowest-order shift as a function of `omega1 / omega2` at fixed `omega2`.
pub fn shift_scan(omega2: f64, delta2: f64, ratios: &[f64], tol: f64) -> Result<ShiftScan> {
    let base = RamanParams::new(0.0, omega2, delta2, delta2)?;
    if omega2 > 0.6 * delta2 {
        return Err(Error::InvalidParameter { name: "omega2", reason: "must not exceed 0.6 delta2".into() });
    }
    let mut scan = ShiftScan::default();
    for &ratio in ratios {
        if !(ratio > 0.0 && ratio <= 1.5) {
            return Err(Error::InvalidParameter { name: "ratio", reason: format!("{ratio} outside (0, 1.5]") });
        }
        let p = base.with_couplings(ratio * omega2, omega2);
        match dynamical_shift(&p, tol) {
            Ok((shift_exact, shift_approx)) => scan.rows.push(ShiftRow { ratio, shift_exact, shift_approx }),
            Err(e) => scan.skipped.push((ratio, e)),
        }
    }
    Ok(scan)
}
