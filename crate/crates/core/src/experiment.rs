//! Alkali-atom numbers for the optical Raman and microwave settings.
//!
//! Conventions: hyperfine energies, shifts and bounds are ordinary frequencies
//! in Hz; drive parameters passed in are angular frequencies in rad/s; the
//! scattering rate uses an angular decay rate `2 pi gamma_hz` and comes out in
//! events per second.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hamiltonian::RamanParams;
use crate::resonance::shift_approx;

/// Scattering-to-shift ratio (both angular) above which the shift is considered unresolvable.
pub const BROADENING_RATIO_MAX: f64 = 0.1;

pub const SECONDARY_SHIFTS_NOTE: &str = "cross-coupling ac-Stark and Bloch-Siegert shifts are not \
computed; each is smaller than the lowest-order shift by about the ratio of the drive detuning \
to the detuning from the far-off-resonant transition (about 1e-4 in the microwave setting)";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlkaliSpec {
    /// Zero-field ground hyperfine splitting, Hz.
    pub hfs_splitting: f64,
    pub nuclear_spin: f64,
    pub g_j: f64,
    pub g_i: f64,
    /// Excited-state linewidth `Gamma / 2 pi`, Hz.
    pub gamma_excited: Option<f64>,
    /// Bohr magneton over Planck constant, Hz/G.
    pub bohr_magneton_over_h: f64,
}

impl AlkaliSpec {
    pub fn rb87() -> Self {
        Self {
            hfs_splitting: 6.835e9,
            nuclear_spin: 1.5,
            g_j: 2.0023,
            g_i: -0.000995,
            gamma_excited: Some(6.1e6),
            bohr_magneton_over_h: 1.3996e6,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "rb87" => Some(Self::rb87()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let two_i = 2.0 * self.nuclear_spin;
        if !(two_i >= 1.0 && two_i.fract() == 0.0) {
            return Err(Error::InvalidParameter { name: "nuclear_spin", reason: format!("{} is not a positive multiple of 1/2", self.nuclear_spin) });
        }
        for (name, v) in [("hfs_splitting", self.hfs_splitting), ("bohr_magneton_over_h", self.bohr_magneton_over_h)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("{v} must be positive") });
            }
        }
        if !(self.g_j.is_finite() && self.g_i.is_finite()) {
            return Err(Error::InvalidParameter { name: "g_j/g_i", reason: "must be finite".into() });
        }
        if let Some(g) = self.gamma_excited {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter { name: "gamma_excited", reason: format!("{g} must be >= 0") });
            }
        }
        Ok(())
    }

    /// `1 / (I + 1/2)`.
    pub fn chi(&self) -> f64 {
        1.0 / (self.nuclear_spin + 0.5)
    }
}

/// Field of the first-order field-insensitive point, Gauss.
pub fn bias_field(spec: &AlkaliSpec) -> Result<f64> {
    spec.validate()?;
    let dg = spec.g_j - spec.g_i;
    if dg == 0.0 {
        return Err(Error::SingularBias);
    }
    Ok(spec.chi() * spec.hfs_splitting / (spec.bohr_magneton_over_h * dg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splittings {
    pub delta_e31: f64,
    pub delta_e23: f64,
    pub delta_e21: f64,
    /// `chi = 1`: levels 1 and 3 coincide.
    pub degenerate: bool,
}

/// Transition frequencies at the bias field, Hz. `g_i` enters with its own sign.
pub fn splittings(spec: &AlkaliSpec) -> Result<Splittings> {
    let b = bias_field(spec)?;
    let chi = spec.chi();
    let delta_e31 = (1.0 - chi * chi).max(0.0).sqrt() * spec.hfs_splitting;
    let delta_e23 = spec.g_i * spec.bohr_magneton_over_h * b
        + 0.5 * spec.hfs_splitting * ((1.0 + chi * chi).sqrt() - (1.0 - chi * chi).max(0.0).sqrt());
    Ok(Splittings { delta_e31, delta_e23, delta_e21: delta_e31 + delta_e23, degenerate: delta_e31 == 0.0 })
}

/// Off-resonant scattering rate `Gamma (omega1^2 + omega2^2) / (8 delta1^2)` in s^-1,
/// with angular inputs.
pub fn scattering_rate(spec: &AlkaliSpec, omega1: f64, omega2: f64, delta1: f64) -> Result<f64> {
    let gamma = spec.gamma_excited.ok_or(Error::MissingDecayRate)?;
    if delta1 == 0.0 {
        return Err(Error::InvalidParameter { name: "delta1", reason: "must be nonzero".into() });
    }
    Ok(2.0 * PI * gamma * (omega1 * omega1 + omega2 * omega2) / (8.0 * delta1 * delta1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Two-photon Raman through the excited state; spontaneous scattering applies.
    Optical,
    /// Magnetic-dipole couplings within the ground manifold; no scattering.
    Microwave,
}

impl Scenario {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "optical" => Some(Self::Optical),
            "microwave" => Some(Self::Microwave),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Optical => "optical",
            Self::Microwave => "microwave",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub scenario: Scenario,
    pub bias_field: f64,
    pub splittings: Splittings,
    /// Lowest-order dynamical shift, Hz.
    pub dynamical_shift: f64,
    /// `2 pi / Delta_D`, seconds.
    pub probe_time_bound: f64,
    /// `omega1^2 omega2^2 / (2 delta2^3)` as an ordinary frequency, Hz.
    pub probe_rabi_bound: f64,
    /// Probe Rabi frequency (Hz) at which the peak height `omega_p^2 t^2 / 4`
    /// reaches one for `t = 2 pi / Delta_D`.
    pub probe_rabi_bound_at_time_bound: f64,
    /// Optical scenario only, s^-1.
    pub scattering_rate: Option<f64>,
    /// `scattering_rate / Delta_D` with `Delta_D` angular; dimensionless.
    pub broadening_ratio: Option<f64>,
    pub feasible: bool,
    pub note: &'static str,
}

/// Feasibility summary for drive strengths and detuning given in rad/s.
/// The scattering rate is evaluated at `delta1 = delta2`.
pub fn scenario_report(spec: &AlkaliSpec, scenario: Scenario, omega1: f64, omega2: f64, delta2: f64) -> Result<ExperimentReport> {
    let params = RamanParams::new(omega1, omega2, delta2, delta2)?;
    let bias_field = bias_field(spec)?;
    let splittings = splittings(spec)?;
    let shift_angular = shift_approx(&params);
    let dynamical_shift = shift_angular / (2.0 * PI);
    let probe_time_bound = 1.0 / dynamical_shift;
    let probe_rabi_bound = 2.0 * dynamical_shift;
    let probe_rabi_bound_at_time_bound = dynamical_shift / PI;
    let (scattering_rate, broadening_ratio) = match scenario {
        Scenario::Optical => {
            let r = scattering_rate(spec, omega1, omega2, delta2)?;
            (Some(r), Some(r / shift_angular))
        }
        Scenario::Microwave => (None, None),
    };
    let feasible = broadening_ratio.map_or(true, |r| r <= BROADENING_RATIO_MAX);
    Ok(ExperimentReport {
        scenario,
        bias_field,
        splittings,
        dynamical_shift,
        probe_time_bound,
        probe_rabi_bound,
        probe_rabi_bound_at_time_bound,
        scattering_rate,
        broadening_ratio,
        feasible,
        note: SECONDARY_SHIFTS_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = 2.0 * PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn rb87_bias_and_splittings() {
        let spec = AlkaliSpec::rb87();
        assert!(rel(bias_field(&spec).unwrap(), 1219.0) < 0.005);
        let s = splittings(&spec).unwrap();
        assert!(rel(s.delta_e31, 5.919e9) < 0.005);
        assert!(rel(s.delta_e23, 860e6) < 0.01);
        assert!(rel(s.delta_e21, 6.779e9) < 0.005);
        assert_eq!(s.delta_e21, s.delta_e31 + s.delta_e23);
        assert!(!s.degenerate);
    }

    #[test]
    fn bias_field_limits() {
        let spec = AlkaliSpec::rb87();
        let doubled = AlkaliSpec { hfs_splitting: 2.0 * spec.hfs_splitting, ..spec };
        assert!(rel(bias_field(&doubled).unwrap(), 2.0 * bias_field(&spec).unwrap()) < 1e-15);
        let big_i = AlkaliSpec { nuclear_spin: 1e9 + 0.5, ..spec };
        assert!(bias_field(&big_i).unwrap() < 1e-5);
        let singular = AlkaliSpec { g_i: spec.g_j, ..spec };
        assert_eq!(bias_field(&singular), Err(Error::SingularBias));
    }

    #[test]
    fn spin_half_is_degenerate() {
        let spec = AlkaliSpec { nuclear_spin: 0.5, ..AlkaliSpec::rb87() };
        let s = splittings(&spec).unwrap();
        assert_eq!(s.delta_e31, 0.0);
        assert!(s.degenerate);
    }

    #[test]
    fn invalid_spin() {
        let spec = AlkaliSpec { nuclear_spin: 0.7, ..AlkaliSpec::rb87() };
        assert!(bias_field(&spec).is_err());
        assert!(AlkaliSpec::preset("cs133").is_none());
        assert_eq!(AlkaliSpec::preset("Rb87"), Some(AlkaliSpec::rb87()));
    }

    #[test]
    fn scattering_rates() {
        let spec = AlkaliSpec::rb87();
        let o = TWO_PI * 200e6;
        assert!(rel(scattering_rate(&spec, o, o, TWO_PI * 10e9).unwrap(), 3.8e3) < 0.05);
        assert!(rel(scattering_rate(&spec, o, o, TWO_PI * 100e9).unwrap(), 38.0) < 0.05);
        assert_eq!(scattering_rate(&spec, 0.0, 0.0, 1.0).unwrap(), 0.0);
        let no_gamma = AlkaliSpec { gamma_excited: None, ..spec };
        assert_eq!(scattering_rate(&no_gamma, o, o, 1.0), Err(Error::MissingDecayRate));
    }

    #[test]
    fn optical_reports_infeasible() {
        let spec = AlkaliSpec::rb87();
        let o = TWO_PI * 200e6;
        let near = scenario_report(&spec, Scenario::Optical, o, o, TWO_PI * 10e9).unwrap();
        assert!(rel(near.dynamical_shift, 400.0) < 1e-12);
        assert!(!near.feasible);
        let far = scenario_report(&spec, Scenario::Optical, o, o, TWO_PI * 100e9).unwrap();
        assert!(rel(far.dynamical_shift, 0.4) < 1e-12);
        assert!(!far.feasible);
        assert!(far.broadening_ratio.unwrap() > near.broadening_ratio.unwrap());
    }

    #[test]
    fn microwave_report() {
        let o = TWO_PI * 300e3;
        let r = scenario_report(&AlkaliSpec::rb87(), Scenario::Microwave, o, o, TWO_PI * 1e6).unwrap();
        assert!(rel(r.dynamical_shift, 2025.0) < 1e-12);
        assert!(rel(r.probe_time_bound, 1.0 / 2025.0) < 1e-12);
        assert!(rel(r.probe_rabi_bound, 4050.0) < 1e-12);
        assert!(r.probe_rabi_bound_at_time_bound < 1e3);
        assert!(r.scattering_rate.is_none() && r.feasible);
        // a microwave report does not need a decay rate
        let spec = AlkaliSpec { gamma_excited: None, ..AlkaliSpec::rb87() };
        assert!(scenario_report(&spec, Scenario::Microwave, o, o, TWO_PI * 1e6).is_ok());
        assert!(scenario_report(&spec, Scenario::Optical, o, o, TWO_PI * 1e6).is_err());
    }

    #[test]
    fn verdict_is_unit_invariant() {
        // all-ordinary-frequency arithmetic gives the same broadening ratio
        let spec = AlkaliSpec::rb87();
        let (o, d) = (200e6, 10e9);
        let rate_hz = spec.gamma_excited.unwrap() * 2.0 * o * o / (8.0 * d * d);
        let shift_hz = shift_approx(&RamanParams::new(o, o, d, d).unwrap());
        let r = scenario_report(&spec, Scenario::Optical, TWO_PI * o, TWO_PI * o, TWO_PI * d).unwrap();
        assert!(rel(r.broadening_ratio.unwrap(), rate_hz / shift_hz) < 1e-12);
        assert!(rel(r.dynamical_shift, shift_hz) < 1e-12);
    }

    #[test]
    fn scenario_names() {
        assert_eq!(Scenario::parse("Optical"), Some(Scenario::Optical));
        assert_eq!(Scenario::parse("microwave").unwrap().name(), "microwave");
        assert!(Scenario::parse("radio").is_none());
    }
}
