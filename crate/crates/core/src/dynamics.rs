//! Exact time evolution of the probeless system and the reduced-model transfer formula.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::effective::eliminate;
use crate::error::{Error, Result};
use crate::hamiltonian::{dressed_spectrum, DressedSpectrum, RamanParams};
use crate::optimize::brent_minimize;

/// Accepted deviation of the initial norm from one.
pub const NORM_TOL: f64 = 1e-6;

/// Minimum grid size of the transfer envelope scan.
pub const ENVELOPE_MIN_POINTS: usize = 400;

/// Samples per period of the fastest Bohr frequency in the envelope scan.
const ENVELOPE_SAMPLES_PER_PERIOD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub amplitudes: [Complex64; 3],
}

impl StateVector {
    pub fn new(amplitudes: [Complex64; 3]) -> Self {
        Self { amplitudes }
    }

    pub fn bare(n: usize) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); 3];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn from_real(v: [f64; 3]) -> Self {
        Self { amplitudes: v.map(|x| Complex64::new(x, 0.0)) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn population(&self, n: usize) -> f64 {
        self.amplitudes[n].norm_sqr()
    }

    /// `<other|self>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        (0..3).map(|i| other.amplitudes[i].conj() * self.amplitudes[i]).sum()
    }

    /// `<psi|H|psi>` for a real symmetric `H`.
    pub fn expectation(&self, h: &[[f64; 3]; 3]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += self.amplitudes[i].conj() * h[i][j] * self.amplitudes[j];
            }
        }
        acc.re
    }
}

/// Spectral propagator `exp(-iHt)` of the time-independent Hamiltonian.
#[derive(Debug, Clone, Copy)]
pub struct Propagator {
    spectrum: DressedSpectrum,
}

impl Propagator {
    pub fn new(p: &RamanParams) -> Self {
        Self { spectrum: dressed_spectrum(p) }
    }

    pub fn spectrum(&self) -> &DressedSpectrum {
        &self.spectrum
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> StateVector {
        let s = &self.spectrum;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for k in 0..3 {
            let v = &s.states[k];
            let proj: Complex64 = (0..3).map(|n| psi.amplitudes[n] * v[n]).sum();
            let phase = Complex64::from_polar(1.0, -s.energies[k] * t) * proj;
            for n in 0..3 {
                out[n] += phase * v[n];
            }
        }
        StateVector { amplitudes: out }
    }

    /// Spectral weights `a_k = <3|eps_k><eps_k|1>` of the `|1> -> |3>` amplitude.
    pub fn transfer_weights(&self) -> [f64; 3] {
        std::array::from_fn(|k| self.spectrum.states[k][2] * self.spectrum.states[k][0])
    }

    /// `|<3|exp(-iHt)|1>|^2`.
    pub fn p13(&self, t: f64) -> f64 {
        let a = self.transfer_weights();
        (0..3)
            .map(|k| Complex64::from_polar(a[k], -self.spectrum.energies[k] * t))
            .sum::<Complex64>()
            .norm_sqr()
    }
}

pub fn evolve(p: &RamanParams, psi0: &StateVector, t: f64) -> Result<StateVector> {
    let n = psi0.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n));
    }
    Ok(Propagator::new(p).evolve(psi0, t))
}

/// Reduced-model Rabi formula for the `|1> -> |3>` probability.
pub fn p13_effective(p: &RamanParams, t: f64) -> Result<f64> {
    let m = eliminate(p)?;
    let r2 = m.delta_eff * m.delta_eff + m.omega_eff * m.omega_eff;
    if r2 == 0.0 {
        return Ok(0.0);
    }
    Ok(m.omega_eff * m.omega_eff / r2 * (t * r2.sqrt()).sin().powi(2))
}

/// Exact `|<3|exp(-iHt)|1>|^2`.
pub fn p13_full(p: &RamanParams, t: f64) -> f64 {
    Propagator::new(p).p13(t)
}

/// Maximum of `p13` over the supplied times, refined by a local Brent search
/// between the neighbours of the best sample. Grid order does not matter.
pub fn max_transfer_on_grid(p: &RamanParams, times: &[f64]) -> f64 {
    let prop = Propagator::new(p);
    let Some((best, _)) = times
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, prop.p13(t)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return 0.0;
    };
    let lo = times[best.saturating_sub(1)].min(times[(best + 1).min(times.len() - 1)]);
    let hi = times[best.saturating_sub(1)].max(times[(best + 1).min(times.len() - 1)]);
    let sampled = prop.p13(times[best]);
    if hi <= lo {
        return sampled;
    }
    let refined = -brent_minimize(|t| -prop.p13(t), lo, hi, 1e-12 * hi.abs().max(1.0), 200).fx;
    refined.max(sampled)
}

/// Largest `|1> -> |3>` transfer over two reduced-model Rabi periods, `t in [0, 4 pi / omega_eff]`.
///
/// The time grid holds at least [`ENVELOPE_MIN_POINTS`] samples and resolves the
/// fastest Bohr frequency of the full spectrum.
pub fn transfer_envelope(p: &RamanParams) -> Result<f64> {
    let m = eliminate(p)?;
    if m.omega_eff == 0.0 {
        return Err(Error::DegenerateEnvelope);
    }
    let horizon = 4.0 * PI / m.omega_eff.abs();
    let s = dressed_spectrum(p);
    let fastest = s.energies[2] - s.energies[0];
    let n = ((ENVELOPE_SAMPLES_PER_PERIOD * horizon * fastest / (2.0 * PI)).ceil() as usize).max(ENVELOPE_MIN_POINTS);
    let times: Vec<f64> = (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect();
    Ok(max_transfer_on_grid(p, &times))
}

/// Supremum over all times of `|<3|exp(-iHt)|1>|^2`, `(sum_k |a_k|)^2`.
///
/// This is the value the transfer probability approaches when the phases of
/// the three spectral components align; it is a smooth function of the drive
/// parameters, unlike a windowed maximum.
pub fn transfer_supremum(p: &RamanParams) -> f64 {
    let a = Propagator::new(p).transfer_weights();
    a.iter().map(|x| x.abs()).sum::<f64>().powi(2)
}
