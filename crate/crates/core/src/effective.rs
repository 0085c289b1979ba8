//! Two-level model obtained by adiabatically eliminating the intermediate level.

use crate::error::{Error, Result};
use crate::hamiltonian::RamanParams;

/// Coupling-to-detuning ratio above which the elimination is flagged as unreliable.
pub const VALIDITY_RATIO: f64 = 0.5;

/// Reduced Hamiltonian `[[-delta_eff, omega_eff], [omega_eff, delta_eff]] + offset_c`
/// in the `(|1>, |3>)` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveModel {
    pub omega_eff: f64,
    pub delta_eff: f64,
    /// Common energy shift. Zero for plain elimination after the symmetrizing
    /// shift; energy dependent in the resolvent treatment.
    pub offset_c: f64,
    /// Mixing angle, `atan2(omega_eff, delta_eff)`; `pi/2` exactly at `delta_eff = 0`.
    pub theta: f64,
    /// `false` when `max(omega1, omega2) / min(|delta1|, delta2)` exceeds [`VALIDITY_RATIO`].
    pub weak_coupling: bool,
}

impl EffectiveModel {
    pub fn from_parts(omega_eff: f64, delta_eff: f64, offset_c: f64, weak_coupling: bool) -> Self {
        Self { omega_eff, delta_eff, offset_c, theta: omega_eff.atan2(delta_eff), weak_coupling }
    }

    /// `sqrt(delta_eff^2 + omega_eff^2)`.
    pub fn half_splitting(&self) -> f64 {
        self.delta_eff.hypot(self.omega_eff)
    }

    /// `(eps_minus, eps_plus)` of the symmetric matrix (offset excluded).
    pub fn energies(&self) -> (f64, f64) {
        let r = self.half_splitting();
        (-r, r)
    }

    /// `(|eps_minus>, |eps_plus>)` as `(<1|.>, <3|.>)` pairs.
    pub fn states(&self) -> ([f64; 2], [f64; 2]) {
        let (s, c) = (0.5 * self.theta).sin_cos();
        ([c, -s], [s, c])
    }

    /// Symmetric 2x2 matrix without the offset.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[-self.delta_eff, self.omega_eff], [self.omega_eff, self.delta_eff]]
    }
}

/// Eliminate `|2>` assuming its amplitude is stationary.
pub fn eliminate(p: &RamanParams) -> Result<EffectiveModel> {
    if p.delta1 == 0.0 {
        return Err(Error::SingularElimination);
    }
    let denom = 4.0 * p.delta1;
    let omega_eff = p.omega1 * p.omega2 / denom;
    // same association as the resolvent elements at E = 0
    let delta_eff = 0.5 * (p.delta2 - p.delta1 + (p.omega2 * p.omega2 - p.omega1 * p.omega1) / denom);
    let weak = p.omega1.max(p.omega2) / p.delta1.abs().min(p.delta2) <= VALIDITY_RATIO;
    Ok(EffectiveModel::from_parts(omega_eff, delta_eff, 0.0, weak))
}
