//! The driven three-level Lambda Hamiltonian in the field-adapted frame, its
//! exact spectrum, and dressed-level character tracking across detuning scans.
//!
//! Bare basis order is `(|1>, |2>, |3>)` with `|2>` the intermediate level.
//! All quantities are angular frequencies with hbar = 1.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat3, Vec3};

/// Drive parameters of the probeless system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanParams {
    /// Rabi frequency of the `|1> <-> |2>` field.
    pub omega1: f64,
    /// Rabi frequency of the `|2> <-> |3>` field.
    pub omega2: f64,
    /// Detuning of field 1 from the `|1> <-> |2>` transition.
    pub delta1: f64,
    /// Two-photon reference detuning; the natural frequency scale.
    pub delta2: f64,
}

impl RamanParams {
    pub fn new(omega1: f64, omega2: f64, delta1: f64, delta2: f64) -> Result<Self> {
        let p = Self { omega1, omega2, delta1, delta2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64); 4] = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ];
        for (name, value) in checks {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("{value} is not finite") });
            }
        }
        if self.omega1 < 0.0 {
            return Err(Error::InvalidParameter { name: "omega1", reason: "must be >= 0".into() });
        }
        if self.omega2 < 0.0 {
            return Err(Error::InvalidParameter { name: "omega2", reason: "must be >= 0".into() });
        }
        if self.delta2 <= 0.0 {
            return Err(Error::InvalidParameter { name: "delta2", reason: "must be > 0".into() });
        }
        Ok(())
    }

    pub fn with_delta1(self, delta1: f64) -> Self {
        Self { delta1, ..self }
    }

    pub fn with_couplings(self, omega1: f64, omega2: f64) -> Self {
        Self { omega1, omega2, ..self }
    }

    /// `max(|delta2|, omega1, omega2)`, the scale used by residual tolerances.
    pub fn scale(&self) -> f64 {
        self.delta2.abs().max(self.omega1).max(self.omega2)
    }
}

/// Real symmetric 3x3 Hamiltonian in the bare basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian3 {
    pub matrix: Mat3,
}

impl Hamiltonian3 {
    pub fn trace(&self) -> f64 {
        self.matrix[0][0] + self.matrix[1][1] + self.matrix[2][2]
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        linalg::mat_vec(&self.matrix, v)
    }
}

pub fn build_hamiltonian(p: &RamanParams) -> Hamiltonian3 {
    let h1 = 0.5 * p.omega1;
    let h2 = 0.5 * p.omega2;
    Hamiltonian3 {
        matrix: [
            [0.0, h1, 0.0],
            [h1, -p.delta1, h2],
            [0.0, h2, -(p.delta1 - p.delta2)],
        ],
    }
}

/// Uncoupled energies `(0, -delta1, delta2 - delta1)` in bare-basis order.
pub fn bare_levels(p: &RamanParams) -> [f64; 3] {
    [0.0, -p.delta1, p.delta2 - p.delta1]
}

/// Sorted eigenvalues and orthonormal eigenvectors of a [`Hamiltonian3`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedSpectrum {
    /// `eps1 <= eps2 <= eps3`.
    pub energies: [f64; 3],
    /// `states[k][n] = <n|eps_k>`; largest component of each vector positive.
    pub states: [Vec3; 3],
}

impl DressedSpectrum {
    /// `<bare|eps_level>`.
    pub fn overlap(&self, bare: usize, level: usize) -> f64 {
        self.states[level][bare]
    }

    pub fn gap32(&self) -> f64 {
        self.energies[2] - self.energies[1]
    }

    /// Largest eigen-residual `||H v_k - eps_k v_k||` over the three levels.
    pub fn max_residual(&self, h: &Hamiltonian3) -> f64 {
        (0..3)
            .map(|k| {
                let hv = h.apply(&self.states[k]);
                (0..3)
                    .map(|i| (hv[i] - self.energies[k] * self.states[k][i]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Relative asymmetry accepted by [`diagonalize`].
const SYMMETRY_TOL: f64 = 1e-12;

pub fn diagonalize(h: &Hamiltonian3) -> Result<DressedSpectrum> {
    let asym = linalg::max_asymmetry(&h.matrix);
    let norm = linalg::frobenius_norm(&h.matrix);
    if asym > SYMMETRY_TOL * norm.max(f64::MIN_POSITIVE) || !asym.is_finite() {
        return Err(Error::NotSymmetric(asym));
    }
    let (energies, states) = linalg::jacobi_eigen(&h.matrix);
    Ok(DressedSpectrum { energies, states })
}

/// Spectrum of the Hamiltonian built from `p`. Always symmetric, so infallible.
pub fn dressed_spectrum(p: &RamanParams) -> DressedSpectrum {
    let (energies, states) = linalg::jacobi_eigen(&build_hamiltonian(p).matrix);
    DressedSpectrum { energies, states }
}

/// `eps3 - eps2` of the energy-sorted dressed levels.
pub fn gap32(p: &RamanParams) -> f64 {
    dressed_spectrum(p).gap32()
}

/// Energy-sorted spectra over a `delta1` grid.
pub fn scan_delta1(template: &RamanParams, grid: &[f64]) -> Vec<(f64, DressedSpectrum)> {
    grid.iter().map(|&d1| (d1, dressed_spectrum(&template.with_delta1(d1)))).collect()
}

/// Dominant bare state of one dressed level at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    /// Bare index with the largest squared overlap.
    pub bare: usize,
    /// That squared overlap.
    pub weight: f64,
    /// Set when the two largest squared overlaps agree within `1e-12`.
    pub ambiguous: bool,
}

const AMBIGUITY_TOL: f64 = 1e-12;

/// Per-grid-point dominant bare state of each dressed level.
pub fn track_character(scan: &[(f64, DressedSpectrum)]) -> Vec<[Character; 3]> {
    scan.iter()
        .map(|(_, s)| {
            std::array::from_fn(|level| {
                let w: [f64; 3] = std::array::from_fn(|n| s.overlap(n, level).powi(2));
                let mut order = [0usize, 1, 2];
                order.sort_by(|&a, &b| w[b].total_cmp(&w[a]));
                Character {
                    bare: order[0],
                    weight: w[order[0]],
                    ambiguous: (w[order[0]] - w[order[1]]).abs() <= AMBIGUITY_TOL,
                }
            })
        })
        .collect()
}

/// Where `level` exchanges `|1>` and `|3>` character along a monotone scan:
/// the linearly interpolated zero of `|<1|eps>|^2 - |<3|eps>|^2`.
///
/// Returns `None` when the difference never changes sign on the grid.
pub fn character_swap(scan: &[(f64, DressedSpectrum)], level: usize) -> Option<f64> {
    let diff = |s: &DressedSpectrum| s.overlap(0, level).powi(2) - s.overlap(2, level).powi(2);
    scan.windows(2).find_map(|pair| {
        let (x0, s0) = &pair[0];
        let (x1, s1) = &pair[1];
        let (d0, d1) = (diff(s0), diff(s1));
        if d0 == 0.0 {
            Some(*x0)
        } else if d0.signum() != d1.signum() {
            Some(x0 + (x1 - x0) * d0 / (d0 - d1))
        } else {
            None
        }
    })
}
