//! Three-level Raman system: dressed spectrum, reduced two-level model,
//! resonance loci, coherent dynamics, weak-probe spectroscopy and alkali-atom
//! feasibility numbers.
//!
//! `hbar = 1`. Couplings, detunings and energies are angular frequencies in a
//! common unit (typically `delta2 = 1`); times are in the reciprocal unit.

pub mod dynamics;
pub mod effective;
pub mod error;
pub mod experiment;
pub mod hamiltonian;
pub mod linalg;
pub mod ode;
pub mod optimize;
pub mod probe;
pub mod resolvent;
pub mod resonance;

pub use dynamics::{Propagator, StateVector};
pub use effective::{eliminate, EffectiveModel};
pub use error::{Error, Result};
pub use experiment::{AlkaliSpec, ExperimentReport, Scenario};
pub use hamiltonian::{build_hamiltonian, dressed_spectrum, DressedSpectrum, Hamiltonian3, RamanParams};
pub use probe::{AlphaElements, Peak, ProbeParams, ProbeSpectrum};
pub use resolvent::{ImplicitModel, LevelIteration};
pub use resonance::{resonance_report, ResonanceReport};
