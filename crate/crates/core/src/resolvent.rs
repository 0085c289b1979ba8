//! Level-shift operator treatment of the `(|1>, |3>)` subspace.
//!
//! Projecting out `|2>` exactly gives an energy-dependent 2x2 Hamiltonian whose
//! self-consistent eigenvalues are exact eigenvalues of the full 3x3 problem.
//! Evaluated at `E = 0` it reduces to adiabatic elimination.

use crate::effective::{EffectiveModel, VALIDITY_RATIO};
use crate::error::{Error, Result};
use crate::hamiltonian::RamanParams;
use crate::optimize::bracketed_minimize;
use crate::resonance::search_bracket;

/// Relative distance to the `|2>` pole below which `R(E)` is refused.
pub const POLE_GUARD: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;
const DAMPING: f64 = 0.5;

/// Tolerance of the level iteration inside the resonance finder.
const INNER_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitModel {
    pub r11: f64,
    pub r33: f64,
    pub r13: f64,
    pub delta_eff_of_e: f64,
    pub offset_c_of_e: f64,
    pub energy_e: f64,
}

impl ImplicitModel {
    /// `C(E) + sign sqrt(delta_eff(E)^2 + r13(E)^2)`.
    pub fn branch_energy(&self, sign: f64) -> f64 {
        self.offset_c_of_e + sign * self.delta_eff_of_e.hypot(self.r13)
    }

    pub fn effective(&self, p: &RamanParams) -> EffectiveModel {
        let denom = (self.energy_e + p.delta1).abs();
        let weak = p.omega1.max(p.omega2) / denom.min(p.delta2) <= VALIDITY_RATIO;
        EffectiveModel::from_parts(self.r13, self.delta_eff_of_e, self.offset_c_of_e, weak)
    }
}

pub fn level_shift(p: &RamanParams, e: f64) -> Result<ImplicitModel> {
    let pole = -p.delta1;
    if !((e - pole).abs() > POLE_GUARD * p.delta2) {
        return Err(Error::ResolventPole { energy: e, pole });
    }
    let denom = 4.0 * (e + p.delta1);
    let (o1, o2) = (p.omega1, p.omega2);
    let base = p.delta2 - p.delta1;
    Ok(ImplicitModel {
        r11: o1 * o1 / denom,
        r33: o2 * o2 / denom,
        r13: o1 * o2 / denom,
        delta_eff_of_e: 0.5 * (base + (o2 * o2 - o1 * o1) / denom),
        offset_c_of_e: 0.5 * (base + (o2 * o2 + o1 * o1) / denom),
        energy_e: e,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `|E_{n+1} - E_n|` per iteration.
    pub differences: Vec<f64>,
    /// Set once an alternating, slowly contracting sequence switched on damping.
    pub damped: bool,
}

/// Fixed-point iteration of one branch seeded at `E = 0`. Returns the trace
/// even when the iteration does not converge.
pub fn iterate_branch(p: &RamanParams, sign: f64, tol: f64, max_iter: usize) -> Result<Branch> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", reason: format!("{tol} must be positive") });
    }
    let mut e = 0.0;
    let mut differences = Vec::new();
    let mut damped = false;
    let mut last_step = 0.0f64;
    for n in 1..=max_iter {
        let target = level_shift(p, e)?.branch_energy(sign);
        let mut step = target - e;
        // halving the step helps only when the map slope is below -1/3
        if !damped && step * last_step < 0.0 && step.abs() > last_step.abs() / 3.0 {
            damped = true;
        }
        if damped {
            step *= DAMPING;
        }
        e += step;
        last_step = step;
        differences.push(step.abs());
        if step.abs() <= tol * p.delta2 {
            return Ok(Branch { energy: e, iterations: n, converged: true, differences, damped });
        }
    }
    Ok(Branch { energy: e, iterations: max_iter, converged: false, differences, damped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelIteration {
    pub minus: Branch,
    pub plus: Branch,
}

impl LevelIteration {
    pub fn converged(&self) -> bool {
        self.minus.converged && self.plus.converged
    }

    pub fn splitting(&self) -> f64 {
        self.plus.energy - self.minus.energy
    }
}

/// Both crossing branches; fails if either does not converge.
pub fn iterate_levels(p: &RamanParams, tol: f64, max_iter: usize) -> Result<LevelIteration> {
    let minus = iterate_branch(p, -1.0, tol, max_iter)?;
    let plus = iterate_branch(p, 1.0, tol, max_iter)?;
    if !(minus.converged && plus.converged) {
        return Err(Error::NoConvergence(max_iter));
    }
    Ok(LevelIteration { minus, plus })
}

fn check_couplings(p: &RamanParams) -> Result<()> {
    p.validate()?;
    if p.omega1 * p.omega2 <= 0.0 {
        return Err(Error::InvalidParameter { name: "omega1*omega2", reason: "both couplings must be positive".into() });
    }
    Ok(())
}

/// `delta1` minimizing the converged splitting. Points where the iteration
/// fails are treated as infinitely split.
pub fn resolvent_structural_resonance(p: &RamanParams, tol: f64) -> Result<f64> {
    check_couplings(p)?;
    let (lo, hi) = search_bracket(p);
    let f = |d1: f64| {
        iterate_levels(&p.with_delta1(d1), INNER_TOL, DEFAULT_MAX_ITER)
            .map(|l| l.splitting())
            .unwrap_or(f64::INFINITY)
    };
    Ok(bracketed_minimize(f, lo, hi, tol * p.delta2)?.x)
}

/// Same locus with `R` frozen at `E = 0`, i.e. the adiabatic-elimination splitting.
pub fn resolvent_structural_resonance_iter0(p: &RamanParams, tol: f64) -> Result<f64> {
    check_couplings(p)?;
    let (lo, hi) = search_bracket(p);
    let f = |d1: f64| {
        level_shift(&p.with_delta1(d1), 0.0)
            .map(|m| 2.0 * m.delta_eff_of_e.hypot(m.r13))
            .unwrap_or(f64::INFINITY)
    };
    Ok(bracketed_minimize(f, lo, hi, tol * p.delta2)?.x)
}
