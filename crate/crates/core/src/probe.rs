//! Weak-probe spectroscopy of the `eps2 -> eps3` dressed splitting.
//!
//! The probe `W(t) = (omega_p/2)(|3><1| e^{i nu t} + h.c.)` is treated to first
//! order. With `a = d_eps + nu`, `b = d_eps - nu` the transition amplitude is
//! `-i (omega_p/2) [alpha31 g(a) + alpha13 g(b)]`, `g(x) = (e^{ixt} - 1)/(ix)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, dressed_spectrum, DressedSpectrum, RamanParams};
use crate::ode::rk4;
use crate::optimize::{brent_minimize, parabolic_vertex};
use crate::resonance::shift_approx;

/// Probabilities above this mark the first-order treatment as unreliable.
pub const PERTURBATIVE_CEILING: f64 = 0.5;

/// Required number of grid points per peak width `2 pi / t`.
pub const POINTS_PER_WIDTH: f64 = 10.0;

/// Half-span of the probe grid in units of the splitting.
pub const GRID_SPAN: f64 = 1.5;

/// Minimum RK4 steps per period of the fastest frequency in the problem.
pub const STEPS_PER_PERIOD: f64 = 50.0;

/// Thresholds of [`feasibility_check`].
pub const TIME_RATIO_MIN: f64 = 10.0;
pub const RABI_RATIO_MAX: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeParams {
    pub omega_p: f64,
    /// Beat frequency `nu = delta1 - delta2 - delta13`.
    pub nu: f64,
    pub duration: f64,
}

impl ProbeParams {
    pub fn new(omega_p: f64, nu: f64, duration: f64) -> Result<Self> {
        let p = Self { omega_p, nu, duration };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_p >= 0.0 && self.omega_p.is_finite()) {
            return Err(Error::InvalidParameter { name: "omega_p", reason: format!("{} must be finite and >= 0", self.omega_p) });
        }
        if !self.nu.is_finite() {
            return Err(Error::InvalidParameter { name: "nu", reason: "must be finite".into() });
        }
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidParameter { name: "duration", reason: format!("{} must be > 0", self.duration) });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaElements {
    /// `<eps3|1><3|eps2>`
    pub alpha13: f64,
    /// `<eps3|3><1|eps2>`
    pub alpha31: f64,
}

pub fn alpha_elements(spectrum: &DressedSpectrum) -> AlphaElements {
    let (e2, e3) = (&spectrum.states[1], &spectrum.states[2]);
    AlphaElements { alpha13: e3[0] * e2[2], alpha31: e3[2] * e2[0] }
}

/// `(e^{ixt} - 1)/(ix)` in the form `(2 sin(xt/2)/x) e^{ixt/2}`, exact as `x -> 0`.
fn g(x: f64, t: f64) -> Complex64 {
    let amp = if x == 0.0 { t } else { 2.0 * (0.5 * x * t).sin() / x };
    Complex64::from_polar(amp, 0.5 * x * t)
}

fn amplitude(alpha: &AlphaElements, d_eps: f64, probe: &ProbeParams) -> Complex64 {
    let t = probe.duration;
    (alpha.alpha31 * g(d_eps + probe.nu, t) + alpha.alpha13 * g(d_eps - probe.nu, t)) * (0.5 * probe.omega_p)
}

fn probability_from(spectrum: &DressedSpectrum, probe: &ProbeParams) -> f64 {
    amplitude(&alpha_elements(spectrum), spectrum.gap32(), probe).norm_sqr()
}

/// First-order `eps2 -> eps3` transition probability.
pub fn probe_transition_probability(params: &RamanParams, probe: &ProbeParams) -> Result<f64> {
    params.validate()?;
    probe.validate()?;
    Ok(probability_from(&dressed_spectrum(params), probe))
}

/// Steps needed by [`probe_time_domain_oracle`].
pub fn required_steps(params: &RamanParams, probe: &ProbeParams) -> usize {
    let d_eps = dressed_spectrum(params).gap32();
    let fastest = [d_eps, probe.nu.abs(), params.omega1, params.omega2, params.delta1.abs()]
        .into_iter()
        .fold(0.0, f64::max);
    (STEPS_PER_PERIOD * probe.duration * fastest / (2.0 * PI)).ceil().max(1.0) as usize
}

/// `|<eps3|psi(t)>|^2` from RK4 integration of `H + W(t)` starting in `|eps2>`.
pub fn probe_time_domain_oracle(params: &RamanParams, probe: &ProbeParams, steps: usize) -> Result<f64> {
    params.validate()?;
    probe.validate()?;
    let required = required_steps(params, probe);
    if steps < required {
        return Err(Error::StepResolution { steps, required });
    }
    let h = build_hamiltonian(params).matrix;
    let spectrum = dressed_spectrum(params);
    let half = 0.5 * probe.omega_p;
    let nu = probe.nu;
    let i = Complex64::new(0.0, 1.0);
    let rhs = |t: f64, y: &[Complex64; 3]| -> [Complex64; 3] {
        let w31 = Complex64::from_polar(half, nu * t);
        let mut hy: [Complex64; 3] = std::array::from_fn(|r| (0..3).map(|c| y[c] * h[r][c]).sum());
        hy[2] += w31 * y[0];
        hy[0] += w31.conj() * y[2];
        hy.map(|z| -i * z)
    };
    let y0 = spectrum.states[1].map(|x| Complex64::new(x, 0.0));
    let y = rk4(rhs, y0, 0.0, probe.duration, steps);
    let e3 = spectrum.states[2];
    Ok((0..3).map(|n| y[n] * e3[n]).sum::<Complex64>().norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    /// Full width at half maximum; `None` when a flank leaves the grid.
    pub fwhm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpectrum {
    pub nu_grid: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// Local maxima in grid order.
    pub peaks: Vec<Peak>,
    /// Set when any probability exceeds [`PERTURBATIVE_CEILING`].
    pub perturbative_warning: bool,
}

impl ProbeSpectrum {
    /// Extract and refine local maxima of sampled probabilities.
    pub fn from_samples(nu_grid: Vec<f64>, probabilities: Vec<f64>) -> Self {
        assert_eq!(nu_grid.len(), probabilities.len(), "grid and samples differ in length");
        let n = nu_grid.len();
        let mut peaks = Vec::new();
        for k in 1..n.saturating_sub(1) {
            let (y0, y1, y2) = (probabilities[k - 1], probabilities[k], probabilities[k + 1]);
            if !(y1 > y0 && y1 >= y2) {
                continue;
            }
            let (position, height) = refine(&nu_grid, &probabilities, k);
            let fwhm = half_width_crossing(&nu_grid, &probabilities, k, height, -1)
                .zip(half_width_crossing(&nu_grid, &probabilities, k, height, 1))
                .map(|(lo, hi)| hi - lo);
            peaks.push(Peak { position, height, fwhm });
        }
        let perturbative_warning = probabilities.iter().any(|&p| p > PERTURBATIVE_CEILING);
        Self { nu_grid, probabilities, peaks, perturbative_warning }
    }

    /// Highest peak with `nu < 0`.
    pub fn negative_peak(&self) -> Option<&Peak> {
        highest(self.peaks.iter().filter(|p| p.position < 0.0))
    }

    /// Highest peak with `nu > 0`.
    pub fn positive_peak(&self) -> Option<&Peak> {
        highest(self.peaks.iter().filter(|p| p.position > 0.0))
    }
}

fn highest<'a>(it: impl Iterator<Item = &'a Peak>) -> Option<&'a Peak> {
    it.max_by(|a, b| a.height.total_cmp(&b.height))
}

/// Parabola through the log-probabilities at `k-1, k, k+1`; plain values if any is zero.
fn refine(grid: &[f64], p: &[f64], k: usize) -> (f64, f64) {
    let (x0, x1, x2) = (grid[k - 1], grid[k], grid[k + 1]);
    let h_lo = x1 - x0;
    let h_hi = x2 - x1;
    if ((h_lo - h_hi) / h_lo).abs() > 1e-6 {
        return (x1, p[k]);
    }
    if p[k - 1] > 0.0 && p[k + 1] > 0.0 {
        let (x, ly) = parabolic_vertex(x1, h_lo, p[k - 1].ln(), p[k].ln(), p[k + 1].ln());
        (x, ly.exp())
    } else {
        parabolic_vertex(x1, h_lo, p[k - 1], p[k], p[k + 1])
    }
}

fn half_width_crossing(grid: &[f64], p: &[f64], k: usize, height: f64, dir: isize) -> Option<f64> {
    let half = 0.5 * height;
    let mut j = k as isize;
    loop {
        let next = j + dir;
        if next < 0 || next as usize >= grid.len() {
            return None;
        }
        let (a, b) = (j as usize, next as usize);
        if p[b] <= half {
            let f = (p[a] - half) / (p[a] - p[b]);
            return Some(grid[a] + f * (grid[b] - grid[a]));
        }
        j = next;
    }
}

/// Symmetric lattice `k h`, `h = (2 pi / t) / 10`, covering `+-1.5 gap32`.
pub fn default_nu_grid(params: &RamanParams, duration: f64) -> Result<Vec<f64>> {
    params.validate()?;
    ProbeParams::new(0.0, 0.0, duration)?;
    let d_eps = dressed_spectrum(params).gap32();
    let h = 2.0 * PI / duration / POINTS_PER_WIDTH;
    let k = (GRID_SPAN * d_eps / h).ceil() as i64 + 1;
    Ok((-k..=k).map(|i| i as f64 * h).collect())
}

fn validate_grid(grid: &[f64], d_eps: f64, duration: f64) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::GridTooCoarse(format!("{} points", grid.len())));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::GridTooCoarse("grid must be finite and strictly increasing".into()));
    }
    let span = GRID_SPAN * d_eps;
    if grid[0] > -span || grid[grid.len() - 1] < span {
        return Err(Error::GridTooCoarse(format!(
            "grid [{}, {}] does not cover +-{span}",
            grid[0],
            grid[grid.len() - 1]
        )));
    }
    let max_step = 2.0 * PI / duration / POINTS_PER_WIDTH;
    let widest = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    if widest > max_step * (1.0 + 1e-9) {
        return Err(Error::GridTooCoarse(format!("spacing {widest} exceeds {max_step}")));
    }
    Ok(())
}

pub fn probe_spectrum(params: &RamanParams, omega_p: f64, duration: f64, nu_grid: &[f64]) -> Result<ProbeSpectrum> {
    params.validate()?;
    ProbeParams::new(omega_p, 0.0, duration)?;
    let spectrum = dressed_spectrum(params);
    validate_grid(nu_grid, spectrum.gap32(), duration)?;
    let alpha = alpha_elements(&spectrum);
    let probabilities = nu_grid
        .iter()
        .map(|&nu| amplitude(&alpha, spectrum.gap32(), &ProbeParams { omega_p, nu, duration }).norm_sqr())
        .collect();
    Ok(ProbeSpectrum::from_samples(nu_grid.to_vec(), probabilities))
}

/// `|position|` of the highest negative-`nu` peak.
pub fn measured_splitting(spectrum: &ProbeSpectrum) -> Result<f64> {
    spectrum.negative_peak().map(|p| -p.position).ok_or(Error::NoNegativePeak)
}

/// Position of the highest positive-`nu` peak, for comparison with [`measured_splitting`].
pub fn measured_splitting_positive(spectrum: &ProbeSpectrum) -> Result<f64> {
    spectrum.positive_peak().map(|p| p.position).ok_or(Error::NoPositivePeak)
}

/// Splitting from the negative-`nu` peak, with the grid estimate polished by a
/// scalar maximization of the closed form within one grid step.
pub fn polished_splitting(params: &RamanParams, omega_p: f64, duration: f64) -> Result<f64> {
    let grid = default_nu_grid(params, duration)?;
    let spec = probe_spectrum(params, omega_p, duration, &grid)?;
    let rough = measured_splitting(&spec)?;
    let h = grid[1] - grid[0];
    let spectrum = dressed_spectrum(params);
    let alpha = alpha_elements(&spectrum);
    let d_eps = spectrum.gap32();
    // omega_p only scales the curve; a unit probe keeps the objective well-scaled
    let f = |nu: f64| -amplitude(&alpha, d_eps, &ProbeParams { omega_p: 1.0, nu, duration }).norm_sqr();
    let m = brent_minimize(f, -rough - h, -rough + h, 1e-13 * params.delta2, 200);
    Ok(-m.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// `duration / (2 pi / shift_approx)`.
    pub time_ratio: f64,
    /// `omega_p / (omega1^2 omega2^2 / (2 delta2^3))`.
    pub rabi_ratio: f64,
    pub time_ok: bool,
    pub rabi_ok: bool,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.time_ok && self.rabi_ok
    }
}

pub fn feasibility_check(params: &RamanParams, omega_p: f64, duration: f64) -> FeasibilityReport {
    let shift = shift_approx(params);
    let time_ratio = duration * shift / (2.0 * PI);
    let rabi_ratio = omega_p / (2.0 * shift);
    FeasibilityReport { time_ratio, rabi_ratio, time_ok: time_ratio >= TIME_RATIO_MIN, rabi_ok: rabi_ratio <= RABI_RATIO_MAX }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbedResonance {
    pub delta1: f64,
    /// `(delta1, measured splitting)` per grid point.
    pub curve: Vec<(f64, f64)>,
    pub feasibility: FeasibilityReport,
}

/// `delta1` minimizing the probe-measured splitting over a uniform grid.
pub fn probed_structural_resonance(
    template: &RamanParams,
    delta1_grid: &[f64],
    omega_p: f64,
    duration: f64,
) -> Result<ProbedResonance> {
    if delta1_grid.len() < 3 {
        return Err(Error::InvalidParameter { name: "delta1_grid", reason: "needs at least 3 points".into() });
    }
    let h = delta1_grid[1] - delta1_grid[0];
    let uniform = delta1_grid.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if !(h > 0.0 && uniform) {
        return Err(Error::InvalidParameter { name: "delta1_grid", reason: "must be uniform and increasing".into() });
    }
    let curve = delta1_grid
        .iter()
        .map(|&d1| polished_splitting(&template.with_delta1(d1), omega_p, duration).map(|s| (d1, s)))
        .collect::<Result<Vec<_>>>()?;
    let k = (0..curve.len()).min_by(|&a, &b| curve[a].1.total_cmp(&curve[b].1)).unwrap();
    if k == 0 || k == curve.len() - 1 {
        return Err(Error::BracketFailure { lo: delta1_grid[0], hi: delta1_grid[curve.len() - 1], x: curve[k].0 });
    }
    let (delta1, _) = parabolic_vertex(curve[k].0, h, curve[k - 1].1, curve[k].1, curve[k + 1].1);
    Ok(ProbedResonance { delta1, curve, feasibility: feasibility_check(template, omega_p, duration) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> RamanParams {
        RamanParams::new(0.2, 0.5, 1.0, 1.0).unwrap()
    }

    fn duration(cycles: f64) -> f64 {
        2.0 * PI * cycles
    }

    /// Closed form written term by term, reading the crossed term as `cos(nu t)^2`.
    fn verbatim(a: &AlphaElements, d: f64, op: f64, nu: f64, t: f64) -> f64 {
        let s = |x: f64| (x * t / 2.0).sin().powi(2) / (x * x);
        let cross = a.alpha13 * a.alpha31 / (d * d - nu * nu) * ((nu * t).cos().powi(2) - (nu * t).cos() * (d * t).cos());
        op * op * (a.alpha31 * a.alpha31 * s(d + nu) + a.alpha13 * a.alpha13 * s(d - nu) + cross)
    }

    /// Eigenvalues from the trigonometric cubic formula, vectors from cross products.
    fn cubic_eigen(h: &[[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
        let q = (h[0][0] + h[1][1] + h[2][2]) / 3.0;
        let p1 = h[0][1].powi(2) + h[0][2].powi(2) + h[1][2].powi(2);
        let p2 = (0..3).map(|i| (h[i][i] - q).powi(2)).sum::<f64>() + 2.0 * p1;
        let p = (p2 / 6.0).sqrt();
        let b: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| (h[i][j] - if i == j { q } else { 0.0 }) / p).collect())
            .collect();
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
        let mut e = [0.0; 3];
        for (k, x) in e.iter_mut().enumerate() {
            *x = q + 2.0 * p * (phi + 2.0 * PI * k as f64 / 3.0).cos();
        }
        e.sort_by(f64::total_cmp);
        let vecs = e.map(|l| {
            let r0 = [h[0][0] - l, h[0][1], h[0][2]];
            let r1 = [h[1][0], h[1][1] - l, h[1][2]];
            let v = [r0[1] * r1[2] - r0[2] * r1[1], r0[2] * r1[0] - r0[0] * r1[2], r0[0] * r1[1] - r0[1] * r1[0]];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let mut v = v.map(|x| x / n);
            let big = (0..3).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
            if v[big] < 0.0 {
                v = v.map(|x| -x);
            }
            v
        });
        (e, vecs)
    }

    #[test]
    fn alpha_matches_cubic_oracle() {
        let p = reference();
        let a = alpha_elements(&dressed_spectrum(&p));
        let (_, v) = cubic_eigen(&build_hamiltonian(&p).matrix);
        assert!((a.alpha13 - v[2][0] * v[1][2]).abs() < 1e-10);
        assert!((a.alpha31 - v[2][2] * v[1][0]).abs() < 1e-10);
        assert!(a.alpha13.abs() <= 1.0 && a.alpha31.abs() <= 1.0);
    }

    #[test]
    fn alpha_uncoupled_is_kronecker() {
        let p = RamanParams::new(0.0, 0.0, 0.5, 1.0).unwrap();
        // energies -0.5, 0, 0.5 order the levels as |2>, |1>, |3>
        let a = alpha_elements(&dressed_spectrum(&p));
        assert_eq!(a.alpha13, 0.0);
        assert_eq!(a.alpha31, 1.0);
    }

    #[test]
    fn alpha_reduced_model_center() {
        // tiny couplings at the reduced-model center: |eps2>, |eps3> are equal mixtures of |1>, |3>
        let p = RamanParams::new(1e-3, 1e-3, 1.0, 1.0).unwrap();
        let a = alpha_elements(&dressed_spectrum(&p));
        assert!((a.alpha13.abs() - 0.5).abs() < 1e-5);
        assert!((a.alpha31.abs() - 0.5).abs() < 1e-5);
    }

    #[test]
    fn closed_form_matches_verbatim_expression() {
        let p = reference();
        let s = dressed_spectrum(&p);
        let a = alpha_elements(&s);
        let d = s.gap32();
        let t = duration(125.0);
        for k in 0..400 {
            let nu = -1.5 * d + 3.0 * d * k as f64 / 399.0;
            if (nu.abs() - d).abs() < 1e-3 {
                continue;
            }
            let got = probe_transition_probability(&p, &ProbeParams::new(1e-3, nu, t).unwrap()).unwrap();
            let want = verbatim(&a, d, 1e-3, nu, t);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1e-12), "{nu}: {got} vs {want}");
        }
    }

    #[test]
    fn removable_singularity_limits() {
        let p = reference();
        let s = dressed_spectrum(&p);
        let a = alpha_elements(&s);
        let d = s.gap32();
        let t = 50.0;
        let at = probe_transition_probability(&p, &ProbeParams::new(0.01, -d, t).unwrap()).unwrap();
        let near = probe_transition_probability(&p, &ProbeParams::new(0.01, -d * (1.0 + 1e-9), t).unwrap()).unwrap();
        assert!(at.is_finite() && (at - near).abs() < 1e-9 * at);
        // cross term vanishes against the resonant one for long t; check the resonant weight
        let resonant = 0.01f64.powi(2) * a.alpha31.powi(2) * t * t / 4.0;
        assert!((at - resonant).abs() < 0.1 * resonant);
    }

    #[test]
    fn zero_probe_and_short_time() {
        let p = reference();
        assert_eq!(probe_transition_probability(&p, &ProbeParams::new(0.0, 0.1, 10.0).unwrap()).unwrap(), 0.0);
        let s = dressed_spectrum(&p);
        let a = alpha_elements(&s);
        // t -> 0: amplitude -> -i (omega_p/2) t (alpha31 + alpha13)
        let t = 1e-6;
        let got = probe_transition_probability(&p, &ProbeParams::new(0.3, 0.2, t).unwrap()).unwrap();
        let series = 0.09 / 4.0 * t * t * (a.alpha31 + a.alpha13).powi(2);
        assert!((got - series).abs() < 1e-6 * series);
    }

    #[test]
    fn omega_p_squared_scaling() {
        let p = reference();
        let base = probe_transition_probability(&p, &ProbeParams::new(1e-3, -0.05, 300.0).unwrap()).unwrap();
        let scaled = probe_transition_probability(&p, &ProbeParams::new(4e-3, -0.05, 300.0).unwrap()).unwrap();
        assert!((scaled - 16.0 * base).abs() <= 1e-14 * scaled);
    }

    #[test]
    fn invalid_probe() {
        assert!(ProbeParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(ProbeParams::new(1.0, 0.0, 0.0).is_err());
        assert!(ProbeParams::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn synthetic_sinc_peak() {
        let (nu0, t) = (-0.3137, 200.0);
        let h = 2.0 * PI / t / 10.0;
        let grid: Vec<f64> = (-300..=300).map(|k| k as f64 * h).collect();
        let prob = grid
            .iter()
            .map(|&nu| {
                let x = nu - nu0;
                if x == 0.0 { t * t / 4.0 } else { ((x * t / 2.0).sin() / x).powi(2) }
            })
            .collect();
        let s = ProbeSpectrum::from_samples(grid, prob);
        let peak = s.negative_peak().unwrap();
        assert!((peak.position - nu0).abs() < 0.02 * h, "{}", peak.position - nu0);
        let fwhm = peak.fwhm.unwrap();
        assert!((fwhm - 2.0 * PI * 0.886 / t).abs() < 0.02 * fwhm);
        assert_eq!(measured_splitting(&s).unwrap(), -peak.position);
    }

    #[test]
    fn spectrum_peaks_near_splitting() {
        let p = reference();
        let t = duration(125.0);
        let grid = default_nu_grid(&p, t).unwrap();
        let spec = probe_spectrum(&p, 1e-4, t, &grid).unwrap();
        let d = dressed_spectrum(&p).gap32();
        let neg = spec.negative_peak().unwrap();
        let pos = spec.positive_peak().unwrap();
        let width = 2.0 * PI / t;
        assert!((neg.position + d).abs() < width);
        assert!((pos.position - d).abs() < width);
        for peak in [neg, pos] {
            assert!(peak.height <= 1e-8 * t * t / 4.0 * (1.0 + 1e-9));
            let fwhm = peak.fwhm.unwrap();
            assert!((fwhm - 0.886 * width).abs() < 0.15 * 0.886 * width, "{fwhm}");
        }
        assert!(!spec.perturbative_warning);
        assert!(measured_splitting_positive(&spec).is_ok());
    }

    #[test]
    fn grid_validation() {
        let p = reference();
        let t = duration(125.0);
        let d = dressed_spectrum(&p).gap32();
        let narrow: Vec<f64> = (-10..=10).map(|k| k as f64 * 1e-3).collect();
        assert!(matches!(probe_spectrum(&p, 1e-4, t, &narrow), Err(Error::GridTooCoarse(_))));
        let coarse: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.1 * d).collect();
        assert!(matches!(probe_spectrum(&p, 1e-4, t, &coarse), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn perturbative_flag() {
        let p = reference();
        let t = duration(125.0);
        let grid = default_nu_grid(&p, t).unwrap();
        assert!(probe_spectrum(&p, 0.1, t, &grid).unwrap().perturbative_warning);
    }

    #[test]
    fn missing_negative_peak() {
        let s = ProbeSpectrum::from_samples(vec![0.1, 0.2, 0.3], vec![0.0, 1.0, 0.0]);
        assert_eq!(measured_splitting(&s), Err(Error::NoNegativePeak));
        let s = ProbeSpectrum::from_samples(vec![-0.3, -0.2, -0.1], vec![0.0, 1.0, 0.0]);
        assert_eq!(measured_splitting_positive(&s), Err(Error::NoPositivePeak));
    }

    #[test]
    fn oracle_rejects_coarse_steps() {
        let p = reference();
        let probe = ProbeParams::new(1e-4, -0.05, 100.0).unwrap();
        assert!(matches!(probe_time_domain_oracle(&p, &probe, 10), Err(Error::StepResolution { .. })));
    }

    #[test]
    fn oracle_without_probe_stays_in_eps2() {
        let p = reference();
        let probe = ProbeParams::new(0.0, -0.05, 30.0).unwrap();
        let n = required_steps(&p, &probe);
        assert!(probe_time_domain_oracle(&p, &probe, n).unwrap() < 1e-12);
    }

    #[test]
    fn oracle_self_convergence() {
        let p = reference();
        let d = dressed_spectrum(&p).gap32();
        let probe = ProbeParams::new(1e-2, -d, 60.0).unwrap();
        let n = required_steps(&p, &probe);
        let a = probe_time_domain_oracle(&p, &probe, n).unwrap();
        let b = probe_time_domain_oracle(&p, &probe, 2 * n).unwrap();
        let c = probe_time_domain_oracle(&p, &probe, 4 * n).unwrap();
        assert!((b - c).abs() < 1e-6 * c);
        let ratio = (a - b) / (b - c);
        assert!((ratio - 16.0).abs() < 3.0, "{ratio}");
    }

    #[test]
    fn oracle_agrees_for_weak_probe() {
        let p = reference();
        let d = dressed_spectrum(&p).gap32();
        let t = duration(25.0);
        for nu in [-d, d, 0.3 * d] {
            let probe = ProbeParams::new(1e-4, nu, t).unwrap();
            let closed = probe_transition_probability(&p, &probe).unwrap();
            let ode = probe_time_domain_oracle(&p, &probe, required_steps(&p, &probe)).unwrap();
            assert!((closed - ode).abs() < 0.05 * closed.max(1e-12), "{nu}: {closed} vs {ode}");
        }
    }

    #[test]
    fn feasibility_thresholds() {
        let p = reference();
        let shift = shift_approx(&p);
        let at_bound = feasibility_check(&p, 0.0, 2.0 * PI / shift);
        assert!((at_bound.time_ratio - 1.0).abs() < 1e-12);
        assert!(!at_bound.time_ok && at_bound.rabi_ok);
        let good = feasibility_check(&p, 0.05 * 2.0 * shift, 20.0 * PI / shift);
        assert!(good.feasible());
        assert!(!feasibility_check(&p, 2.0 * shift, 20.0 * PI / shift).rabi_ok);
    }

    #[test]
    fn polished_splitting_converges_to_gap() {
        let p = reference();
        let d = dressed_spectrum(&p).gap32();
        let errs: Vec<f64> = [25.0, 50.0, 125.0, 250.0]
            .iter()
            .map(|&c| (polished_splitting(&p, 1e-4, duration(c)).unwrap() - d).abs())
            .collect();
        // monotone up to sub-width jitter of the peak position
        assert!(errs[1..].iter().all(|&e| e < errs[0] / 10.0), "{errs:?}");
        assert!(errs[3] < errs[1] && errs[3] < errs[2], "{errs:?}");
    }

    #[test]
    fn probed_resonance_is_probe_strength_independent() {
        let p = reference();
        let grid: Vec<f64> = (0..21).map(|k| 1.03 + 0.002 * k as f64).collect();
        let t = duration(50.0);
        let a = probed_structural_resonance(&p, &grid, 1e-5, t).unwrap();
        let b = probed_structural_resonance(&p, &grid, 1e-3, t).unwrap();
        assert!((a.delta1 - b.delta1).abs() < 1e-9);
        assert_eq!(a.curve.len(), grid.len());
    }

    #[test]
    fn probed_resonance_bracket_errors() {
        let p = reference();
        let grid: Vec<f64> = (0..5).map(|k| 0.9 + 0.01 * k as f64).collect();
        assert!(matches!(
            probed_structural_resonance(&p, &grid, 1e-4, duration(50.0)),
            Err(Error::BracketFailure { .. })
        ));
        assert!(probed_structural_resonance(&p, &[1.0, 1.1], 1e-4, 10.0).is_err());
        assert!(probed_structural_resonance(&p, &[1.0, 1.1, 1.15], 1e-4, 10.0).is_err());
    }
}
