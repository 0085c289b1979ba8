use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use raman_core::experiment::{scenario_report, AlkaliSpec, Scenario};
use raman_core::hamiltonian::{dressed_spectrum, RamanParams};
use raman_core::probe::{default_nu_grid, probe_spectrum, probed_structural_resonance};
use raman_core::resolvent::{iterate_branch, DEFAULT_MAX_ITER, DEFAULT_TOL as RESOLVENT_TOL};
use raman_core::resonance::{resonance_report, shift_scan, structural_exact, DEFAULT_TOL};

use crate::config::{parse_range, RunConfig, Subcommand};
use crate::error::CliError;

/// Fixed formatting: 17 significant digits.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.into_iter().map(fmt).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

fn write(path: &Path, text: &str) -> Result<PathBuf, CliError> {
    fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(path.to_path_buf())
}

/// `dir/stem_suffix.ext` next to the main output.
fn sidecar(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// Input frequencies converted to internal angular units.
struct Freq {
    scale: f64,
}

impl Freq {
    fn of(config: &RunConfig) -> Self {
        Self { scale: config.units.to_angular() }
    }

    fn input(&self, config: &RunConfig, key: &str) -> Result<f64, CliError> {
        Ok(config.require(key)? * self.scale)
    }

    fn input_or(&self, config: &RunConfig, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(config.number_or(key, default)? * self.scale)
    }

    fn range(&self, config: &RunConfig, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        Ok(config.range(key)?.map(|r| r.into_iter().map(|x| x * self.scale).collect()))
    }

    fn output(&self, x: f64) -> f64 {
        x / self.scale
    }
}

fn model(config: &RunConfig, f: &Freq, delta1_default_to_delta2: bool) -> Result<RamanParams, CliError> {
    let delta2 = f.input_or(config, "delta2", 1.0)?;
    let delta1 = if delta1_default_to_delta2 { config.number("delta1")?.map(|x| x * f.scale).unwrap_or(delta2) } else { delta2 };
    Ok(RamanParams::new(f.input(config, "omega1")?, f.input(config, "omega2")?, delta1, delta2)?)
}

/// Execute the configured subcommand and return the files written.
pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match config.command {
        Subcommand::Levels => levels(config),
        Subcommand::Resonance => resonance(config),
        Subcommand::ShiftScan => shift(config),
        Subcommand::ProbeSpectrum => spectrum(config),
        Subcommand::ProbeResonance => probe_resonance(config),
        Subcommand::Resolvent => resolvent(config),
        Subcommand::Experiment => experiment(config),
    }
}

fn levels(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let template = model(config, &f, false)?;
    let grid = match f.range(config, "delta1-range")? {
        Some(g) => g,
        None => parse_range("delta1-range", "0:2:401")?.into_iter().map(|x| x * template.delta2).collect(),
    };
    let rows = grid.iter().map(|&d1| {
        let e = dressed_spectrum(&template.with_delta1(d1)).energies;
        vec![f.output(d1), f.output(e[0]), f.output(e[1]), f.output(e[2]), f.output(e[2] - e[1])]
    });
    Ok(vec![write(&config.output, &csv(&["delta1", "eps1", "eps2", "eps3", "gap32"], rows))?])
}

fn resonance(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let p = model(config, &f, false)?;
    let report = resonance_report(&p, config.number_or("tol", DEFAULT_TOL)?)?;
    let mut text = String::from("quantity,value\n");
    for (name, v) in report.rows() {
        let _ = writeln!(text, "{name},{}", fmt(f.output(v)));
    }
    Ok(vec![write(&config.output, &text)?])
}

fn shift(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let omega2 = f.input(config, "omega2")?;
    let delta2 = f.input_or(config, "delta2", 1.0)?;
    let ratios = config.range("ratio-range")?.unwrap_or(parse_range("ratio-range", "0.1:1.5:29")?);
    let scan = shift_scan(omega2, delta2, &ratios, config.number_or("tol", DEFAULT_TOL)?)?;
    for (ratio, err) in &scan.skipped {
        eprintln!("raman: warning: ratio {ratio} skipped: {err}");
    }
    let rows = scan.rows.iter().map(|r| vec![r.ratio, f.output(r.shift_exact), f.output(r.shift_approx)]);
    Ok(vec![write(&config.output, &csv(&["ratio", "shift_exact", "shift_approx"], rows))?])
}

fn spectrum(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let p = model(config, &f, true)?;
    let omega_p = f.input(config, "omega-p")?;
    let duration = config.require("duration")?;
    let grid = match f.range(config, "nu-range")? {
        Some(g) => g,
        None => default_nu_grid(&p, duration)?,
    };
    let s = probe_spectrum(&p, omega_p, duration, &grid)?;
    if s.perturbative_warning {
        eprintln!("raman: warning: probabilities exceed the perturbative ceiling");
    }
    let rows = s.nu_grid.iter().zip(&s.probabilities).map(|(&nu, &pr)| vec![f.output(nu), pr]);
    let main = write(&config.output, &csv(&["nu", "probability"], rows))?;
    let peaks = s.peaks.iter().map(|pk| vec![f.output(pk.position), pk.height, pk.fwhm.map_or(f64::NAN, |w| f.output(w))]);
    let side = write(&sidecar(&config.output, "peaks", "csv"), &csv(&["position", "height", "width"], peaks))?;
    Ok(vec![main, side])
}

fn probe_resonance(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let p = model(config, &f, false)?;
    let omega_p = f.input(config, "omega-p")?;
    let duration = config.require("duration")?;
    let grid = f.range(config, "delta1-range")?.ok_or_else(|| CliError::MissingKey("delta1-range".into()))?;
    let r = probed_structural_resonance(&p, &grid, omega_p, duration)?;
    let rows = r.curve.iter().map(|&(d1, m)| {
        let exact = dressed_spectrum(&p.with_delta1(d1)).gap32();
        vec![f.output(d1), f.output(m), f.output(exact)]
    });
    let main = write(&config.output, &csv(&["delta1", "measured_splitting", "gap32"], rows))?;
    let s = structural_exact(&p, DEFAULT_TOL)?;
    let fe = r.feasibility;
    let mut text = String::new();
    let _ = writeln!(text, "probed_delta1 = {}", fmt(f.output(r.delta1)));
    let _ = writeln!(text, "structural_exact = {}", fmt(f.output(s)));
    let _ = writeln!(text, "deviation = {}", fmt(f.output(r.delta1 - s)));
    let _ = writeln!(text, "time_ratio = {}", fmt(fe.time_ratio));
    let _ = writeln!(text, "rabi_ratio = {}", fmt(fe.rabi_ratio));
    let _ = writeln!(text, "time_condition = {}", if fe.time_ok { "pass" } else { "warn" });
    let _ = writeln!(text, "rabi_condition = {}", if fe.rabi_ok { "pass" } else { "warn" });
    let side = write(&sidecar(&config.output, "summary", "txt"), &text)?;
    Ok(vec![main, side])
}

fn resolvent(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let p = model(config, &f, true)?;
    let tol = config.number_or("tol", RESOLVENT_TOL)?;
    let max_iter = config.number_or("max-iter", DEFAULT_MAX_ITER as f64)?;
    if !(max_iter >= 1.0 && max_iter.fract() == 0.0) {
        return Err(CliError::Malformed { key: "max-iter".into(), value: max_iter.to_string(), reason: "expected a positive integer".into() });
    }
    let diag = dressed_spectrum(&p).energies;
    let mut text = String::from("branch,energy,iterations,diagonalized\n");
    for (name, sign, level) in [("minus", -1.0, 1), ("plus", 1.0, 2)] {
        let b = iterate_branch(&p, sign, tol, max_iter as usize)?;
        if !b.converged {
            return Err(raman_core::Error::NoConvergence(b.iterations).into());
        }
        let _ = writeln!(text, "{name},{},{},{}", fmt(f.output(b.energy)), b.iterations, fmt(f.output(diag[level])));
    }
    Ok(vec![write(&config.output, &text)?])
}

fn experiment(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let f = Freq::of(config);
    let preset = config.raw("preset").unwrap_or("rb87");
    let mut spec = AlkaliSpec::preset(preset)
        .ok_or_else(|| CliError::Malformed { key: "preset".into(), value: preset.into(), reason: "unknown preset".into() })?;
    let overrides: [(&str, &mut f64); 5] = [
        ("hfs-splitting", &mut spec.hfs_splitting),
        ("nuclear-spin", &mut spec.nuclear_spin),
        ("g-j", &mut spec.g_j),
        ("g-i", &mut spec.g_i),
        ("bohr-magneton", &mut spec.bohr_magneton_over_h),
    ];
    for (key, slot) in overrides {
        if let Some(v) = config.number(key)? {
            *slot = v;
        }
    }
    if let Some(g) = config.number("gamma")? {
        spec.gamma_excited = Some(g);
    }
    let scenario_name = config.raw("scenario").ok_or_else(|| CliError::MissingKey("scenario".into()))?;
    let scenario = Scenario::parse(scenario_name).ok_or_else(|| CliError::Malformed {
        key: "scenario".into(),
        value: scenario_name.into(),
        reason: "expected optical or microwave".into(),
    })?;
    let omega = config.number("omega")?;
    let coupling = |key: &str| -> Result<f64, CliError> {
        config.number(key)?.or(omega).map(|x| x * f.scale).ok_or_else(|| CliError::MissingKey(key.into()))
    };
    let (omega1, omega2) = (coupling("omega1")?, coupling("omega2")?);
    let delta2 = f.input(config, "delta2")?;
    let r = scenario_report(&spec, scenario, omega1, omega2, delta2)?;

    let mut t = String::new();
    let _ = writeln!(t, "preset = {preset}");
    let _ = writeln!(t, "scenario = {}", scenario.name());
    let _ = writeln!(t, "bias_field_gauss = {}", fmt(r.bias_field));
    let _ = writeln!(t, "delta_e31_hz = {}", fmt(r.splittings.delta_e31));
    let _ = writeln!(t, "delta_e23_hz = {}", fmt(r.splittings.delta_e23));
    let _ = writeln!(t, "delta_e21_hz = {}", fmt(r.splittings.delta_e21));
    if r.splittings.degenerate {
        let _ = writeln!(t, "warning = levels 1 and 3 are degenerate");
    }
    let _ = writeln!(t, "dynamical_shift_hz = {}", fmt(r.dynamical_shift));
    let _ = writeln!(t, "probe_time_bound_s = {}", fmt(r.probe_time_bound));
    let _ = writeln!(t, "probe_rabi_bound_hz = {}", fmt(r.probe_rabi_bound));
    let _ = writeln!(t, "probe_rabi_bound_at_time_bound_hz = {}", fmt(r.probe_rabi_bound_at_time_bound));
    if let (Some(rate), Some(ratio)) = (r.scattering_rate, r.broadening_ratio) {
        let _ = writeln!(t, "scattering_rate_per_s = {}", fmt(rate));
        let _ = writeln!(t, "scattering_to_shift_ratio = {}", fmt(ratio));
    }
    let _ = writeln!(t, "verdict = {}", if r.feasible { "feasible" } else { "infeasible" });
    let _ = writeln!(t, "note = {}", r.note);
    Ok(vec![write(&config.output, &t)?])
}
