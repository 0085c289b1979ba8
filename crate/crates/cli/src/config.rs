use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgAction, Command};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Levels,
    Resonance,
    ShiftScan,
    ProbeSpectrum,
    ProbeResonance,
    Resolvent,
    Experiment,
}

impl Subcommand {
    pub const ALL: [Subcommand; 7] = [
        Self::Levels,
        Self::Resonance,
        Self::ShiftScan,
        Self::ProbeSpectrum,
        Self::ProbeResonance,
        Self::Resolvent,
        Self::Experiment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Levels => "levels",
            Self::Resonance => "resonance",
            Self::ShiftScan => "shift-scan",
            Self::ProbeSpectrum => "probe-spectrum",
            Self::ProbeResonance => "probe-resonance",
            Self::Resolvent => "resolvent",
            Self::Experiment => "experiment",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Self::Levels => "dressed energies and splitting over a delta1 range",
            Self::Resonance => "structural and dynamical resonance loci",
            Self::ShiftScan => "exact and lowest-order shift versus omega1/omega2",
            Self::ProbeSpectrum => "weak-probe transition probability versus nu",
            Self::ProbeResonance => "probe-measured splitting over delta1 and its minimum",
            Self::Resolvent => "self-consistent levels from the level-shift operator",
            Self::Experiment => "alkali-atom numbers and feasibility verdict",
        }
    }

    /// Parameter keys accepted by the subcommand, with their help text.
    pub fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Self::Levels => &[
                ("omega1", "pump coupling"),
                ("omega2", "Stokes coupling"),
                ("delta2", "two-photon reference detuning [1]"),
                ("delta1-range", "start:stop:count [0:2:401]"),
            ],
            Self::Resonance => &[
                ("omega1", "pump coupling"),
                ("omega2", "Stokes coupling"),
                ("delta2", "reference detuning [1]"),
                ("tol", "locus tolerance relative to delta2 [1e-10]"),
            ],
            Self::ShiftScan => &[
                ("omega2", "Stokes coupling"),
                ("delta2", "reference detuning [1]"),
                ("ratio-range", "omega1/omega2 as start:stop:count [0.1:1.5:29]"),
                ("tol", "locus tolerance relative to delta2 [1e-10]"),
            ],
            Self::ProbeSpectrum => &[
                ("omega1", "pump coupling"),
                ("omega2", "Stokes coupling"),
                ("delta1", "one-photon detuning [delta2]"),
                ("delta2", "reference detuning [1]"),
                ("omega-p", "probe coupling"),
                ("duration", "probe duration"),
                ("nu-range", "start:stop:count [automatic]"),
            ],
            Self::ProbeResonance => &[
                ("omega1", "pump coupling"),
                ("omega2", "Stokes coupling"),
                ("delta2", "reference detuning [1]"),
                ("omega-p", "probe coupling"),
                ("duration", "probe duration"),
                ("delta1-range", "start:stop:count"),
            ],
            Self::Resolvent => &[
                ("omega1", "pump coupling"),
                ("omega2", "Stokes coupling"),
                ("delta1", "one-photon detuning [delta2]"),
                ("delta2", "reference detuning [1]"),
                ("tol", "convergence tolerance relative to delta2 [1e-12]"),
                ("max-iter", "iteration limit [200]"),
            ],
            Self::Experiment => &[
                ("preset", "atom preset [rb87]"),
                ("scenario", "optical or microwave"),
                ("omega", "both couplings"),
                ("omega1", "pump coupling [omega]"),
                ("omega2", "Stokes coupling [omega]"),
                ("delta2", "detuning"),
                ("hfs-splitting", "hyperfine splitting, Hz"),
                ("nuclear-spin", "nuclear spin I"),
                ("g-j", "electronic g-factor"),
                ("g-i", "nuclear g-factor"),
                ("gamma", "excited-state linewidth, Hz"),
                ("bohr-magneton", "Bohr magneton over h, Hz/G"),
            ],
        }
    }

    fn default_output(self) -> String {
        match self {
            Self::Experiment => "experiment.txt".into(),
            other => format!("{}.csv", other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Dimensionless,
    /// Frequencies given as ordinary frequencies; multiplied by 2 pi internally.
    Hz,
}

impl Units {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "dimensionless" => Ok(Self::Dimensionless),
            "hz" => Ok(Self::Hz),
            _ => Err(CliError::Malformed { key: "units".into(), value: s.into(), reason: "expected dimensionless or hz".into() }),
        }
    }

    /// Factor from input frequency to internal angular frequency.
    pub fn to_angular(self) -> f64 {
        match self {
            Self::Dimensionless => 1.0,
            Self::Hz => 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Subcommand,
    pub params: BTreeMap<String, String>,
    pub output: PathBuf,
    pub units: Units,
}

impl RunConfig {
    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.raw(key).map(|v| parse_number(key, v)).transpose()
    }

    pub fn require(&self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| CliError::MissingKey(key.into()))
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.number(key)?.unwrap_or(default))
    }

    pub fn range(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key).map(|v| parse_range(key, v)).transpose()
    }
}

pub fn parse_number(key: &str, value: &str) -> Result<f64, CliError> {
    let x: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Malformed { key: key.into(), value: value.into(), reason: "not a number".into() })?;
    if !x.is_finite() {
        return Err(CliError::Malformed { key: key.into(), value: value.into(), reason: "not finite".into() });
    }
    Ok(x)
}

/// `start:stop:count`, both ends included.
pub fn parse_range(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    let malformed = |reason: &str| CliError::Malformed { key: key.into(), value: value.into(), reason: reason.into() };
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(malformed("expected start:stop:count"));
    }
    let start = parse_number(key, parts[0])?;
    let stop = parse_number(key, parts[1])?;
    let count: usize = parts[2].trim().parse().map_err(|_| malformed("count is not a positive integer"))?;
    match count {
        0 => Err(malformed("count must be at least 1")),
        1 => Ok(vec![start]),
        n => Ok((0..n)
            .map(|i| if i == n - 1 { stop } else { start + (stop - start) * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str, source: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Syntax { file: source.into(), line: n + 1, text: line.into() })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn command() -> Command {
    let mut cmd = Command::new("raman")
        .about("Dressed-level scans and resonance loci of a driven three-level Lambda system")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sub in Subcommand::ALL {
        let mut c = Command::new(sub.name())
            .about(sub.about())
            .arg(Arg::new("config").long("config").value_name("FILE").help("flat key = value file"))
            .arg(Arg::new("output").long("output").short('o').value_name("PATH"))
            .arg(Arg::new("units").long("units").value_name("UNITS").help("dimensionless or hz [dimensionless]"));
        for &(key, help) in sub.keys() {
            c = c.arg(Arg::new(key).long(key).value_name("VALUE").help(help).action(ArgAction::Set).allow_hyphen_values(true));
        }
        cmd = cmd.subcommand(c);
    }
    cmd
}

pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = command().try_get_matches_from(args)?;
    let (name, sub_matches) = matches.subcommand().expect("subcommand is required");
    let sub = Subcommand::ALL.into_iter().find(|s| s.name() == name).expect("registered subcommand");
    let allowed: Vec<&str> = sub.keys().iter().map(|(k, _)| *k).collect();

    let mut params = BTreeMap::new();
    let mut output = None;
    let mut units = None;
    if let Some(path) = sub_matches.get_one::<String>("config") {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })?;
        for (key, value) in parse_config_file(&text, path)? {
            match key.as_str() {
                "output" => output = Some(value),
                "units" => units = Some(value),
                k if allowed.contains(&k) => {
                    params.insert(key, value);
                }
                _ => return Err(CliError::UnknownKey { key, command: name.into() }),
            }
        }
    }
    for key in &allowed {
        if let Some(v) = sub_matches.get_one::<String>(key) {
            params.insert(key.to_string(), v.clone());
        }
    }
    if let Some(v) = sub_matches.get_one::<String>("output") {
        output = Some(v.clone());
    }
    if let Some(v) = sub_matches.get_one::<String>("units") {
        units = Some(v.clone());
    }
    let units = units.as_deref().map(Units::parse).transpose()?.unwrap_or(Units::Dimensionless);
    let output = resolve_output(output.unwrap_or_else(|| sub.default_output()), std::env::var_os(OUTPUT_DIR_ENV));
    Ok(RunConfig { command: sub, params, output, units })
}

/// Directory for relative output paths.
pub const OUTPUT_DIR_ENV: &str = "RAMAN_OUTPUT_DIR";

fn resolve_output(path: String, dir: Option<OsString>) -> PathBuf {
    let path = PathBuf::from(path);
    match dir {
        Some(d) if path.is_relative() && !d.is_empty() => Path::new(&d).join(path),
        _ => path,
    }
}
