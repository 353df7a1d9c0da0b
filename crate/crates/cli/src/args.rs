use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use eop_core::mass::MassKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Effective potential V_eff(x).
    Potential,
    /// Level energies and Hamiltonian eigenvalues.
    Spectrum,
    /// Normalized eigenfunctions psi_nu(x).
    Wavefunction,
    /// Coherent-state weighting distribution |c_n|^2.
    Weights,
    /// Mandel parameter Q(J).
    Mandel,
    /// |A(t)|^2 over a time window.
    Autocorr,
    /// Wave-packet density at given times.
    Density,
    /// Density frames over a time window, with the potential.
    Evolve,
    /// Run every oracle check and print a pass/fail table.
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Potential => "potential",
            Self::Spectrum => "spectrum",
            Self::Wavefunction => "wavefunction",
            Self::Weights => "weights",
            Self::Mandel => "mandel",
            Self::Autocorr => "autocorr",
            Self::Density => "density",
            Self::Evolve => "evolve",
            Self::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    /// CSV plus an SVG polyline rendering.
    Svg,
}

/// Numerics for the rationally extended Scarf I system with position-dependent
/// mass and its Gazeau-Klauder coherent states.
#[derive(Debug, Parser)]
#[command(name = "eop", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "preset")]
    pub beta: Option<f64>,
    /// Codimension: a value, a list `0,1,2` or an inclusive range `0..3`.
    #[arg(long, conflicts_with = "preset")]
    pub m: Option<MList>,
    /// Scale of the angle variable theta = k mu(x).
    #[arg(long, conflicts_with = "preset")]
    pub k: Option<f64>,
    /// Frequency of the coherent-state phases.
    #[arg(long, conflicts_with = "preset")]
    pub omega: Option<f64>,
    #[arg(long, value_parser = parse_mass, conflicts_with = "preset")]
    pub mass: Option<MassKind>,
    #[arg(long, conflicts_with = "preset")]
    pub lambda: Option<f64>,
    /// Coherent-state label J; a comma-separated list is allowed.
    #[arg(long = "J", value_delimiter = ',', conflicts_with = "preset")]
    pub j: Option<Vec<f64>>,
    /// Series truncation of the coherent state.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Number of eigenstates for `spectrum` and `wavefunction`.
    #[arg(long)]
    pub levels: Option<u32>,
    /// Grid points (x for spatial commands, J for `mandel`).
    #[arg(long)]
    pub points: Option<usize>,
    /// Explicit grid range `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<Range>,
    /// Times, comma-separated; each is a number or a multiple of `Tcl` or
    /// `Trev`, e.g. `0,0.25Trev,Trev`.
    #[arg(long, value_delimiter = ',')]
    pub t: Option<Vec<TimeToken>>,
    /// Time window `start,end[,samples]` with the same units as `--t`.
    #[arg(long)]
    pub trace: Option<Trace>,
    /// Evaluate the constant-mass density periodically beyond the principal domain.
    #[arg(long)]
    pub periodic: bool,
    /// Output CSV path; several series get `_<label>` appended to the stem.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub preset: Option<String>,
}

fn parse_mass(s: &str) -> Result<MassKind, String> {
    MassKind::from_str(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MList(pub Vec<u32>);

impl FromStr for MList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected m as `2`, `0,1,2` or `0..3`, got `{s}`");
        if let Some((a, b)) = s.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if b < a {
                return Err(bad());
            }
            return Ok(Self((a..=b).collect()));
        }
        s.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>().map(Self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("expected `lo,hi` with lo < hi, got `{s}`");
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let lo: f64 = a.trim().parse().map_err(|_| bad())?;
        let hi: f64 = b.trim().parse().map_err(|_| bad())?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Absolute,
    Classical,
    Revival,
}

/// A time given directly or as a multiple of a period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeToken {
    pub value: f64,
    pub unit: TimeUnit,
}

impl TimeToken {
    pub fn resolve(&self, t_cl: f64, t_rev: f64) -> f64 {
        match self.unit {
            TimeUnit::Absolute => self.value,
            TimeUnit::Classical => self.value * t_cl,
            TimeUnit::Revival => self.value * t_rev,
        }
    }

    pub fn label(&self) -> String {
        let suffix = match self.unit {
            TimeUnit::Absolute => "",
            TimeUnit::Classical => "Tcl",
            TimeUnit::Revival => "Trev",
        };
        format!("{}{suffix}", self.value)
    }
}

impl FromStr for TimeToken {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (num, unit) = if let Some(n) = s.strip_suffix("Trev") {
            (n, TimeUnit::Revival)
        } else if let Some(n) = s.strip_suffix("Tcl") {
            (n, TimeUnit::Classical)
        } else {
            (s, TimeUnit::Absolute)
        };
        let value = if num.is_empty() && unit != TimeUnit::Absolute {
            1.0
        } else {
            num.parse::<f64>().map_err(|_| format!("bad time `{s}`; use e.g. `1.5`, `0.25Trev` or `Tcl`"))?
        };
        if !value.is_finite() {
            return Err(format!("time `{s}` is not finite"));
        }
        Ok(Self { value, unit })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trace {
    pub start: TimeToken,
    pub end: TimeToken,
    pub samples: Option<usize>,
}

impl FromStr for Trace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(format!("expected `start,end[,samples]`, got `{s}`"));
        }
        let samples = match parts.get(2) {
            Some(n) => {
                let n: usize = n.trim().parse().map_err(|_| format!("bad sample count `{n}`"))?;
                if n < 2 {
                    return Err("a trace needs at least 2 samples".into());
                }
                Some(n)
            }
            None => None,
        };
        Ok(Self { start: parts[0].parse()?, end: parts[1].parse()?, samples })
    }
}
