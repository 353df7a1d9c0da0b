//! Turns parsed flags or a preset name into a fully populated [`RunConfig`].
//! Every combination check happens here, before any numerics run.

use std::f64::consts::PI;
use std::path::PathBuf;

use eop_core::mass::{MassKind, MassProfile};

use crate::args::{Cli, Command, Format, Range, TimeToken, TimeUnit, Trace};
use crate::Failure;

/// Default number of frames for `evolve`.
pub const EVOLVE_FRAMES: usize = 9;
/// Default autocorrelation sampling density, per revival time.
pub const SAMPLES_PER_REVIVAL: f64 = 2048.0;
/// Default fraction of the admissible domain covered by spatial grids.
pub const DOMAIN_FRACTION: f64 = 0.999;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `(alpha, beta)` pairs; each is combined with every entry of `ms`.
    pub shapes: Vec<(f64, f64)>,
    pub ms: Vec<u32>,
    pub k: f64,
    pub omega: f64,
    pub masses: Vec<MassProfile>,
    pub js: Vec<f64>,
    pub n_max: u32,
    pub levels: u32,
    pub points: usize,
    pub range: Option<Range>,
    pub times: Vec<TimeToken>,
    pub trace: Trace,
    pub periodic: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub preset: Option<String>,
    /// Presets skip parameter sets that cannot be built and record why;
    /// explicit flags fail instead.
    pub skip_inadmissible: bool,
    pub notes: Vec<String>,
}

fn allowed(command: Command) -> &'static [&'static str] {
    use Command::*;
    match command {
        Potential => &["alpha", "beta", "m", "k", "mass", "lambda", "points", "range", "out", "format", "preset"],
        Spectrum => &["alpha", "beta", "m", "levels", "out", "format", "preset"],
        Wavefunction => {
            &["alpha", "beta", "m", "k", "mass", "lambda", "levels", "points", "range", "out", "format", "preset"]
        }
        Weights => &["alpha", "beta", "m", "J", "nmax", "out", "format", "preset"],
        Mandel => &["alpha", "beta", "m", "points", "range", "out", "format", "preset"],
        Autocorr => &["alpha", "beta", "m", "k", "omega", "J", "nmax", "trace", "out", "format", "preset"],
        Density => &[
            "alpha", "beta", "m", "k", "omega", "mass", "lambda", "J", "nmax", "points", "range", "t", "periodic",
            "out", "format", "preset",
        ],
        Evolve => &[
            "alpha", "beta", "m", "k", "omega", "mass", "lambda", "J", "nmax", "points", "range", "trace", "out",
            "format", "preset",
        ],
        Validate => &[],
    }
}

fn given(cli: &Cli) -> Vec<&'static str> {
    let flags = [
        ("alpha", cli.alpha.is_some()),
        ("beta", cli.beta.is_some()),
        ("m", cli.m.is_some()),
        ("k", cli.k.is_some()),
        ("omega", cli.omega.is_some()),
        ("mass", cli.mass.is_some()),
        ("lambda", cli.lambda.is_some()),
        ("J", cli.j.is_some()),
        ("nmax", cli.nmax.is_some()),
        ("levels", cli.levels.is_some()),
        ("points", cli.points.is_some()),
        ("range", cli.range.is_some()),
        ("t", cli.t.is_some()),
        ("trace", cli.trace.is_some()),
        ("periodic", cli.periodic),
        ("out", cli.out.is_some()),
        ("format", cli.format.is_some()),
        ("preset", cli.preset.is_some()),
    ];
    flags.into_iter().filter(|f| f.1).map(|f| f.0).collect()
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let cmd = cli.command;
        let ok = allowed(cmd);
        if let Some(bad) = given(cli).into_iter().find(|f| !ok.contains(f)) {
            return Err(usage(format!("--{bad} does not apply to `{}`", cmd.name())));
        }

        let mut cfg = match &cli.preset {
            Some(name) => {
                let cfg = preset(name)?;
                if cfg.command != cmd {
                    return Err(usage(format!(
                        "preset `{name}` belongs to `{}`, not `{}`",
                        cfg.command.name(),
                        cmd.name()
                    )));
                }
                cfg
            }
            None => Self::defaults(cmd),
        };

        if let Some(a) = cli.alpha {
            cfg.shapes[0].0 = finite("alpha", a)?;
        }
        if let Some(b) = cli.beta {
            cfg.shapes[0].1 = finite("beta", b)?;
        }
        if let Some(m) = &cli.m {
            cfg.ms = m.0.clone();
        }
        if let Some(k) = cli.k {
            cfg.k = positive("k", k)?;
        }
        if let Some(w) = cli.omega {
            cfg.omega = positive("omega", w)?;
        }
        match (cli.mass, cli.lambda) {
            (Some(MassKind::Constant) | None, Some(_)) => {
                return Err(usage("--lambda needs a variable mass (--mass wos or --mass ws)"));
            }
            (Some(kind), lambda) => {
                let lambda = positive("lambda", lambda.unwrap_or(1.0))?;
                cfg.masses = vec![MassProfile::new(kind, lambda).map_err(|e| usage(e.to_string()))?];
            }
            (None, None) => {}
        }
        if let Some(js) = &cli.j {
            cfg.js = js.iter().map(|&j| positive("J", j)).collect::<Result<_, _>>()?;
        }
        if let Some(n) = cli.nmax {
            if n == 0 {
                return Err(usage("--nmax must be at least 1"));
            }
            cfg.n_max = n;
        }
        if let Some(l) = cli.levels {
            if l == 0 {
                return Err(usage("--levels must be at least 1"));
            }
            cfg.levels = l;
        }
        if let Some(p) = cli.points {
            if p < 2 {
                return Err(usage("--points must be at least 2"));
            }
            cfg.points = p;
        }
        if cli.range.is_some() {
            cfg.range = cli.range;
        }
        if let Some(t) = &cli.t {
            cfg.times = t.clone();
        }
        if let Some(tr) = cli.trace {
            cfg.trace = tr;
        }
        cfg.periodic |= cli.periodic;
        cfg.out = cli.out.clone();
        cfg.format = cli.format.unwrap_or(Format::Csv);
        cfg.check()?;
        Ok(cfg)
    }

    fn defaults(command: Command) -> Self {
        let (trace, range) = match command {
            Command::Evolve => (
                Trace {
                    start: TimeToken { value: 0.0, unit: TimeUnit::Absolute },
                    end: TimeToken { value: 1.0, unit: TimeUnit::Classical },
                    samples: Some(EVOLVE_FRAMES),
                },
                None,
            ),
            Command::Mandel => (revival_trace(), Some(Range { lo: 0.05, hi: 50.0 })),
            _ => (revival_trace(), None),
        };
        Self {
            command,
            shapes: vec![(1.0, 2.0)],
            ms: vec![0],
            k: 1.0,
            omega: 1.0,
            masses: vec![MassProfile::constant()],
            js: vec![20.0],
            n_max: 50,
            levels: 5,
            points: 1001,
            range,
            times: vec![TimeToken { value: 0.0, unit: TimeUnit::Absolute }],
            trace,
            periodic: false,
            out: None,
            format: Format::Csv,
            preset: None,
            skip_inadmissible: false,
            notes: Vec::new(),
        }
    }

    fn check(&self) -> Result<(), Failure> {
        if self.periodic && self.masses.iter().any(|p| p.kind() != MassKind::Constant) {
            return Err(usage("--periodic needs the constant mass profile"));
        }
        if self.format == Format::Svg && self.out.is_none() {
            return Err(usage("--format svg needs --out"));
        }
        if self.command == Command::Mandel {
            if let Some(r) = self.range {
                if r.lo <= 0.0 {
                    return Err(usage(format!("the J range must be positive, got {}", r.lo)));
                }
            }
        } else if let Some(r) = self.range {
            if !self.periodic {
                for p in &self.masses {
                    let h = p.half_width(self.k);
                    if r.lo <= -h || r.hi >= h {
                        return Err(usage(format!(
                            "--range {},{} leaves the open domain (-{h}, {h}) of the {p} profile",
                            r.lo, r.hi
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn revival_trace() -> Trace {
    Trace {
        start: TimeToken { value: 0.0, unit: TimeUnit::Absolute },
        end: TimeToken { value: 1.0, unit: TimeUnit::Revival },
        samples: None,
    }
}

pub const PRESETS: [&str; 24] = [
    "fig1", "fig2", "fig3-A", "fig3-B", "fig3-C", "fig3-D", "fig4-J10", "fig4-J20", "fig4-J40", "fig4-J80",
    "fig5", "fig5-periodic", "fig6-A", "fig6-B", "fig6-C", "fig7-A", "fig7-B", "fig7-C", "fig8-A", "fig8-B",
    "fig8-C", "fig9-A", "fig9-B", "fig9-C",
];

fn quarter_revivals() -> Vec<TimeToken> {
    [0.0, 0.25, 0.5, 1.0].iter().map(|&v| TimeToken { value: v, unit: TimeUnit::Revival }).collect()
}

fn wos(lambda: f64) -> MassProfile {
    MassProfile::new(MassKind::Wos, lambda).expect("preset lambda is positive")
}

fn ws(lambda: f64) -> MassProfile {
    MassProfile::new(MassKind::Ws, lambda).expect("preset lambda is positive")
}

fn letter(name: &str, prefix: &str) -> Option<usize> {
    match name.strip_prefix(prefix)? {
        "A" => Some(0),
        "B" => Some(1),
        "C" => Some(2),
        "D" => Some(3),
        _ => None,
    }
}

/// The named figure scenario.
pub fn preset(name: &str) -> Result<RunConfig, Failure> {
    let unknown = || usage(format!("unknown preset `{name}`; available: {}", PRESETS.join(", ")));
    let base = |command| RunConfig {
        preset: Some(name.to_string()),
        skip_inadmissible: true,
        ..RunConfig::defaults(command)
    };
    let cfg = match name {
        "fig1" => RunConfig { ms: vec![0, 1, 2, 3], masses: vec![wos(1.0), ws(1.0)], ..base(Command::Potential) },
        "fig2" => RunConfig { ms: vec![0, 1, 2], js: vec![10.0, 20.0, 40.0, 80.0], ..base(Command::Weights) },
        "fig5" => RunConfig { ms: vec![0, 1], times: quarter_revivals(), ..base(Command::Density) },
        // The constant-mass system repeats with period 2 pi / k; two full
        // periods show the images of the packet beyond the walls.
        "fig5-periodic" => RunConfig {
            ms: vec![0, 1],
            times: quarter_revivals(),
            periodic: true,
            range: Some(Range { lo: -2.0 * PI, hi: 2.0 * PI }),
            ..base(Command::Density)
        },
        _ => {
            if let Some(i) = letter(name, "fig3-") {
                RunConfig { shapes: REGIONS[i].to_vec(), ms: vec![0, 1], ..base(Command::Mandel) }
            } else if let Some(j) = name.strip_prefix("fig4-J") {
                let j: f64 = match j {
                    "10" | "20" | "40" | "80" => j.parse().expect("literal"),
                    _ => return Err(unknown()),
                };
                RunConfig { shapes: vec![(1.5, 2.5)], ms: vec![0, 1, 2], js: vec![j], ..base(Command::Autocorr) }
            } else if let Some(i) = letter(name, "fig6-").or(letter(name, "fig7-")).filter(|&i| i < 3) {
                let l = LAMBDAS_67[i];
                let mass = if name.starts_with("fig6") { wos(l) } else { ws(l) };
                RunConfig { ms: vec![0, 1], masses: vec![mass], times: quarter_revivals(), ..base(Command::Density) }
            } else if let Some(i) = letter(name, "fig8-").or(letter(name, "fig9-")).filter(|&i| i < 3) {
                let m = if name.starts_with("fig8") { 0 } else { 1 };
                RunConfig { ms: vec![m], masses: vec![wos(LAMBDAS_89[i])], ..base(Command::Evolve) }
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(cfg)
}

const LAMBDAS_67: [f64; 3] = [0.25, 1.0, 2.0];
const LAMBDAS_89: [f64; 3] = [0.5, 2.0, 4.0];

/// `(alpha, beta)` sets for the four `m = 1` parameter regions, fixed `beta`
/// and varying `alpha`.
const REGIONS: [&[(f64, f64)]; 4] = [
    &[(-0.5, -1.0 / 3.0), (-2.0 / 3.0, -1.0 / 3.0), (-0.8, -1.0 / 3.0), (-0.9, -1.0 / 3.0)],
    &[(-0.6, -0.75), (-0.4, -0.75), (-0.25, -0.75), (0.0, -0.75)],
    &[(0.25, 2.0), (0.5, 2.0), (1.0, 2.0), (1.5, 2.0)],
    &[(1.5, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)],
];

#[cfg(test)]
mod tests {
    use super::*;
    use eop_core::dynamics::{classify_region, Region};

    #[test]
    fn every_listed_preset_resolves() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            assert_eq!(cfg.preset.as_deref(), Some(name));
        }
    }

    #[test]
    fn unknown_preset_lists_names() {
        let Err(Failure::Usage(msg)) = preset("fig10") else { panic!() };
        assert!(msg.contains("fig4-J20") && msg.contains("fig9-C"));
        assert!(preset("fig4-J30").is_err());
        assert!(preset("fig6-D").is_err());
    }

    #[test]
    fn region_sets_match_their_letter() {
        let want = [Region::A, Region::B, Region::C, Region::D];
        for (set, r) in REGIONS.iter().zip(want) {
            for &(a, b) in *set {
                assert_eq!(classify_region(a, b), Some(r), "({a}, {b})");
            }
        }
    }

    #[test]
    fn figure_parameters() {
        let c = preset("fig4-J20").unwrap();
        assert_eq!((c.command, c.shapes.clone(), c.ms.clone(), c.js.clone(), c.n_max), (
            Command::Autocorr,
            vec![(1.5, 2.5)],
            vec![0, 1, 2],
            vec![20.0],
            50
        ));
        let c = preset("fig6-A").unwrap();
        assert_eq!(c.masses, vec![wos(0.25)]);
        assert_eq!((c.shapes[0], c.js[0]), ((1.0, 2.0), 20.0));
        let c = preset("fig8-C").unwrap();
        assert_eq!((c.command, c.ms.clone(), c.masses.clone()), (Command::Evolve, vec![0], vec![wos(4.0)]));
        assert_eq!(c.trace.samples, Some(EVOLVE_FRAMES));
        assert_eq!(c.trace.end.unit, TimeUnit::Classical);
    }
}
