//! Executes a [`RunConfig`]: one series per parameter combination, each with
//! its own header, rows and metadata.

use rayon::prelude::*;
use serde::Serialize;

use eop_core::dynamics::{mandel, timescales, CoherentState, Timescales, WavePacket};
use eop_core::mass::{MassKind, MassProfile};
use eop_core::polynomials::XmParams;
use eop_core::scarf::{degree_eigenvalue, energy, v_eff, EigenState, SystemParams};
use eop_core::{Error, GridSpec};

use crate::args::{Command, TimeToken};
use crate::config::{RunConfig, DOMAIN_FRACTION, SAMPLES_PER_REVIVAL};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    /// Fixed formatting so reruns are byte-identical: 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Cell::Int(v) => v as f64,
            Cell::Real(v) => v,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// `x` for a uniform grid in position, `theta` for one uniform in the angle.
    pub spacing: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimescaleMeta {
    pub n_bar: f64,
    pub t_cl: f64,
    pub t_rev: f64,
}

impl From<Timescales> for TimescaleMeta {
    fn from(t: Timescales) -> Self {
        Self { n_bar: t.n_bar, t_cl: t.t_cl, t_rev: t.t_rev }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SeriesMeta {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    pub alpha: f64,
    pub beta: f64,
    pub m: u32,
    pub sigma: f64,
    pub k: f64,
    pub omega: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_discrepancies: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timescales: Option<TimescaleMeta>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridMeta>,
}

#[derive(Debug, Clone)]
pub struct Series {
    /// `(dimension, tag)` pairs; only dimensions that vary across the run
    /// make it into the label.
    pub tags: Vec<(&'static str, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: SeriesMeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub command: &'static str,
    pub preset: Option<String>,
    pub periodic: bool,
    pub notes: Vec<String>,
    pub series: Vec<SeriesMeta>,
}

pub struct Output {
    pub series: Vec<Series>,
    pub meta: RunMeta,
}

/// One `(alpha, beta, m)` choice with its mass profile and `J`.
struct System {
    params: SystemParams,
    profile: MassProfile,
    j: f64,
    tags: Vec<(&'static str, String)>,
}

impl System {
    fn base_meta(&self) -> SeriesMeta {
        let p = &self.params;
        SeriesMeta {
            alpha: p.alpha(),
            beta: p.beta(),
            m: p.m(),
            sigma: p.sigma(),
            k: p.k,
            omega: p.omega,
            ..SeriesMeta::default()
        }
    }

    fn context(&self) -> String {
        let p = &self.params;
        format!("alpha={}, beta={}, m={}", p.alpha(), p.beta(), p.m())
    }

    fn with_mass(&self, mut meta: SeriesMeta) -> SeriesMeta {
        meta.mass = Some(self.profile.kind().name().to_string());
        meta.lambda = (self.profile.kind() != MassKind::Constant).then(|| self.profile.lambda());
        meta
    }
}

/// Short decimal for file labels: `0.25` stays, `-2/3` becomes `-0.6667`.
fn num(v: f64) -> String {
    let s = v.to_string();
    if s.len() <= 6 {
        return s;
    }
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn mass_tag(p: &MassProfile) -> String {
    match p.kind() {
        MassKind::Constant => "constant".into(),
        k => format!("{k}{}", num(p.lambda())),
    }
}

fn uses_mass(c: Command) -> bool {
    matches!(c, Command::Potential | Command::Wavefunction | Command::Density | Command::Evolve)
}

fn uses_j(c: Command) -> bool {
    matches!(c, Command::Weights | Command::Autocorr | Command::Density | Command::Evolve)
}

/// Commands built on coherent states need `sigma > -1/2`.
fn uses_sigma(c: Command) -> bool {
    uses_j(c) || c == Command::Mandel
}

fn core(cmd: Command, context: String) -> impl FnOnce(Error) -> Failure {
    move |source| Failure::Core { context: format!("{} ({context})", cmd.name()), source }
}

fn systems(cfg: &RunConfig, notes: &mut Vec<String>) -> Result<Vec<System>, Failure> {
    let cmd = cfg.command;
    let masses: &[MassProfile] = if uses_mass(cmd) { &cfg.masses } else { &[MassProfile::constant()] };
    let js: &[f64] = if uses_j(cmd) { &cfg.js } else { &[f64::NAN] };
    let mut out = Vec::new();
    for &(alpha, beta) in &cfg.shapes {
        for &m in &cfg.ms {
            let context = format!("alpha={alpha}, beta={beta}, m={m}");
            let built = XmParams::new(alpha, beta, m)
                .and_then(|xm| SystemParams::new(xm, cfg.k, cfg.omega))
                .and_then(|p| {
                    if uses_sigma(cmd) {
                        eop_core::dynamics::check_sigma(cmd.name(), &p)?;
                    }
                    Ok(p)
                });
            let params = match built {
                Ok(p) => p,
                Err(e) if cfg.skip_inadmissible && e.is_inadmissible() => {
                    notes.push(format!("skipped {context}: {e}"));
                    continue;
                }
                Err(e) => return Err(core(cmd, context)(e)),
            };
            for profile in masses {
                for &j in js {
                    let mut tags = vec![("a", format!("a{}", num(alpha))), ("b", format!("b{}", num(beta))), ("m", format!("m{m}"))];
                    if uses_mass(cmd) {
                        tags.push(("mass", mass_tag(profile)));
                    }
                    if uses_j(cmd) {
                        tags.push(("J", format!("J{}", num(j))));
                    }
                    out.push(System { params, profile: *profile, j, tags });
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("no admissible parameter set left to compute".into()));
    }
    Ok(out)
}

/// Maps `x` into the principal constant-mass domain `[-h, h]`, `h = pi/(2k)`.
/// The eigenfunctions depend on `x` only through `sin(k x)`, which is even
/// about each wall.
pub fn fold_periodic(x: f64, k: f64) -> f64 {
    let h = std::f64::consts::FRAC_PI_2 / k;
    let mut y = (x + h).rem_euclid(4.0 * h);
    if y > 2.0 * h {
        y = 4.0 * h - y;
    }
    (y - h).clamp(-h, h)
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub fn run(cfg: &RunConfig) -> Result<Output, Failure> {
    let mut notes = cfg.notes.clone();
    let systems = systems(cfg, &mut notes)?;
    let mut series = Vec::new();
    for sys in &systems {
        let fail = core(cfg.command, sys.context());
        let produced = match cfg.command {
            Command::Potential => potential(cfg, sys),
            Command::Spectrum => Ok(spectrum(cfg, sys)),
            Command::Wavefunction => wavefunction(cfg, sys),
            Command::Weights => weights(cfg, sys),
            Command::Mandel => mandel_curve(cfg, sys),
            Command::Autocorr => autocorr(cfg, sys),
            Command::Density => density(cfg, sys),
            Command::Evolve => evolve(cfg, sys),
            Command::Validate => unreachable!("validate has no series"),
        };
        series.extend(produced.map_err(|e| match e {
            Step::Core(e) => fail(e),
            Step::Usage(msg) => Failure::Usage(msg),
        })?);
    }
    label(&mut series);
    let meta = RunMeta {
        command: cfg.command.name(),
        preset: cfg.preset.clone(),
        periodic: cfg.periodic,
        notes,
        series: series.iter().map(|s| s.meta.clone()).collect(),
    };
    Ok(Output { series, meta })
}

/// Keeps only the tags whose value differs between series.
fn label(series: &mut [Series]) {
    let dims: Vec<&'static str> = {
        let mut d: Vec<&'static str> = Vec::new();
        for s in series.iter() {
            for (dim, _) in &s.tags {
                if !d.contains(dim) {
                    d.push(dim);
                }
            }
        }
        d
    };
    let varying: Vec<&'static str> = dims
        .into_iter()
        .filter(|dim| {
            let mut vals = series.iter().filter_map(|s| s.tags.iter().find(|t| t.0 == *dim).map(|t| &t.1));
            let first = vals.next();
            vals.any(|v| Some(v) != first)
        })
        .collect();
    for s in series.iter_mut() {
        let parts: Vec<&str> =
            s.tags.iter().filter(|t| varying.contains(&t.0)).map(|t| t.1.as_str()).collect();
        s.meta.label = parts.join("_");
    }
}

enum Step {
    Core(Error),
    Usage(String),
}

impl From<Error> for Step {
    fn from(e: Error) -> Self {
        Step::Core(e)
    }
}

type StepResult = Result<Vec<Series>, Step>;

/// Spatial sample points. An explicit `--range` gives a uniform grid in `x`;
/// the default spaces the points uniformly in the angle `theta = k mu(x)`
/// over `DOMAIN_FRACTION` of `[-pi/2, pi/2]`, which keeps the sampling dense
/// where the eigenfunctions vary, whatever the mass profile.
struct XGrid {
    nodes: Vec<f64>,
    meta: GridMeta,
}

fn grid_for(cfg: &RunConfig, sys: &System) -> Result<XGrid, Error> {
    let (spec, spacing) = match cfg.range {
        Some(r) => (GridSpec::new(r.lo, r.hi, cfg.points)?, "x"),
        None => (GridSpec::centered(std::f64::consts::FRAC_PI_2, DOMAIN_FRACTION, cfg.points)?, "theta"),
    };
    let nodes = match spacing {
        "x" => spec.nodes(),
        _ => spec.nodes().iter().map(|&th| sys.profile.mu_inverse(th / cfg.k)).collect(),
    };
    let meta = GridMeta { lo: nodes[0], hi: nodes[nodes.len() - 1], points: nodes.len(), spacing };
    Ok(XGrid { nodes, meta })
}

fn potential(cfg: &RunConfig, sys: &System) -> StepResult {
    let grid = grid_for(cfg, sys)?;
    let rows = grid
        .nodes
        .par_iter()
        .map(|&x| Ok(vec![Cell::Real(x), Cell::Real(v_eff(&sys.params, &sys.profile, x)?)]))
        .collect::<Result<_, Error>>()?;
    let meta = SeriesMeta { grid: Some(grid.meta.clone()), ..sys.with_mass(sys.base_meta()) };
    Ok(vec![Series { tags: sys.tags.clone(), header: header(&["x", "V_eff"]), rows, meta }])
}

fn spectrum(cfg: &RunConfig, sys: &System) -> Vec<Series> {
    let p = &sys.params;
    let rows = (0..cfg.levels)
        .map(|nu| {
            let degree = nu + p.m();
            vec![
                Cell::Int(nu as u64),
                Cell::Int(degree as u64),
                Cell::Real(energy(p, nu)),
                Cell::Real(degree_eigenvalue(p, degree)),
            ]
        })
        .collect();
    vec![Series {
        tags: sys.tags.clone(),
        header: header(&["nu", "degree", "e_nu", "e_degree"]),
        rows,
        meta: sys.base_meta(),
    }]
}

fn wavefunction(cfg: &RunConfig, sys: &System) -> StepResult {
    let grid = grid_for(cfg, sys)?;
    let states: Vec<EigenState> = (0..cfg.levels)
        .into_par_iter()
        .map(|nu| EigenState::new(&sys.params, &sys.profile, nu))
        .collect::<Result<_, Error>>()?;
    let rows = grid
        .nodes
        .par_iter()
        .map(|&x| {
            let mut row = vec![Cell::Real(x)];
            for s in &states {
                row.push(Cell::Real(s.psi(x)?));
            }
            Ok(row)
        })
        .collect::<Result<_, Error>>()?;
    let mut cols = vec!["x".to_string()];
    cols.extend((0..cfg.levels).map(|nu| format!("psi_{nu}")));
    let meta = SeriesMeta {
        grid: Some(grid.meta.clone()),
        norm_discrepancies: Some(states.iter().map(|s| s.norm_discrepancy).collect()),
        ..sys.with_mass(sys.base_meta())
    };
    Ok(vec![Series { tags: sys.tags.clone(), header: cols, rows, meta }])
}

fn coherent_meta(sys: &System, cs: &CoherentState) -> SeriesMeta {
    SeriesMeta {
        j: Some(sys.j),
        n_max: Some(cs.n_max()),
        tail: Some(cs.tail()),
        tail_bound: Some(cs.tail_bound()),
        ..sys.base_meta()
    }
}

fn weights(cfg: &RunConfig, sys: &System) -> StepResult {
    let cs = CoherentState::new(&sys.params, sys.j, cfg.n_max)?;
    let rows = cs.weights().iter().enumerate().map(|(n, &w)| vec![Cell::Int(n as u64), Cell::Real(w)]).collect();
    Ok(vec![Series {
        tags: sys.tags.clone(),
        header: header(&["n", "weight"]),
        rows,
        meta: coherent_meta(sys, &cs),
    }])
}

fn mandel_curve(cfg: &RunConfig, sys: &System) -> StepResult {
    let r = cfg.range.expect("mandel always has a J range");
    let grid = GridSpec::new(r.lo, r.hi, cfg.points)?;
    let rows = grid
        .nodes()
        .into_par_iter()
        .map(|j| Ok(vec![Cell::Real(j), Cell::Real(mandel(&sys.params, j)?)]))
        .collect::<Result<_, Error>>()?;
    let grid = GridMeta { lo: grid.lo, hi: grid.hi, points: grid.points, spacing: "J" };
    let meta = SeriesMeta { grid: Some(grid), ..sys.base_meta() };
    Ok(vec![Series { tags: sys.tags.clone(), header: header(&["J", "Q"]), rows, meta }])
}

fn resolve(token: &TimeToken, ts: &Timescales) -> f64 {
    token.resolve(ts.t_cl, ts.t_rev)
}

fn window(cfg: &RunConfig, ts: &Timescales, default_samples: impl Fn(f64) -> usize) -> Result<Vec<f64>, Step> {
    let (t0, t1) = (resolve(&cfg.trace.start, ts), resolve(&cfg.trace.end, ts));
    if !(t1 > t0) {
        return Err(Step::Usage(format!("--trace end {t1} must come after start {t0}")));
    }
    let n = cfg.trace.samples.unwrap_or_else(|| default_samples(t1 - t0)).max(2);
    let dt = (t1 - t0) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { t1 } else { t0 + i as f64 * dt }).collect())
}

fn autocorr(cfg: &RunConfig, sys: &System) -> StepResult {
    let cs = CoherentState::new(&sys.params, sys.j, cfg.n_max)?;
    let ts = timescales(&sys.params, sys.j)?;
    let times = window(cfg, &ts, |span| (SAMPLES_PER_REVIVAL * span / ts.t_rev).ceil() as usize + 1)?;
    let rows = times
        .par_iter()
        .map(|&t| vec![Cell::Real(t / ts.t_cl), Cell::Real(cs.autocorrelation_sq(t))])
        .collect();
    let meta = SeriesMeta { timescales: Some(ts.into()), ..coherent_meta(sys, &cs) };
    Ok(vec![Series { tags: sys.tags.clone(), header: header(&["t_over_Tcl", "autocorr_sq"]), rows, meta }])
}

fn packet(cfg: &RunConfig, sys: &System) -> Result<(WavePacket, Timescales, SeriesMeta), Step> {
    let cs = CoherentState::new(&sys.params, sys.j, cfg.n_max)?;
    let ts = timescales(&sys.params, sys.j)?;
    let meta = coherent_meta(sys, &cs);
    let wp = WavePacket::new(cs, &sys.profile)?;
    let meta = SeriesMeta {
        timescales: Some(ts.into()),
        norm_discrepancies: Some(wp.states().iter().map(|s| s.norm_discrepancy).collect()),
        ..sys.with_mass(meta)
    };
    Ok((wp, ts, meta))
}

fn density(cfg: &RunConfig, sys: &System) -> StepResult {
    let grid = grid_for(cfg, sys)?;
    let (wp, ts, meta) = packet(cfg, sys)?;
    let k = sys.params.k;
    let mut out = Vec::new();
    for token in &cfg.times {
        let t = resolve(token, &ts);
        let rows = grid
            .nodes
            .par_iter()
            .map(|&x| {
                let at = if cfg.periodic { fold_periodic(x, k) } else { x };
                Ok(vec![Cell::Real(x), Cell::Real(wp.density(at, t)?)])
            })
            .collect::<Result<_, Error>>()?;
        let mut tags = sys.tags.clone();
        tags.push(("t", format!("t{}", token.label())));
        out.push(Series {
            tags,
            header: header(&["x", "density"]),
            rows,
            meta: SeriesMeta { t: Some(t), grid: Some(grid.meta.clone()), ..meta.clone() },
        });
    }
    Ok(out)
}

fn evolve(cfg: &RunConfig, sys: &System) -> StepResult {
    let grid = grid_for(cfg, sys)?;
    let (wp, ts, meta) = packet(cfg, sys)?;
    let times = window(cfg, &ts, |_| crate::config::EVOLVE_FRAMES)?;
    let nodes = &grid.nodes;
    let potential: Vec<f64> =
        nodes.par_iter().map(|&x| v_eff(&sys.params, &sys.profile, x)).collect::<Result<_, Error>>()?;
    let mut out = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let rows = nodes
            .par_iter()
            .zip(&potential)
            .map(|(&x, &v)| Ok(vec![Cell::Real(x), Cell::Real(wp.density(x, t)?), Cell::Real(v)]))
            .collect::<Result<_, Error>>()?;
        let mut tags = sys.tags.clone();
        tags.push(("frame", format!("f{i}")));
        out.push(Series {
            tags,
            header: header(&["x", "density", "V_eff"]),
            rows,
            meta: SeriesMeta { t: Some(t), grid: Some(grid.meta.clone()), ..meta.clone() },
        });
    }
    Ok(out)
}
