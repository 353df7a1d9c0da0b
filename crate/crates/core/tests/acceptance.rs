//! Acceptance gate. Prints one PASS/FAIL line per criterion and sub-case.
//!
//! Two groups of lines are expected to fail and are listed in
//! `KNOWN_DEVIATIONS`: the truncated Mandel asymptote has the wrong
//! `J^{-1/2}` coefficient for larger `sigma`, and for `m >= 1` the level
//! energies `e_nu` are not the Hamiltonian eigenvalues of the states of
//! degree `nu + m`. Each is paired with a line checking the corrected
//! statement, which must pass.

use std::f64::consts::PI;

use eop_core::dynamics::{
    mandel, mandel_asymptote, mandel_asymptote_truncated, mean_n, mean_n2, norm_const, norm_const_series, rho,
    rho_product, timescales, weights, CoherentState, WavePacket,
};
use eop_core::grid::trapezoid;
use eop_core::mass::{MassKind, MassProfile};
use eop_core::polynomials::{ode_residual, xm_jacobi_jet, xm_norm, xm_overlap, XmParams};
use eop_core::scarf::{
    degree_eigenvalue, energy, partner_potentials, shape_invariance_residual, superpotential, SystemParams,
};
use eop_core::validation::{gram_error, profiles, rayleigh_error, SCARF_SETS};
use eop_core::GridSpec;

const KNOWN_DEVIATIONS: &[&str] = &["3a sigma=1", "3a sigma=2", "7a m=1", "7a m=2"];

struct Line {
    id: String,
    label: String,
    measured: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Default)]
struct Report(Vec<Line>);

impl Report {
    fn within(&mut self, id: impl Into<String>, label: impl Into<String>, measured: f64, tolerance: f64) {
        let passed = measured <= tolerance;
        self.push(id.into(), label.into(), measured, tolerance, passed);
    }

    fn holds(&mut self, id: impl Into<String>, label: impl Into<String>, ok: bool) {
        self.push(id.into(), label.into(), if ok { 0.0 } else { 1.0 }, 0.0, ok);
    }

    fn push(&mut self, id: String, label: String, measured: f64, tolerance: f64, passed: bool) {
        let known = KNOWN_DEVIATIONS.iter().any(|k| id.starts_with(k));
        println!(
            "{} [{id}] {label}: {measured:.3e} (tol {tolerance:.0e}){}",
            if passed { "PASS" } else { "FAIL" },
            if known { " known deviation" } else { "" }
        );
        self.0.push(Line { id, label, measured, tolerance, passed });
    }

    fn finish(self) {
        let unexpected: Vec<String> = self
            .0
            .iter()
            .filter(|l| !l.passed && !KNOWN_DEVIATIONS.iter().any(|k| l.id.starts_with(k)))
            .map(|l| format!("[{}] {} = {:e} > {:e}", l.id, l.label, l.measured, l.tolerance))
            .collect();
        println!(
            "{} lines, {} passed, {} known deviations, {} unexpected failures",
            self.0.len(),
            self.0.iter().filter(|l| l.passed).count(),
            self.0.iter().filter(|l| !l.passed).count() - unexpected.len(),
            unexpected.len()
        );
        assert!(unexpected.is_empty(), "unexpected failures:\n{}", unexpected.join("\n"));
    }
}

fn unit(a: f64, b: f64, m: u32) -> SystemParams {
    SystemParams::unit(a, b, m).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn label(p: &SystemParams, prof: &MassProfile) -> String {
    format!("({}, {}, {}) {} lambda={}", p.alpha(), p.beta(), p.m(), prof.kind(), prof.lambda())
}

fn mean_level(r: &mut Report) {
    for (m, want) in [(0, 4.40365), (1, 5.15475)] {
        let got = mean_n(&unit(1.0, 2.0, m), 20.0).unwrap();
        r.within(format!("1 m={m}"), format!("<n> = {got:.6} vs {want}"), (got - want).abs(), 5e-4);
    }
}

fn classical_periods(r: &mut Report) {
    for (m, want) in [(0, 0.98118), (1, 1.02087)] {
        let ts = timescales(&unit(1.0, 2.0, m), 20.0).unwrap();
        r.within(format!("2 m={m}"), format!("T_cl = {:.6} vs {want}", ts.t_cl), (ts.t_cl - want).abs(), 1e-4);
        r.holds(format!("2 m={m} rev"), "T_rev = 4 pi exactly", ts.t_rev == 4.0 * PI);
    }
}

fn mandel_limits(r: &mut Report) {
    let j = 1e6;
    // Q depends on sigma alone; m = 0 sets with alpha + beta = 2 sigma - 1.
    for sigma in [-0.4, 0.5, 1.0, 2.0] {
        let p = unit(sigma - 0.5, sigma - 0.5, 0);
        let q = mandel(&p, j).unwrap();
        r.within(
            format!("3a sigma={sigma}"),
            "Q(1e6) vs -1/2 - (4s+1)(4s+3)/64 sqrt(2/J)",
            (q - mandel_asymptote_truncated(sigma, j)).abs(),
            1e-3,
        );
        r.within(
            format!("3b sigma={sigma}"),
            "Q(1e6) vs -1/2 + (4s+1)/16 sqrt(2/J)",
            (q - mandel_asymptote(sigma, j)).abs(),
            1e-5,
        );
    }
    let sets = [("C", [(0.25, 2.0), (0.5, 2.0), (1.0, 2.0), (1.5, 2.0)]), ("D", [(1.5, 1.0), (2.0, 1.0), (3.0, 1.0), (4.0, 1.0)])];
    for (region, params) in sets {
        for m in [0, 1] {
            let worst = params
                .iter()
                .flat_map(|&(a, b)| {
                    let p = unit(a, b, m);
                    (1..=500).map(move |i| mandel(&p, 0.1 * i as f64).unwrap())
                })
                .fold(f64::NEG_INFINITY, f64::max);
            r.holds(format!("3c {region} m={m}"), format!("Q < 0 on J in (0, 50], max Q = {worst:.3e}"), worst < 0.0);
        }
    }
}

fn full_revival(r: &mut Report) {
    let prof = MassProfile::constant();
    let grid = GridSpec::centered(prof.half_width(1.0), 0.999, 1001).unwrap();
    for m in 0..=2 {
        let p = unit(1.5, 2.5, m);
        let t_rev = timescales(&p, 20.0).unwrap().t_rev;
        for j in [10.0, 20.0, 40.0, 80.0] {
            let cs = CoherentState::new(&p, j, 50).unwrap();
            let a = cs.autocorrelation_sq(t_rev);
            r.within(format!("4 m={m} J={j}"), "| |A(t_rev)|^2 - 1 |", (a - 1.0).abs(), 1e-6);
        }
        let wp = WavePacket::new(CoherentState::new(&p, 20.0, 50).unwrap(), &prof).unwrap();
        let d0 = wp.density_on(&grid, 0.0).unwrap();
        let d1 = wp.density_on(&grid, t_rev).unwrap();
        let sq: Vec<f64> = d0.iter().zip(&d1).map(|(a, b)| (a - b).powi(2)).collect();
        r.within(format!("4 m={m} density"), "L2 distance density(0) vs density(t_rev)", trapezoid(&sq, grid.step()).sqrt(), 1e-4);
    }
}

fn density_peak(r: &mut Report) {
    let prof = MassProfile::constant();
    let grid = GridSpec::centered(prof.half_width(1.0), 0.999, 1001).unwrap();
    let wp = WavePacket::new(CoherentState::new(&unit(1.0, 2.0, 0), 20.0, 50).unwrap(), &prof).unwrap();
    let d = wp.density_on(&grid, 0.0).unwrap();
    let (i, _) = (1..d.len() - 1)
        .filter(|&i| d[i] >= d[i - 1] && d[i] >= d[i + 1])
        .map(|i| (i, d[i]))
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    let x = grid.node(i);
    r.within("5", format!("dominant interior maximum at x = {x:.4}, |x - 1.25|"), (x - 1.25).abs(), 0.15);
}

fn orthonormality(r: &mut Report) {
    for &(a, b, m) in &SCARF_SETS {
        let p = unit(a, b, m);
        for prof in profiles() {
            r.within(format!("6 m={m}"), format!("Gram psi_0..psi_8 {}", label(&p, &prof)), gram_error(&p, &prof, 9).unwrap(), 1e-8);
        }
    }
}

fn hamiltonian(r: &mut Report) {
    for &(a, b, m) in &SCARF_SETS {
        let p = unit(a, b, m);
        for prof in profiles() {
            let tol = if prof.kind() == MassKind::Constant { 1e-5 } else { 1e-4 };
            let stated = rayleigh_error(&p, &prof, |s| energy(s.params(), s.level)).unwrap();
            r.within(format!("7a m={m}"), format!("Rayleigh vs e_nu, nu <= 4, {}", label(&p, &prof)), stated, tol);
            let actual = rayleigh_error(&p, &prof, |s| degree_eigenvalue(s.params(), s.degree)).unwrap();
            r.within(format!("7b m={m}"), format!("Rayleigh vs e(nu + m), nu <= 4, {}", label(&p, &prof)), actual, tol);
        }
    }
}

fn shape_invariance(r: &mut Report) {
    for &(a, b, m) in &SCARF_SETS {
        let p = unit(a, b, m);
        let em = 0.5 * m as f64 * (a + b + 1.0 - m as f64);
        for prof in profiles() {
            let h = prof.half_width(1.0);
            let xs: Vec<f64> = (1..=200).map(|i| -h + 2.0 * h * i as f64 / 201.0).collect();
            let si = xs.iter().map(|&x| shape_invariance_residual(&p, &prof, x).unwrap().abs()).fold(0.0, f64::max);
            r.within(format!("8a m={m}"), format!("shape invariance {}", label(&p, &prof)), si, 1e-9);

            // V_1 = (W^2 - W'/sqrt(M))/2 + k^2 e(m), W' from five-point differences
            // with a step proportional to the distance from the wall.
            let susy = xs
                .iter()
                .map(|&x| {
                    let step = 1e-3 * (h - x.abs());
                    let w = |y: f64| superpotential(&p, &prof, y).unwrap();
                    let wp = (w(x - 2.0 * step) - 8.0 * w(x - step) + 8.0 * w(x + step) - w(x + 2.0 * step)) / (12.0 * step);
                    let (v1, v2) = partner_potentials(&p, &prof, x).unwrap();
                    let root_m = prof.mass(x).unwrap().sqrt();
                    let scale = v1.abs().max(v2.abs()).max(1.0);
                    let e1 = (v1 - (0.5 * (w(x).powi(2) - wp / root_m) + em)).abs();
                    let e2 = (v2 - (0.5 * (w(x).powi(2) + wp / root_m) + em)).abs();
                    e1.max(e2) / scale
                })
                .fold(0.0, f64::max);
            r.within(format!("8b m={m}"), format!("V_1,2 = (W^2 -+ W'/sqrt M)/2 + e(m) {}", label(&p, &prof)), susy, 1e-7);
        }
    }
}

fn closed_forms(r: &mut Report) {
    let sets = [(1.0, 2.0, 0), (1.0, 2.0, 1), (0.5, -0.5, 0), (1.5, 2.5, 2)];
    let (mut norm, mut means, mut rhos) = (0.0f64, 0.0f64, 0.0f64);
    for &(a, b, m) in &sets {
        let p = unit(a, b, m);
        for j in [0.5, 5.0, 20.0, 80.0] {
            norm = norm.max(rel(norm_const(&p, j).unwrap(), norm_const_series(&p, j, 200).unwrap()));
            let w = weights(&p, j, 200).unwrap();
            let total: f64 = w.iter().sum();
            let s1: f64 = w.iter().enumerate().map(|(n, w)| n as f64 * w).sum::<f64>() / total;
            let s2: f64 = w.iter().enumerate().map(|(n, w)| (n * n) as f64 * w).sum::<f64>() / total;
            means = means.max(rel(mean_n(&p, j).unwrap(), s1)).max(rel(mean_n2(&p, j).unwrap(), s2));
        }
        for n in 0..=30 {
            rhos = rhos.max(rel(rho(&p, n).unwrap(), rho_product(&p, n).unwrap()));
        }
    }
    r.within("9 norm", "N closed form vs series", norm, 1e-10);
    r.within("9 moments", "<n>, <n^2> closed forms vs direct sums", means, 1e-10);
    r.within("9 rho", "rho_n closed form vs running product", rhos, 1e-10);

    let poly_sets = [(1.0, 2.0, 0), (1.0, 2.0, 1), (1.5, 2.5, 2), (2.0, 1.0, 1), (-0.5, -1.0 / 3.0, 1)];
    let (mut quad, mut ode) = (0.0f64, 0.0f64);
    for &(a, b, m) in &poly_sets {
        let x = XmParams::new(a, b, m).unwrap();
        for n in m..=m + 6 {
            let cf = xm_norm(n, n, &x).unwrap();
            quad = quad.max(rel(xm_overlap(n, n, &x, 1e-13).unwrap(), cf));
            for i in 0..41 {
                let g = -0.97 + 1.94 * i as f64 / 40.0;
                let scale = xm_jacobi_jet(n, &x, g).unwrap().d2.abs().max(1.0);
                ode = ode.max(ode_residual(n, &x, g).unwrap().abs() / scale);
            }
        }
    }
    r.within("9 norm integral", "closed-form X_m norm vs quadrature", quad, 1e-8);
    r.within("9 ode", "X_m differential equation residual, n <= m+6", ode, 1e-8);
}

fn autocorrelation_forms(r: &mut Report) {
    for m in 0..=2 {
        let p = unit(1.5, 2.5, m);
        let t_rev = timescales(&p, 1.0).unwrap().t_rev;
        for j in [10.0, 20.0, 40.0, 80.0] {
            let cs = CoherentState::new(&p, j, 50).unwrap();
            let worst = (0..=2048)
                .map(|i| {
                    let t = t_rev * i as f64 / 2048.0;
                    (cs.autocorrelation_sq(t) - cs.autocorrelation_sq_double_sum(t)).abs()
                })
                .fold(0.0, f64::max);
            r.within(format!("10 m={m} J={j}"), "direct vs double-sum |A(t)|^2 over [0, t_rev]", worst, 1e-9);
        }
    }
}

fn main() {
    let mut r = Report::default();
    mean_level(&mut r);
    classical_periods(&mut r);
    mandel_limits(&mut r);
    full_revival(&mut r);
    density_peak(&mut r);
    orthonormality(&mut r);
    hamiltonian(&mut r);
    shape_invariance(&mut r);
    closed_forms(&mut r);
    autocorrelation_forms(&mut r);
    r.finish();
}
