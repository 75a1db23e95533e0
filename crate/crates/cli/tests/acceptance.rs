//! Acceptance gates for the solver, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p efimov-cli --test acceptance -- --nocapture` to
//! see the report.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use efimov_cli::main_with_args;
use efimov_cli::report::ScanReport;
use efimov_core::fast::fast_solution;
use efimov_core::oracle::{fd_spectrum_richardson, RadialGrid};
use efimov_core::slow::{matching_jump, solve_spectrum_with};
use efimov_core::specialfn::{macdonald_quadrature, small_z_crossover};
use efimov_core::{
    beta_param, effective_potential, gamma_phase, integrate_inner, lambert_w0, macdonald, macdonald_small_z,
    solve_spectrum, CutoffProfile, ModelParams, RadialPotential, SpectrumOptions,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Gates that cannot be met as stated. Each is still evaluated and printed
/// as FAIL; the test only requires the measured failure to stay where the
/// analysis puts it.
const KNOWN_UNATTAINABLE: &[&str] = &["large-z β=1"];

struct Gate {
    name: String,
    pass: bool,
    detail: String,
}

impl Gate {
    fn new(name: impl Into<String>, pass: bool, detail: String) -> Self {
        Self { name: name.into(), pass, detail }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    gates: Vec<Gate>,
    elapsed: Duration,
}

fn bump_model(ratio: f64, r0: f64) -> ModelParams<f64> {
    ModelParams::from_mass_ratio(ratio, CutoffProfile::bump(r0).unwrap()).unwrap()
}

struct Constant {
    depth: f64,
    r0: f64,
    tail: f64,
}

impl RadialPotential<f64> for Constant {
    fn r0(&self) -> f64 {
        self.r0
    }

    fn eval(&self, r: f64) -> f64 {
        if r <= self.r0 {
            -self.depth
        } else {
            -self.tail / (r * r)
        }
    }
}

fn geometric_law() -> Vec<Gate> {
    let start = Instant::now();
    let s = solve_spectrum(&bump_model(50.0, 1.0), 6, 1e-12).unwrap();
    let elapsed = start.elapsed();
    let target = s.beta.energy_ratio();
    let dev: Vec<f64> = s.ratios().iter().map(|r| (r - target).abs() / target).collect();
    let all = s.levels.iter().all(|l| l.is_ok());
    let below = dev.len() >= 4 && dev[3] < 1e-3;
    let monotone = dev.len() >= 5 && dev[1..].windows(2).all(|w| w[1] < w[0]);
    vec![
        Gate::new("six levels converged", all && dev.len() == 5, format!("{} ratios", dev.len())),
        Gate::new(
            "4th ratio within 1e-3",
            below,
            format!("deviations {}", dev.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(" ")),
        ),
        Gate::new("monotone from the 2nd ratio", monotone, String::new()),
        Gate::new("runtime ≤ 10 s", elapsed <= Duration::from_secs(10), format!("{elapsed:.2?}")),
    ]
}

fn oracle_agreement() -> Vec<Gate> {
    let start = Instant::now();
    let p = bump_model(50.0, 1.0);
    let s = solve_spectrum(&p, 2, 1e-12).unwrap();
    let levels: Vec<_> = s.converged().copied().collect();
    let mut gates = vec![Gate::new("ground and first excited converged", levels.len() == 2, String::new())];
    if levels.len() < 2 {
        return gates;
    }
    let r_max = 20.0 / levels[1].lambda_n;
    let grid = RadialGrid::new(r_max, 200_000).unwrap();
    let pot = effective_potential(&p);
    let fd = fd_spectrum_richardson(&pot, &s.beta, &grid, 2).unwrap();
    let x = fd.extrapolated().unwrap();
    let elapsed = start.elapsed();
    for (j, l) in levels.iter().enumerate() {
        let m = l.energy * p.mu();
        let rel = (x[j] - m).abs() / m.abs();
        gates.push(Gate::new(format!("level {} within 5e-3", l.n), rel <= 5e-3, format!("rel {rel:.2e}")));
    }
    gates.push(Gate::new("grid ≥ 2e5 points, r_max ≥ 20/λ", true, format!("r_max {r_max:.3}")));
    gates.push(Gate::new("runtime ≤ 60 s", elapsed <= Duration::from_secs(60), format!("{elapsed:.2?}")));
    gates
}

fn constant_potential() -> Vec<Gate> {
    let beta = beta_param(&bump_model(50.0, 1.0)).unwrap();
    let r0 = 1.0;
    let lambda0_sq = beta.tail_strength() / (r0 * r0);
    let well = Constant { depth: lambda0_sq, r0, tail: beta.tail_strength() };
    let lambda0 = lambda0_sq.sqrt();
    let mut worst = 0.0_f64;
    for i in 1..=50 {
        let lambda = lambda0 * i as f64 / 50.0;
        let k = (lambda0_sq - lambda * lambda).max(0.0).sqrt();
        let exact = if k == 0.0 { r0 } else { (k * r0).sin() / k };
        let w = integrate_inner(&well, lambda, 1e-12).unwrap().w_r0;
        worst = worst.max((w - exact).abs() / exact.abs());
    }
    vec![Gate::new("50 values of λ within 1e-9", worst <= 1e-9, format!("worst {worst:.2e}"))]
}

fn fast_residual() -> Vec<Gate> {
    let mut rng = StdRng::seed_from_u64(0x0e51_a0f5);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let nu = 10f64.powf(rng.random_range(-3.0..3.0));
        let y = rng.random_range(1e-9..1.5);
        for profile in [CutoffProfile::bump(1.0).unwrap(), CutoffProfile::quintic(1.0).unwrap()] {
            let p = ModelParams::from_mu_nu(1.0, nu, profile).unwrap();
            let s = fast_solution(&p, y).unwrap();
            let e_theta = s.theta.exp();
            worst = worst.max((s.s * s.s.exp() - e_theta).abs() / e_theta);
        }
    }
    let w1 = lambert_w0(1.0_f64).unwrap();
    let mut worst_tail = 0.0_f64;
    for profile in [CutoffProfile::bump(1.0).unwrap(), CutoffProfile::quintic(1.0).unwrap()] {
        let p = bump_model(50.0, 1.0).with_profile(profile);
        let expected = -p.mu_over_nu() * w1 * w1;
        let pot = effective_potential(&p);
        for i in 0..1000 {
            let r = 1.0 + 99.0 * i as f64 / 999.0;
            worst_tail = worst_tail.max((pot.eval(r) * r * r - expected).abs() / expected.abs());
        }
    }
    vec![
        Gate::new("Lambert residual ≤ 1e-12·e^θ", worst <= 1e-12, format!("worst {worst:.2e}")),
        Gate::new("exterior v·r² within 1e-13", worst_tail <= 1e-13, format!("worst {worst_tail:.2e}")),
    ]
}

/// `|Γ(1+iβ)|² = Π 1/(1 + β²/k²)`, with the tail past `N` closed by
/// Euler–Maclaurin.
fn gamma_modulus_product(beta: f64) -> f64 {
    const N: usize = 100_000;
    let b2 = beta * beta;
    let f = |t: f64| (b2 / (t * t)).ln_1p();
    let direct: f64 = (1..=N).rev().map(|k| f(k as f64)).sum();
    let n = N as f64;
    let integral = 2.0 * beta * (beta / n).atan() - n * f(n);
    let df = -2.0 * b2 / (n * (n * n + b2));
    (-(direct + integral - f(n) / 2.0 - df / 12.0)).exp()
}

fn special_functions() -> Vec<Gate> {
    let w1 = lambert_w0(1.0_f64).unwrap();
    let mut gates = vec![Gate::new("W(1)", (w1 - 0.567_143_290_4).abs() <= 1e-10, format!("{w1}"))];

    let mut worst = 0.0_f64;
    for i in 0..=1000 {
        let beta = 10.0 * i as f64 / 1000.0;
        let exact = gamma_modulus_product(beta);
        worst = worst.max((gamma_phase(beta).abs_sq - exact).abs() / exact);
        worst = worst.max((PI * beta / (PI * beta).sinh() - exact).abs() / exact * f64::from(beta > 0.0));
    }
    gates.push(Gate::new("|Γ(1+iβ)|² on [0, 10]", worst <= 1e-12, format!("worst {worst:.2e}")));

    // relative to the oscillation amplitude, since K itself has zeros there
    let mut worst = 0.0_f64;
    for beta in [0.0, 0.5, 1.0, 2.805_655_123_921_171, 5.0] {
        let amp = if beta == 0.0 { 1.0 } else { (PI / (beta * (PI * beta).sinh())).sqrt() };
        let xc = small_z_crossover(beta);
        for factor in [0.5, 0.8, 1.0, 1.25, 2.0] {
            let x = xc * factor;
            let q = macdonald_quadrature(beta, x).unwrap().value;
            let a = macdonald_small_z(beta, x).value;
            worst = worst.max((q - a).abs() / amp.max(a.abs()));
        }
    }
    gates.push(Gate::new("small-z crossover within 1e-6", worst <= 1e-6, format!("worst {worst:.2e}")));

    let z = 10.0_f64;
    for beta in [0.0_f64, 1.0] {
        let k = macdonald(beta, z).unwrap().value;
        let corrected = (PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 - (4.0 * beta * beta + 1.0) / (8.0 * z));
        let rel = (k - corrected).abs() / k;
        let next = (4.0 * beta * beta + 1.0) * (4.0 * beta * beta + 9.0) / (128.0 * z * z);
        gates.push(Gate::new(format!("large-z β={beta}"), rel <= 1e-3, format!("rel {rel:.2e}, next term {next:.2e}")));
    }
    gates
}

fn regime_boundary() -> Vec<Gate> {
    let rejects = beta_param(&bump_model(1.0, 1.0)).is_err();
    let accepts = beta_param(&bump_model(2.0, 1.0)).is_ok();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.json");
    let code = main_with_args([
        "efimov",
        "scan",
        "--ratios",
        "0.5,1,1.06,2,10,50",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    let report: ScanReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let flagged: Vec<f64> = report.rows.iter().filter(|r| r.subcritical).map(|r| r.mass_ratio).collect();
    vec![
        Gate::new("rejects M/m = 1", rejects, String::new()),
        Gate::new("accepts M/m = 2", accepts, String::new()),
        Gate::new(
            "scan flags exactly {0.5, 1}",
            code == 0 && flagged == [0.5, 1.0],
            format!("flagged {flagged:?}, critical {:.6}", report.critical_mass_ratio),
        ),
    ]
}

fn invariances() -> Vec<Gate> {
    let base = solve_spectrum(&bump_model(50.0, 1.0), 6, 1e-12).unwrap();
    let mut worst_scale = 0.0_f64;
    for sigma in [0.1, 3.0] {
        let s = solve_spectrum(&bump_model(50.0, sigma), 6, 1e-12).unwrap();
        for (a, b) in base.converged().zip(s.converged()) {
            let expected = a.lambda_n / sigma;
            worst_scale = worst_scale.max((b.lambda_n - expected).abs() / expected);
        }
    }
    let mut worst_gauge = 0.0_f64;
    for slope in [1e-3, 7.5, -2.0] {
        let options = SpectrumOptions { inner_slope: slope, ..SpectrumOptions::default() };
        let s = solve_spectrum_with(&bump_model(50.0, 1.0), 6, &options).unwrap();
        for (a, b) in base.converged().zip(s.converged()) {
            worst_gauge = worst_gauge.max((a.lambda_n - b.lambda_n).abs() / a.lambda_n);
        }
    }
    let pot = effective_potential(&bump_model(50.0, 1.0));
    let (mut du, mut ddu) = (0.0_f64, 0.0_f64);
    let mut count = 0;
    for l in base.converged() {
        let (a, b) = matching_jump(l, &pot, &base.beta).unwrap();
        du = du.max(a);
        ddu = ddu.max(b);
        count += 1;
    }
    vec![
        Gate::new("λ ↦ λ/σ within 1e-10", worst_scale <= 1e-10, format!("worst {worst_scale:.2e}")),
        Gate::new("inner slope gauge", worst_gauge <= 1e-10, format!("worst {worst_gauge:.2e}")),
        Gate::new(
            "C¹ matching at r0",
            count == 6 && du <= 1e-9 && ddu <= 1e-8,
            format!("{count} levels, jumps {du:.1e} / {ddu:.1e}"),
        ),
    ]
}

fn timed(id: u32, title: &'static str, f: fn() -> Vec<Gate>) -> Criterion {
    let start = Instant::now();
    let gates = f();
    Criterion { id, title, gates, elapsed: start.elapsed() }
}

#[test]
fn acceptance() {
    let criteria = [
        timed(1, "geometric law", geometric_law),
        timed(2, "oracle agreement", oracle_agreement),
        timed(3, "constant potential", constant_potential),
        timed(4, "fast-dynamics residual", fast_residual),
        timed(5, "special functions", special_functions),
        timed(6, "regime boundary", regime_boundary),
        timed(7, "invariances", invariances),
    ];
    let mut unexpected = Vec::new();
    for c in &criteria {
        let pass = c.gates.iter().all(|g| g.pass);
        println!("{} criterion {}: {} ({:.2?})", if pass { "PASS" } else { "FAIL" }, c.id, c.title, c.elapsed);
        for g in &c.gates {
            println!("    {} {}{}", if g.pass { "ok  " } else { "FAIL" }, g.name, fmt_detail(&g.detail));
            if !g.pass && !KNOWN_UNATTAINABLE.contains(&g.name.as_str()) {
                unexpected.push(format!("criterion {}: {}", c.id, g.name));
            }
        }
    }
    assert!(unexpected.is_empty(), "failed gates: {unexpected:?}");
}

fn fmt_detail(d: &str) -> String {
    if d.is_empty() {
        String::new()
    } else {
        format!(": {d}")
    }
}

/// The first-order Hankel form at `z = 10` is off by roughly the next term,
/// `(4β²+1)(4β²+9)/(128z²)`, which is 4.9e-3 at `β = 1`.
#[test]
fn unattainable_large_z_gate_fails_by_the_next_term() {
    let gates = special_functions();
    let g = gates.iter().find(|g| g.name == "large-z β=1").unwrap();
    assert!(!g.pass);
    let z = 10.0_f64;
    let k = macdonald(1.0_f64, z).unwrap().value;
    let corrected = (PI / (2.0 * z)).sqrt() * (-z).exp() * (1.0 - 5.0 / (8.0 * z));
    let rel = (k - corrected).abs() / k;
    let next = 5.0 * 13.0 / (128.0 * z * z);
    assert!(rel > 1e-3 && rel < next, "{rel:e}");
    assert!(gates.iter().find(|g| g.name == "large-z β=0").unwrap().pass);
}
