use efimov_core::oracle::{fd_spectrum_richardson, RadialGrid};
use efimov_core::slow::{critical_mass_ratio, solve_spectrum_with};
use efimov_core::{
    beta_param, effective_potential, fast_eigenvalue, CutoffProfile, Error, ModelParams, RadialPotential, Spectrum,
    SpectrumOptions,
};
use rayon::prelude::*;

use crate::config::{MassSpec, Profile, RunConfig, Units};
use crate::error::CliError;
use crate::report::{
    LevelRow, OracleReport, OracleRow, PotentialReport, PotentialRow, Report, ScanReport, ScanRow, SpectrumReport,
    SCHEMA_VERSION,
};

/// A finished report, per-level warnings for standard error, and whether
/// the run as a whole failed to converge.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
    pub failed: bool,
}

/// Conversion from code units to the configured output units.
#[derive(Debug, Clone, Copy)]
struct Scale {
    length: f64,
    energy: f64,
    fast_energy: f64,
    potential: f64,
}

impl Scale {
    fn new(config: &RunConfig, params: &ModelParams<f64>) -> Self {
        let r0 = config.r0;
        match config.units {
            Units::Reduced => Self {
                length: 1.0 / r0,
                energy: params.mu() * r0 * r0,
                fast_energy: params.nu() * r0 * r0,
                potential: r0 * r0,
            },
            Units::Absolute => Self { length: 1.0, energy: 1.0, fast_energy: 1.0, potential: 1.0 },
        }
    }
}

fn profile(config: &RunConfig) -> Result<CutoffProfile<f64>, CliError> {
    Ok(match config.profile {
        Profile::Bump => CutoffProfile::bump(config.r0)?,
        Profile::Quintic => CutoffProfile::quintic(config.r0)?,
    })
}

fn params_for(config: &RunConfig, masses: MassSpec) -> Result<ModelParams<f64>, CliError> {
    let profile = profile(config)?;
    Ok(match masses {
        MassSpec::MassRatio(r) => ModelParams::from_mass_ratio(r, profile)?,
        MassSpec::Reduced { mu, nu } => ModelParams::from_mu_nu(mu, nu, profile)?,
    })
}

fn params(config: &RunConfig) -> Result<ModelParams<f64>, CliError> {
    let masses = config.masses.ok_or_else(|| CliError::Usage("no masses configured".into()))?;
    params_for(config, masses)
}

fn options(config: &RunConfig) -> SpectrumOptions<f64> {
    SpectrumOptions { root_tol: config.tolerances.root, ode_tol: config.tolerances.ode, ..SpectrumOptions::default() }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    use crate::config::Command;
    match config.command {
        Command::FastPotential => fast_potential(config),
        Command::Spectrum => spectrum(config),
        Command::Scan => scan(config),
        Command::Oracle => oracle(config),
    }
}

pub fn fast_potential(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = params(config)?;
    let scale = Scale::new(config, &p);
    let pot = effective_potential(&p);
    let rows = (1..=config.grid)
        .map(|i| {
            let r = config.r0 * config.potential_rmax * i as f64 / config.grid as f64;
            let e = fast_eigenvalue(&p, r)?;
            Ok(PotentialRow {
                r: r * scale.length,
                theta: p.profile.theta(r),
                fast_eigenvalue: e * scale.fast_energy,
                potential: pot.eval(r) * scale.potential,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = PotentialReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        exterior_coefficient: pot.exterior_coefficient(),
        rows,
    };
    Ok(Outcome { report: Report::Potential(report), warnings: Vec::new(), failed: false })
}

fn level_rows(spectrum: &Spectrum<f64>, scale: Scale) -> (Vec<LevelRow>, Vec<String>) {
    let energy_scale = scale.energy;
    let mut failures = Vec::new();
    let mut rows: Vec<LevelRow> = spectrum
        .levels
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let n = spectrum.n_start + i as i64;
            match level {
                Ok(l) => LevelRow {
                    n,
                    lambda: Some(l.lambda_n / scale.length),
                    energy: Some(l.energy * energy_scale),
                    eta: Some(l.eta_n),
                    ratio: None,
                    converged: true,
                    diagnostic: None,
                },
                Err(e) => {
                    failures.push(format!("level {n}: {e}"));
                    LevelRow {
                        n,
                        lambda: None,
                        energy: None,
                        eta: None,
                        ratio: None,
                        converged: false,
                        diagnostic: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();
    for i in 0..rows.len().saturating_sub(1) {
        if let (Some(a), Some(b)) = (rows[i].energy, rows[i + 1].energy) {
            rows[i].ratio = Some(a / b);
        }
    }
    (rows, failures)
}

pub fn spectrum(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = params(config)?;
    let scale = Scale::new(config, &p);
    let s = solve_spectrum_with(&p, config.n_levels, &options(config))?;
    let (levels, warnings) = level_rows(&s, scale);
    let failed = levels.iter().all(|l| !l.converged);
    let report = SpectrumReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        beta: s.beta.beta,
        theta_beta: s.gamma.theta_beta,
        e_2pi_over_beta: s.beta.energy_ratio(),
        n_start: s.n_start,
        levels,
    };
    Ok(Outcome { report: Report::Spectrum(report), warnings, failed })
}

fn scan_row(config: &RunConfig, ratio: f64) -> ScanRow {
    let mut row = ScanRow {
        mass_ratio: ratio,
        subcritical: false,
        beta: None,
        e_2pi_over_beta: None,
        energies: vec![None; 3],
        deepest_n: None,
        deepest_energy: None,
        diagnostic: None,
    };
    let p = match params_for(config, MassSpec::MassRatio(ratio)) {
        Ok(p) => p,
        Err(e) => {
            row.diagnostic = Some(e.to_string());
            return row;
        }
    };
    match beta_param(&p) {
        Ok(b) => {
            row.beta = Some(b.beta);
            row.e_2pi_over_beta = Some(b.energy_ratio());
        }
        Err(e) => {
            row.subcritical = matches!(e, Error::NoEfimovRegime { .. });
            row.diagnostic = Some(e.to_string());
            return row;
        }
    }
    let scale = Scale::new(config, &p);
    // one spare index, since the first candidate bracket can be empty
    match solve_spectrum_with(&p, config.n_levels.max(3) + 1, &options(config)) {
        Ok(s) => {
            for (slot, level) in row.energies.iter_mut().zip(s.converged()) {
                *slot = Some(level.energy * scale.energy);
            }
            if let Some(deepest) = s.converged().min_by(|a, b| a.energy.total_cmp(&b.energy)) {
                row.deepest_n = Some(deepest.n);
                row.deepest_energy = Some(deepest.energy * scale.energy);
            }
            let failed: Vec<String> = s
                .levels
                .iter()
                .enumerate()
                .filter_map(|(i, l)| l.as_ref().err().map(|e| format!("level {}: {e}", s.n_start + i as i64)))
                .collect();
            if !failed.is_empty() {
                row.diagnostic = Some(failed.join("; "));
            }
        }
        Err(e) => row.diagnostic = Some(e.to_string()),
    }
    row
}

/// Rows are independent, so they run in parallel; `collect` keeps the
/// input order.
pub fn scan(config: &RunConfig) -> Result<Outcome, CliError> {
    let rows: Vec<ScanRow> = config.ratios.par_iter().map(|&r| scan_row(config, r)).collect();
    let report =
        ScanReport { schema: SCHEMA_VERSION, config: config.clone(), critical_mass_ratio: critical_mass_ratio(), rows };
    Ok(Outcome { report: Report::Scan(report), warnings: Vec::new(), failed: false })
}

pub fn oracle(config: &RunConfig) -> Result<Outcome, CliError> {
    let p = params(config)?;
    let scale = Scale::new(config, &p);
    let beta = beta_param(&p)?;
    let s = solve_spectrum_with(&p, config.n_levels, &options(config))?;
    let matched: Vec<_> = s.levels.iter().map(|l| l.as_ref().map_err(Clone::clone)).collect::<Result<_, _>>()?;
    let shallowest = matched.last().expect("at least one level").lambda_n;
    let r_max = match config.oracle_rmax {
        Some(r) => r * config.r0,
        None => 20.0 / shallowest,
    };
    let grid = RadialGrid::new(r_max, config.oracle_points)?;
    let pot = effective_potential(&p);
    let fd = fd_spectrum_richardson(&pot, &beta, &grid, matched.len()).map_err(|e| match e {
        Error::InsufficientDomain { .. } => CliError::Convergence(format!("{e}; increase --rmax")),
        other => other.into(),
    })?;
    let fine = fd.richardson_pair.as_ref().expect("richardson pair").eigenvalues.clone();
    let extrapolated = fd.extrapolated().expect("richardson pair");
    if extrapolated.len() < matched.len() {
        return Err(CliError::Convergence(format!(
            "the finite-difference box holds {} bound states, {} requested; increase --rmax",
            extrapolated.len(),
            matched.len()
        )));
    }
    // the finite-difference eigenvalues are μE
    let to_units = scale.energy / p.mu();
    let rows = matched
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let m = l.energy * p.mu();
            let x = extrapolated[j];
            OracleRow {
                n: l.n,
                matched: m * to_units,
                fd_coarse: fd.eigenvalues[j] * to_units,
                fd_fine: fine[j] * to_units,
                fd_extrapolated: x * to_units,
                abs_delta: (x - m).abs() * to_units,
                rel_delta: (x - m).abs() / m.abs(),
            }
        })
        .collect();
    let report = OracleReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        beta: beta.beta,
        r_max: r_max * scale.length,
        points: config.oracle_points,
        rows,
    };
    Ok(Outcome { report: Report::Oracle(report), warnings: Vec::new(), failed: false })
}
