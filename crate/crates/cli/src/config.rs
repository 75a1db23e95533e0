//! Command-line flags, the optional TOML file, and their merge into a
//! validated [`RunConfig`].

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "efimov",
    version,
    about = "Born-Oppenheimer Efimov spectra: effective potentials, bound states, mass-ratio scans and oracle checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// TOML file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Boson-to-light mass ratio M/m, light mass set to 1 [default: 50]
    #[arg(long, allow_negative_numbers = true, global = true, value_name = "M/m", conflicts_with_all = ["mu", "nu"])]
    pub mass_ratio: Option<f64>,
    /// Reduced mass of the boson pair (requires --nu)
    #[arg(long, allow_negative_numbers = true, global = true, requires = "nu")]
    pub mu: Option<f64>,
    /// Reduced mass of the light particle (requires --mu)
    #[arg(long, allow_negative_numbers = true, global = true, requires = "mu")]
    pub nu: Option<f64>,
    /// Cutoff radius
    #[arg(long, allow_negative_numbers = true, global = true)]
    pub r0: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub profile: Option<Profile>,
    /// Number of levels to solve for
    #[arg(long, global = true, value_name = "N")]
    pub levels: Option<usize>,
    /// Relative tolerance on each λₙ
    #[arg(long, allow_negative_numbers = true, global = true, value_name = "X")]
    pub tol: Option<f64>,
    /// Relative tolerance of the interior integration
    #[arg(long, allow_negative_numbers = true, global = true, value_name = "X")]
    pub ode_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long, global = true, value_enum)]
    pub units: Option<Units>,
    /// Write the report here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CommandArgs {
    /// Tabulate θ(r), the fast eigenvalue and v(r)
    FastPotential {
        /// Number of rows
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
        /// Largest radius, in units of r0
        #[arg(long, allow_negative_numbers = true)]
        rmax: Option<f64>,
    },
    /// Solve for bound states
    Spectrum,
    /// One summary row per mass ratio
    Scan {
        /// Comma-separated mass ratios
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_name = "LIST")]
        ratios: Vec<f64>,
    },
    /// Compare the matched solver with the finite-difference oracle
    Oracle {
        /// Box size in units of r0 (default 20/λ of the shallowest compared level)
        #[arg(long, allow_negative_numbers = true)]
        rmax: Option<f64>,
        /// Interior points of the coarse grid
        #[arg(long, value_name = "N")]
        points: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Bump,
    Quintic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// `reduced`: lengths in units of r0, energies in units of 1/(μ r0²).
/// `absolute`: code units with ħ = 1 and the configured masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    #[default]
    Reduced,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FastPotential,
    Spectrum,
    Scan,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassSpec {
    MassRatio(f64),
    Reduced { mu: f64, nu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub root: f64,
    pub ode: f64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Absent only for scans without a configured mass, whose rows carry
    /// their own mass ratios.
    pub masses: Option<MassSpec>,
    pub r0: f64,
    pub profile: Profile,
    pub n_levels: usize,
    pub tolerances: Tolerances,
    pub output: OutputFormat,
    pub units: Units,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub grid: usize,
    pub potential_rmax: f64,
    pub oracle_rmax: Option<f64>,
    pub oracle_points: usize,
    pub ratios: Vec<f64>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mass_ratio: Option<f64>,
    pub mu: Option<f64>,
    pub nu: Option<f64>,
    pub r0: Option<f64>,
    pub profile: Option<Profile>,
    pub levels: Option<usize>,
    pub tol: Option<f64>,
    pub ode_tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub units: Option<Units>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub fast_potential: FilePotential,
    #[serde(default)]
    pub scan: FileScan,
    #[serde(default)]
    pub oracle: FileOracle,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilePotential {
    pub grid: Option<usize>,
    pub rmax: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileScan {
    pub ratios: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOracle {
    pub rmax: Option<f64>,
    pub points: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_owned(), source: e })?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

pub const DEFAULT_MASS_RATIO: f64 = 50.0;
pub const DEFAULT_R0: f64 = 1.0;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const DEFAULT_ODE_TOL: f64 = 1e-11;
pub const DEFAULT_GRID: usize = 100;
pub const DEFAULT_POTENTIAL_RMAX: f64 = 2.0;
pub const DEFAULT_ORACLE_POINTS: usize = 200_000;

fn default_levels(command: Command) -> usize {
    match command {
        Command::Spectrum | Command::FastPotential => 5,
        Command::Scan => 3,
        Command::Oracle => 2,
    }
}

fn mass_spec(
    mass_ratio: Option<f64>,
    mu: Option<f64>,
    nu: Option<f64>,
    origin: &str,
) -> Result<Option<MassSpec>, CliError> {
    match (mass_ratio, mu, nu) {
        (None, None, None) => Ok(None),
        (Some(r), None, None) => Ok(Some(MassSpec::MassRatio(r))),
        (None, Some(mu), Some(nu)) => Ok(Some(MassSpec::Reduced { mu, nu })),
        (Some(_), _, _) => Err(CliError::Usage(format!("{origin}: give either a mass ratio or (μ, ν), not both"))),
        _ => Err(CliError::Usage(format!("{origin}: μ and ν must be given together"))),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    /// Merges flags over the file over built-in defaults and validates the
    /// result.
    pub fn resolve(cli: &Cli, file: &FileConfig) -> Result<Self, CliError> {
        let a = &cli.common;
        let command = match cli.command {
            CommandArgs::FastPotential { .. } => Command::FastPotential,
            CommandArgs::Spectrum => Command::Spectrum,
            CommandArgs::Scan { .. } => Command::Scan,
            CommandArgs::Oracle { .. } => Command::Oracle,
        };
        let from_flags = mass_spec(a.mass_ratio, a.mu, a.nu, "flags")?;
        let from_file = mass_spec(file.mass_ratio, file.mu, file.nu, "config file")?;
        let masses = match from_flags.or(from_file) {
            Some(m) => Some(m),
            None if command == Command::Scan => None,
            None => Some(MassSpec::MassRatio(DEFAULT_MASS_RATIO)),
        };
        match masses {
            Some(MassSpec::MassRatio(r)) => {
                positive("mass ratio", r)?;
            }
            Some(MassSpec::Reduced { mu, nu }) => {
                positive("μ", mu)?;
                positive("ν", nu)?;
            }
            None => {}
        }

        let (grid, potential_rmax, oracle_rmax, oracle_points, ratios) = match &cli.command {
            CommandArgs::FastPotential { grid, rmax } => (
                grid.or(file.fast_potential.grid).unwrap_or(DEFAULT_GRID),
                rmax.or(file.fast_potential.rmax).unwrap_or(DEFAULT_POTENTIAL_RMAX),
                None,
                DEFAULT_ORACLE_POINTS,
                Vec::new(),
            ),
            CommandArgs::Oracle { rmax, points } => (
                DEFAULT_GRID,
                DEFAULT_POTENTIAL_RMAX,
                rmax.or(file.oracle.rmax),
                points.or(file.oracle.points).unwrap_or(DEFAULT_ORACLE_POINTS),
                Vec::new(),
            ),
            CommandArgs::Scan { ratios } => {
                let list =
                    if ratios.is_empty() { file.scan.ratios.clone().unwrap_or_default() } else { ratios.clone() };
                (DEFAULT_GRID, DEFAULT_POTENTIAL_RMAX, None, DEFAULT_ORACLE_POINTS, list)
            }
            CommandArgs::Spectrum => (DEFAULT_GRID, DEFAULT_POTENTIAL_RMAX, None, DEFAULT_ORACLE_POINTS, Vec::new()),
        };

        let config = Self {
            command,
            masses,
            r0: positive("r0", a.r0.or(file.r0).unwrap_or(DEFAULT_R0))?,
            profile: a.profile.or(file.profile).unwrap_or(Profile::Bump),
            n_levels: a.levels.or(file.levels).unwrap_or_else(|| default_levels(command)),
            tolerances: Tolerances {
                root: a.tol.or(file.tol).unwrap_or(DEFAULT_ROOT_TOL),
                ode: a.ode_tol.or(file.ode_tol).unwrap_or(DEFAULT_ODE_TOL),
            },
            output: a.format.or(file.format).unwrap_or_default(),
            units: a.units.or(file.units).unwrap_or_default(),
            output_path: a.out.clone().or_else(|| file.out.clone()),
            grid,
            potential_rmax,
            oracle_rmax,
            oracle_points,
            ratios,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n_levels == 0 {
            return Err(CliError::Usage("--levels must be at least 1".into()));
        }
        if !(self.tolerances.root > 0.0 && self.tolerances.root < 1e-3) {
            return Err(CliError::Usage(format!("--tol must lie in (0, 1e-3), got {}", self.tolerances.root)));
        }
        if !(self.tolerances.ode > 1e-14 && self.tolerances.ode < 1e-3) {
            return Err(CliError::Usage(format!("--ode-tol must lie in (1e-14, 1e-3), got {}", self.tolerances.ode)));
        }
        match self.command {
            Command::FastPotential => {
                if self.grid == 0 {
                    return Err(CliError::Usage("--grid must be at least 1".into()));
                }
                positive("--rmax", self.potential_rmax)?;
            }
            Command::Oracle => {
                if let Some(r) = self.oracle_rmax {
                    positive("--rmax", r)?;
                }
                if self.oracle_points < 100 {
                    return Err(CliError::Usage("--points must be at least 100".into()));
                }
            }
            Command::Scan => {
                if self.ratios.is_empty() {
                    return Err(CliError::Usage("scan needs --ratios".into()));
                }
                for &r in &self.ratios {
                    positive("every scanned mass ratio", r)?;
                }
            }
            Command::Spectrum => {}
        }
        Ok(())
    }
}
