//! Report records and their CSV/JSON serialisation.
//!
//! Floats are written in shortest round-trip form, so re-parsing a report
//! gives back the exact values.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub const POTENTIAL_HEADER: [&str; 4] = ["r", "theta", "fast_eigenvalue", "potential"];
pub const SPECTRUM_HEADER: [&str; 6] = ["n", "lambda", "energy", "eta", "ratio", "converged"];
pub const SCAN_HEADER: [&str; 10] = [
    "mass_ratio",
    "subcritical",
    "beta",
    "e_2pi_over_beta",
    "energy_0",
    "energy_1",
    "energy_2",
    "deepest_n",
    "deepest_energy",
    "diagnostic",
];
pub const ORACLE_HEADER: [&str; 7] =
    ["n", "matched", "fd_coarse", "fd_fine", "fd_extrapolated", "abs_delta", "rel_delta"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialRow {
    pub r: f64,
    pub theta: f64,
    pub fast_eigenvalue: f64,
    pub potential: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialReport {
    pub schema: u32,
    pub config: RunConfig,
    pub exterior_coefficient: f64,
    pub rows: Vec<PotentialRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: i64,
    pub lambda: Option<f64>,
    pub energy: Option<f64>,
    pub eta: Option<f64>,
    /// `E_n/E_{n+1}`; absent on the last row and next to unconverged levels.
    pub ratio: Option<f64>,
    pub converged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub schema: u32,
    pub config: RunConfig,
    pub beta: f64,
    pub theta_beta: f64,
    pub e_2pi_over_beta: f64,
    pub n_start: i64,
    pub levels: Vec<LevelRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub mass_ratio: f64,
    pub subcritical: bool,
    pub beta: Option<f64>,
    pub e_2pi_over_beta: Option<f64>,
    pub energies: Vec<Option<f64>>,
    pub deepest_n: Option<i64>,
    pub deepest_energy: Option<f64>,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema: u32,
    pub config: RunConfig,
    pub critical_mass_ratio: f64,
    pub rows: Vec<ScanRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub n: i64,
    pub matched: f64,
    pub fd_coarse: f64,
    pub fd_fine: f64,
    pub fd_extrapolated: f64,
    pub abs_delta: f64,
    pub rel_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: u32,
    pub config: RunConfig,
    pub beta: f64,
    pub r_max: f64,
    pub points: usize,
    pub rows: Vec<OracleRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Potential(PotentialReport),
    Spectrum(SpectrumReport),
    Scan(ScanReport),
    Oracle(OracleReport),
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl Report {
    pub fn write<W: Write>(&self, format: OutputFormat, out: W) -> Result<(), CliError> {
        match format {
            OutputFormat::Json => self.write_json(out),
            OutputFormat::Csv => self.write_csv(out),
        }
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        let text = match self {
            Report::Potential(r) => serde_json::to_string_pretty(r),
            Report::Spectrum(r) => serde_json::to_string_pretty(r),
            Report::Scan(r) => serde_json::to_string_pretty(r),
            Report::Oracle(r) => serde_json::to_string_pretty(r),
        }
        .expect("reports contain only finite numbers and strings");
        writeln!(out, "{text}")?;
        Ok(())
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Output(io),
            other => CliError::Output(std::io::Error::other(format!("{other:?}"))),
        };
        match self {
            Report::Potential(r) => {
                w.write_record(POTENTIAL_HEADER).map_err(csv_err)?;
                for row in &r.rows {
                    w.write_record([num(row.r), num(row.theta), num(row.fast_eigenvalue), num(row.potential)])
                        .map_err(csv_err)?;
                }
            }
            Report::Spectrum(r) => {
                w.write_record(SPECTRUM_HEADER).map_err(csv_err)?;
                for l in &r.levels {
                    w.write_record([
                        l.n.to_string(),
                        opt(l.lambda),
                        opt(l.energy),
                        opt(l.eta),
                        opt(l.ratio),
                        l.converged.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            Report::Scan(r) => {
                w.write_record(SCAN_HEADER).map_err(csv_err)?;
                for row in &r.rows {
                    let e = |i: usize| opt(row.energies.get(i).copied().flatten());
                    w.write_record([
                        num(row.mass_ratio),
                        row.subcritical.to_string(),
                        opt(row.beta),
                        opt(row.e_2pi_over_beta),
                        e(0),
                        e(1),
                        e(2),
                        row.deepest_n.map(|n| n.to_string()).unwrap_or_default(),
                        opt(row.deepest_energy),
                        row.diagnostic.clone().unwrap_or_default(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            Report::Oracle(r) => {
                w.write_record(ORACLE_HEADER).map_err(csv_err)?;
                for row in &r.rows {
                    w.write_record([
                        row.n.to_string(),
                        num(row.matched),
                        num(row.fd_coarse),
                        num(row.fd_fine),
                        num(row.fd_extrapolated),
                        num(row.abs_delta),
                        num(row.rel_delta),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}
