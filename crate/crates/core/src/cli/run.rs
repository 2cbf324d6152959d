//! `susy-fpe run CONFIG`: frames for every `(s, t)` pair plus a summary table.

use std::path::{Path, PathBuf};

use super::config::RunConfig;
use super::csv::{label, Table};
use super::CliError;
use crate::error::Result;
use crate::oracles::{fd_cross_check, particle_cross_check, FdSettings, Grid, ParticleSettings};
use crate::spectral::{interpolated_solution, SolutionFrame};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_COLUMNS: [&str; 6] = ["s", "t", "mass", "min", "fd_l1", "particle_l1"];

pub fn frame_file(s: f64, t: f64) -> String {
    format!("frame_s{}_t{}.csv", label(s), label(t))
}

/// One summary row. Oracle distances are `None` when the oracle is disabled.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub s: f64,
    pub t: f64,
    pub mass: f64,
    pub min: f64,
    pub fd_l1: Option<f64>,
    pub particle_l1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    pub fn summary_table(&self) -> Table {
        let col = |f: &dyn Fn(&SummaryRow) -> f64| self.rows.iter().map(f).collect::<Vec<_>>();
        let mut table = Table::new();
        table.push(SUMMARY_COLUMNS[0], col(&|r| r.s));
        table.push(SUMMARY_COLUMNS[1], col(&|r| r.t));
        table.push(SUMMARY_COLUMNS[2], col(&|r| r.mass));
        table.push(SUMMARY_COLUMNS[3], col(&|r| r.min));
        table.push(SUMMARY_COLUMNS[4], col(&|r| r.fd_l1.unwrap_or(f64::NAN)));
        table.push(SUMMARY_COLUMNS[5], col(&|r| r.particle_l1.unwrap_or(f64::NAN)));
        table
    }
}

/// Computes every frame of `config`, without touching the file system.
pub fn compute_frames(config: &RunConfig) -> Result<Vec<SolutionFrame>> {
    let grid = Grid::uniform(config.grid.lo, config.grid.hi, config.grid.points)?;
    let mut frames = Vec::with_capacity(config.s_values.len() * config.times.len());
    for &s in &config.s_values {
        for &t in &config.times {
            frames.push(interpolated_solution(&config.coefficients, s, config.rule, &grid, t)?);
        }
    }
    Ok(frames)
}

/// Per-time FD and particle distances, `None` where the oracle is disabled.
type OracleColumns = (Vec<Option<f64>>, Vec<Option<f64>>);

fn oracle_distances(config: &RunConfig, s: f64) -> Result<OracleColumns> {
    let settings = &config.oracle_settings;
    let none = || vec![None; config.times.len()];
    let fd = if config.oracles.finite_difference {
        let fd = FdSettings { dt: settings.fd_dt, points: settings.fd_points };
        fd_cross_check(&config.coefficients, s, config.rule, fd, &config.times)?
            .into_iter()
            .map(Some)
            .collect()
    } else {
        none()
    };
    let particles = if config.oracles.particles {
        let ps = ParticleSettings {
            particles: settings.particles,
            dt: settings.particle_dt,
            bins: settings.bins,
            seed: config.seed,
        };
        particle_cross_check(&config.coefficients, s, config.rule, ps, &config.times)?
            .into_iter()
            .map(Some)
            .collect()
    } else {
        none()
    };
    Ok((fd, particles))
}

/// Writes one `x,P` CSV per frame and `summary.csv` into `dir`.
pub fn execute(config: &RunConfig, dir: &Path) -> Result<RunOutput, CliError> {
    let frames = compute_frames(config)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut rows = Vec::with_capacity(frames.len());
    let mut files = Vec::with_capacity(frames.len() + 1);
    let per_s = config.times.len();
    for (chunk, &s) in frames.chunks(per_s.max(1)).zip(&config.s_values) {
        let (fd, particles) = oracle_distances(config, s)?;
        for (k, frame) in chunk.iter().enumerate() {
            let path = dir.join(frame_file(s, frame.t));
            let mut table = Table::new();
            table.push("x", frame.grid.points().to_vec());
            table.push("P", frame.values.clone());
            table.write(&path).map_err(|e| CliError::io(&path, e))?;
            files.push(path);
            rows.push(SummaryRow {
                s,
                t: frame.t,
                mass: frame.mass(),
                min: frame.min_value(),
                fd_l1: fd[k],
                particle_l1: particles[k],
            });
        }
    }
    let mut output = RunOutput { rows, files };
    let path = dir.join(SUMMARY_FILE);
    output.summary_table().write(&path).map_err(|e| CliError::io(&path, e))?;
    output.files.push(path);
    Ok(output)
}
