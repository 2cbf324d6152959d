//! The two built-in figure configurations and their CSV output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::csv::{label, Table};
use super::CliError;
use crate::error::Result;
use crate::models::{InterpolationRule, ParameterSet};
use crate::oracles::Grid;
use crate::spectral::{interpolated_solution, SolutionFrame, SpectralCoefficients};

/// Grid resolution of the emitted figure frames.
pub const FIGURE_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureName {
    Fig1,
    Fig2,
}

impl FromStr for FigureName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(FigureName::Fig1),
            "fig2" => Ok(FigureName::Fig2),
            other => Err(format!("unknown figure `{other}` (expected fig1 or fig2)")),
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureName::Fig1 => "fig1",
            FigureName::Fig2 => "fig2",
        })
    }
}

/// Parameters, coefficients, times and scaled potential of one figure.
#[derive(Debug, Clone)]
pub struct FigureSpec {
    pub name: FigureName,
    pub coefficients: SpectralCoefficients,
    /// In caption order.
    pub times: Vec<f64>,
    pub s_values: Vec<f64>,
    pub grid: Grid,
}

impl FigureSpec {
    pub fn new(name: FigureName) -> Result<FigureSpec> {
        let (params, c, times) = match name {
            FigureName::Fig1 => {
                (ParameterSet::radial(1.0, 1.0)?, vec![5.0, 1.0, 1.0], vec![0.1, 0.03, 0.5, 1.0])
            }
            FigureName::Fig2 => {
                (ParameterSet::morse(5.0, 1.0)?, vec![3.0, 2.0, 1.0], vec![0.01, 0.05, 1.0, 5.0])
            }
        };
        let iv = params.default_truncation();
        Ok(FigureSpec {
            name,
            coefficients: SpectralCoefficients::new(params, c)?,
            times,
            s_values: vec![0.0, 0.3, 0.7, 1.0],
            grid: Grid::uniform(iv.lo, iv.hi, FIGURE_GRID_POINTS)?,
        })
    }

    pub fn params(&self) -> &ParameterSet {
        self.coefficients.params()
    }

    /// `W_0/3` (fig1) or `(W_0 + 3)/4` (fig2).
    pub fn scaled_potential(&self, x: f64) -> Result<f64> {
        let w = self.params().prepotential(x)?;
        Ok(match self.name {
            FigureName::Fig1 => w / 3.0,
            FigureName::Fig2 => (w + 3.0) / 4.0,
        })
    }

    /// One frame per s-value at time `t`.
    pub fn frames_at(&self, t: f64) -> Result<Vec<SolutionFrame>> {
        self.s_values
            .iter()
            .map(|&s| interpolated_solution(&self.coefficients, s, InterpolationRule::Linear, &self.grid, t))
            .collect()
    }

    pub fn density_file(&self, t: f64) -> String {
        format!("{}_t{}.csv", self.name, label(t))
    }

    pub fn prepotential_file(&self) -> String {
        format!("{}_prepotential.csv", self.name)
    }

    /// Table with columns `x, potential, P_s=…` for time `t`.
    pub fn density_table(&self, t: f64) -> Result<Table> {
        let mut table = Table::new();
        table.push("x", self.grid.points().to_vec());
        let potential = self
            .grid
            .points()
            .iter()
            .map(|&x| self.scaled_potential(x))
            .collect::<Result<Vec<_>>>()?;
        table.push("potential", potential);
        for frame in self.frames_at(t)? {
            table.push(format!("P_s={}", frame.s), frame.values);
        }
        Ok(table)
    }

    /// Table with columns `x, W_s=…` for the prepotential panel.
    pub fn prepotential_table(&self) -> Result<Table> {
        let mut table = Table::new();
        table.push("x", self.grid.points().to_vec());
        for &s in &self.s_values {
            let a_s = self.params().interpolate(s, InterpolationRule::Linear)?;
            let w = self
                .grid
                .points()
                .iter()
                .map(|&x| a_s.prepotential(x))
                .collect::<Result<Vec<_>>>()?;
            table.push(format!("W_s={s}"), w);
        }
        Ok(table)
    }
}

/// Writes the figure CSVs into `dir` and returns their paths.
///
/// fig1 emits one file per caption time plus the prepotential panel; fig2 emits one
/// file per caption time.
pub fn write_figure(name: FigureName, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let spec = FigureSpec::new(name)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for &t in &spec.times {
        let path = dir.join(spec.density_file(t));
        spec.density_table(t)?.write(&path).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    if name == FigureName::Fig1 {
        let path = dir.join(spec.prepotential_file());
        spec.prepotential_table()?.write(&path).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
